//! Orthogonality measures, their polynomials and normalisation constants.
//!
//! Hahn and q-Hahn use the parametrisation in which the measure is
//! `C(N,x) (a)_x (b)_{N-x} / (a+b)_N` (and its q-analogue with an extra `a^{N-x}`),
//! so that `a` is attached to `x` and `b` to `N - x`.

mod limits;
mod truncation;

pub use limits::{limit_map, LimitMap};
pub use truncation::{truncate, truncate_for_degree};

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::numerics::pochhammer::{binomial, pochhammer, q_binomial, q_pochhammer, q_pochhammer_inf};
use crate::numerics::{Rational, Scalar, SeriesSpec};

/// Default tail tolerance for semi-infinite truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
/// Largest admissible semi-infinite truncation point.
pub const MAX_TRUNCATION: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    Krawtchouk,
    Charlier,
    Hahn,
    Meixner,
    QHahn,
    QMeixner,
    QMeixnerSecond,
    LittleQJacobiMeasure,
}

impl FamilyId {
    pub fn is_finite(self) -> bool {
        matches!(self, FamilyId::Krawtchouk | FamilyId::Hahn | FamilyId::QHahn)
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Krawtchouk => "krawtchouk",
            FamilyId::Charlier => "charlier",
            FamilyId::Hahn => "hahn",
            FamilyId::Meixner => "meixner",
            FamilyId::QHahn => "q-hahn",
            FamilyId::QMeixner => "q-meixner",
            FamilyId::QMeixnerSecond => "q-meixner-second",
            FamilyId::LittleQJacobiMeasure => "little-q-jacobi",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family together with its parameters.
///
/// Variants may be constructed directly for formal (out of region) use;
/// [`Family::validate`] checks the orthogonality region.
#[derive(Clone, Debug, PartialEq)]
pub enum Family<S> {
    Krawtchouk { p: S },
    Charlier { a: S },
    Hahn { a: S, b: S },
    Meixner { a: S, b: S },
    QHahn { a: S, b: S, q: S },
    QMeixner { b: S, c: S, q: S },
    /// Second q-Meixner family, parametrised by the original `(b, c)`.
    QMeixnerSecond { b: S, c: S, q: S },
    LittleQJacobi { a: S, b: S, q: S },
}

/// Points of a lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lattice {
    Finite(usize),
    SemiInfinite { x_max: usize, tail_tol: f64 },
}

impl Lattice {
    /// Largest point.
    pub fn last(&self) -> usize {
        match *self {
            Lattice::Finite(n) => n,
            Lattice::SemiInfinite { x_max, .. } => x_max,
        }
    }

    pub fn len(&self) -> usize {
        self.last() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Lattice::Finite(_))
    }

    /// Size parameter `N` handed to measures; semi-infinite measures ignore it.
    pub fn size(&self) -> usize {
        self.last()
    }
}

/// π(x) over a lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureVector<S> {
    pub lattice: Lattice,
    pub values: Vec<S>,
}

impl<S: Scalar> MeasureVector<S> {
    pub fn total(&self) -> S {
        self.values.iter().cloned().fold(S::zero(), |a, b| a + b)
    }
}

/// P̌_n(x) for `n` in `0..=n_max` and every lattice point.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialTable<S> {
    pub family: Family<S>,
    pub lattice: Lattice,
    /// rows indexed by `n`, columns by `x`
    pub values: Vec<Vec<S>>,
}

impl<S: Scalar> PolynomialTable<S> {
    pub fn get(&self, n: usize, x: usize) -> &S {
        &self.values[n][x]
    }
}

fn positive<S: Scalar>(v: &S, what: &str) -> Result<()> {
    if *v > S::zero() {
        Ok(())
    } else {
        domain(format!("{what} must be positive, got {v}"))
    }
}

fn unit<S: Scalar>(v: &S, what: &str) -> Result<()> {
    if *v > S::zero() && *v < S::one() {
        Ok(())
    } else {
        domain(format!("{what} must lie in (0, 1), got {v}"))
    }
}

/// η(x) = q^{-x} - 1.
pub fn eta<S: Scalar>(x: usize, q: &S) -> S {
    q.powi(-(x as i64)) - S::one()
}

impl<S: Scalar> Family<S> {
    pub fn id(&self) -> FamilyId {
        match self {
            Family::Krawtchouk { .. } => FamilyId::Krawtchouk,
            Family::Charlier { .. } => FamilyId::Charlier,
            Family::Hahn { .. } => FamilyId::Hahn,
            Family::Meixner { .. } => FamilyId::Meixner,
            Family::QHahn { .. } => FamilyId::QHahn,
            Family::QMeixner { .. } => FamilyId::QMeixner,
            Family::QMeixnerSecond { .. } => FamilyId::QMeixnerSecond,
            Family::LittleQJacobi { .. } => FamilyId::LittleQJacobiMeasure,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.id().is_finite()
    }

    pub fn q(&self) -> Option<&S> {
        match self {
            Family::QHahn { q, .. }
            | Family::QMeixner { q, .. }
            | Family::QMeixnerSecond { q, .. }
            | Family::LittleQJacobi { q, .. } => Some(q),
            _ => None,
        }
    }

    /// Named parameters in canonical order.
    pub fn params(&self) -> Vec<(&'static str, S)> {
        match self {
            Family::Krawtchouk { p } => vec![("p", p.clone())],
            Family::Charlier { a } => vec![("a", a.clone())],
            Family::Hahn { a, b } | Family::Meixner { a, b } => {
                vec![("a", a.clone()), ("b", b.clone())]
            }
            Family::QHahn { a, b, q } | Family::LittleQJacobi { a, b, q } => {
                vec![("a", a.clone()), ("b", b.clone()), ("q", q.clone())]
            }
            Family::QMeixner { b, c, q } | Family::QMeixnerSecond { b, c, q } => {
                vec![("b", b.clone()), ("c", c.clone()), ("q", q.clone())]
            }
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Family<T> {
        match self {
            Family::Krawtchouk { p } => Family::Krawtchouk { p: f(p) },
            Family::Charlier { a } => Family::Charlier { a: f(a) },
            Family::Hahn { a, b } => Family::Hahn { a: f(a), b: f(b) },
            Family::Meixner { a, b } => Family::Meixner { a: f(a), b: f(b) },
            Family::QHahn { a, b, q } => Family::QHahn { a: f(a), b: f(b), q: f(q) },
            Family::QMeixner { b, c, q } => Family::QMeixner { b: f(b), c: f(c), q: f(q) },
            Family::QMeixnerSecond { b, c, q } => {
                Family::QMeixnerSecond { b: f(b), c: f(c), q: f(q) }
            }
            Family::LittleQJacobi { a, b, q } => {
                Family::LittleQJacobi { a: f(a), b: f(b), q: f(q) }
            }
        }
    }

    pub fn to_f64(&self) -> Family<f64> {
        self.map(|v| v.to_f64())
    }

    /// Checks the parameter region of the family.
    pub fn validate(&self) -> Result<()> {
        if let Some(q) = self.q() {
            unit(q, "q")?;
        }
        match self {
            Family::Krawtchouk { p } => unit(p, "p"),
            Family::Charlier { a } => positive(a, "a"),
            Family::Hahn { a, b } => {
                positive(a, "a")?;
                positive(b, "b")
            }
            Family::Meixner { a, b } => {
                positive(a, "a")?;
                unit(b, "b")
            }
            Family::QHahn { a, b, .. } => {
                unit(a, "a")?;
                unit(b, "b")
            }
            Family::QMeixner { b, c, q } | Family::QMeixnerSecond { b, c, q } => {
                positive(b, "b")?;
                if !(b.clone() * q.clone() < S::one()) {
                    return domain(format!("b must be below 1/q, got b = {b}"));
                }
                positive(c, "c")
            }
            Family::LittleQJacobi { a, b, .. } => {
                unit(a, "a")?;
                if *b < S::one() {
                    Ok(())
                } else {
                    domain(format!("b must be below 1, got {b}"))
                }
            }
        }
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Parameters `(B, C)` of the q-Meixner family whose formulas give the second family.
    fn involuted(b: &S, c: &S) -> (S, S) {
        (-(b.clone() * c.clone()), S::one() / c.clone())
    }

    /// π(x)/π(0). For finite families `size` is N and points beyond it give zero.
    pub fn weight_ratio(&self, x: usize, size: usize) -> S {
        if self.is_finite() && x > size {
            return S::zero();
        }
        let xi = x as i64;
        match self {
            Family::Krawtchouk { p } => {
                binomial::<S>(size as i64, xi) * (p.clone() / (S::one() - p.clone())).powi(xi)
            }
            Family::Hahn { a, b } => {
                // (b)_{N-x} / (b)_N as a short product keeps floats finite for large N
                let tail = (size - x..size).fold(S::one(), |acc, j| acc * (b.clone() + S::from_usize(j)));
                binomial::<S>(size as i64, xi) * pochhammer(a, x) / tail
            }
            Family::QHahn { a, b, q } => {
                let tail = (size - x..size)
                    .fold(S::one(), |acc, j| acc * (S::one() - b.clone() * q.powi(j as i64)));
                q_binomial(size as i64, xi, q) * q_pochhammer(a, q, x) / (tail * a.powi(xi))
            }
            Family::Charlier { a } => a.powi(xi) / pochhammer(&S::one(), x),
            Family::Meixner { a, b } => pochhammer(a, x) * b.powi(xi) / pochhammer(&S::one(), x),
            Family::QMeixner { b, c, q } => {
                let bq = b.clone() * q.clone();
                let bcq = -(bq.clone() * c.clone());
                q_pochhammer(&bq, q, x) / (q_pochhammer(q, q, x) * q_pochhammer(&bcq, q, x))
                    * c.powi(xi)
                    * q.powi(xi * (xi - 1) / 2)
            }
            Family::QMeixnerSecond { b, c, q } => {
                let (bb, cc) = Self::involuted(b, c);
                Family::QMeixner { b: bb, c: cc, q: q.clone() }.weight_ratio(x, size)
            }
            Family::LittleQJacobi { a, b, q } => {
                q_pochhammer(b, q, x) * a.powi(xi) / q_pochhammer(q, q, x)
            }
        }
    }

    /// π(0). Exact for finite families, floating point only for semi-infinite ones.
    pub fn weight_zero(&self, size: usize) -> Result<S> {
        match self {
            Family::Krawtchouk { p } => Ok((S::one() - p.clone()).powi(size as i64)),
            Family::Hahn { a, b } => Ok((0..size).fold(S::one(), |acc, j| {
                let j = S::from_usize(j);
                acc * (b.clone() + j.clone()) / (a.clone() + b.clone() + j)
            })),
            Family::QHahn { a, b, q } => {
                let ab = a.clone() * b.clone();
                Ok((0..size).fold(S::one(), |acc, j| {
                    let qj = q.powi(j as i64);
                    acc * a.clone() * (S::one() - b.clone() * qj.clone()) / (S::one() - ab.clone() * qj)
                }))
            }
            Family::Charlier { a } => (-a.clone()).exp(),
            Family::Meixner { a, b } => (S::one() - b.clone()).powf(a),
            Family::QMeixner { b, c, q } => {
                if S::EXACT {
                    return Err(Error::Transcendental("q-Meixner normalisation".into()));
                }
                let (b, c, q) = (b.to_f64(), c.to_f64(), q.to_f64());
                S::from_float(q_pochhammer_inf(-b * c * q, q)? / q_pochhammer_inf(-c, q)?)
            }
            Family::QMeixnerSecond { b, c, q } => {
                let (bb, cc) = Self::involuted(b, c);
                Family::QMeixner { b: bb, c: cc, q: q.clone() }.weight_zero(size)
            }
            Family::LittleQJacobi { a, b, q } => {
                if S::EXACT {
                    return Err(Error::Transcendental("little q-Jacobi normalisation".into()));
                }
                let (a, b, q) = (a.to_f64(), b.to_f64(), q.to_f64());
                S::from_float(q_pochhammer_inf(a, q)? / q_pochhammer_inf(a * b, q)?)
            }
        }
    }

    /// π(x) from the closed form; zero for points off a finite lattice.
    pub fn weight(&self, x: usize, size: usize) -> Result<S> {
        if self.is_finite() && x > size {
            return Ok(S::zero());
        }
        Ok(self.weight_zero(size)? * self.weight_ratio(x, size))
    }

    /// π(x) with `x` possibly negative (zero there).
    pub fn weight_signed(&self, x: i64, size: i64) -> Result<S> {
        if x < 0 || size < 0 {
            return Ok(S::zero());
        }
        self.weight(x as usize, size as usize)
    }

    /// π(x+1)/π(x), rational in `x` and the parameters.
    pub fn weight_step(&self, x: usize, size: usize) -> S {
        let xs = S::from_usize(x);
        let x1 = S::from_usize(x + 1);
        match self {
            Family::Krawtchouk { p } => {
                S::from_int(size as i64 - x as i64) / x1 * p.clone() / (S::one() - p.clone())
            }
            Family::Hahn { a, b } => {
                let nx = S::from_int(size as i64 - x as i64);
                nx.clone() * (a.clone() + xs) / (x1 * (b.clone() + nx - S::one()))
            }
            Family::QHahn { a, b, q } => {
                let top = S::one() - q.powi(size as i64 - x as i64);
                let bottom = S::one() - q.powi(x as i64 + 1);
                top / bottom * (S::one() - a.clone() * q.powi(x as i64))
                    / ((S::one() - b.clone() * q.powi(size as i64 - x as i64 - 1)) * a.clone())
            }
            Family::Charlier { a } => a.clone() / x1,
            Family::Meixner { a, b } => (a.clone() + xs) * b.clone() / x1,
            Family::QMeixner { b, c, q } => {
                let qx1 = q.powi(x as i64 + 1);
                (S::one() - b.clone() * qx1.clone()) * c.clone() * q.powi(x as i64)
                    / ((S::one() - qx1.clone()) * (S::one() + b.clone() * c.clone() * qx1))
            }
            Family::QMeixnerSecond { b, c, q } => {
                let (bb, cc) = Self::involuted(b, c);
                Family::QMeixner { b: bb, c: cc, q: q.clone() }.weight_step(x, size)
            }
            Family::LittleQJacobi { a, b, q } => {
                (S::one() - b.clone() * q.powi(x as i64)) * a.clone()
                    / (S::one() - q.powi(x as i64 + 1))
            }
        }
    }

    /// Measure over a lattice by the ratio recurrence from π(0).
    pub fn measure(&self, lattice: &Lattice) -> Result<MeasureVector<S>> {
        self.validate()?;
        match (lattice, self.is_finite()) {
            (Lattice::Finite(_), false) | (Lattice::SemiInfinite { .. }, true) => {
                return domain(format!("{} does not live on this lattice", self.id()));
            }
            _ => {}
        }
        let size = lattice.size();
        let mut values = Vec::with_capacity(lattice.len());
        let mut cur = self.weight_zero(size)?;
        values.push(cur.clone());
        for x in 0..lattice.last() {
            cur = cur * self.weight_step(x, size);
            values.push(cur.clone());
        }
        Ok(MeasureVector { lattice: *lattice, values })
    }

    /// The series defining P̌_n(x); `size` is N for finite families.
    pub fn poly_series(&self, n: usize, x: usize, size: usize) -> Result<SeriesSpec<S>> {
        let mx = -S::from_usize(x);
        let spec = match self {
            Family::Krawtchouk { p } => {
                if n > size {
                    return domain(format!("degree {n} exceeds N = {size}"));
                }
                SeriesSpec::hyper(n, vec![mx], vec![-S::from_usize(size)], S::one() / p.clone())
            }
            Family::Charlier { a } => {
                SeriesSpec::hyper(n, vec![mx], vec![], -(S::one() / a.clone()))
            }
            Family::Hahn { a, b } => {
                if n > size {
                    return domain(format!("degree {n} exceeds N = {size}"));
                }
                SeriesSpec::hyper(
                    n,
                    vec![S::from_usize(n) + a.clone() + b.clone() - S::one(), mx],
                    vec![a.clone(), -S::from_usize(size)],
                    S::one(),
                )
            }
            Family::Meixner { a, b } => {
                SeriesSpec::hyper(n, vec![mx], vec![a.clone()], S::one() - S::one() / b.clone())
            }
            Family::QHahn { a, b, q } => {
                if n > size {
                    return domain(format!("degree {n} exceeds N = {size}"));
                }
                let ab = a.clone() * b.clone();
                SeriesSpec::qhyper(
                    n,
                    vec![ab * q.powi(n as i64 - 1), q.powi(-(x as i64))],
                    vec![a.clone(), q.powi(-(size as i64))],
                    q.clone(),
                    q.clone(),
                )
            }
            Family::QMeixner { b, c, q } => SeriesSpec::qhyper(
                n,
                vec![q.powi(-(x as i64))],
                vec![b.clone() * q.clone()],
                q.clone(),
                -(q.powi(n as i64 + 1) / c.clone()),
            ),
            Family::QMeixnerSecond { b, c, q } => {
                let (bb, cc) = Self::involuted(b, c);
                return Family::QMeixner { b: bb, c: cc, q: q.clone() }.poly_series(n, x, size);
            }
            Family::LittleQJacobi { .. } => {
                return domain("the little q-Jacobi entry exposes only its measure");
            }
        };
        Ok(spec)
    }

    /// P̌_n(x).
    pub fn poly(&self, n: usize, x: usize, size: usize) -> Result<S> {
        self.poly_series(n, x, size)?.evaluate()
    }

    pub fn poly_table(&self, n_max: usize, lattice: &Lattice) -> Result<PolynomialTable<S>> {
        let size = lattice.size();
        let mut values = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let row = (0..lattice.len())
                .map(|x| self.poly(n, x, size))
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        Ok(PolynomialTable { family: self.clone(), lattice: *lattice, values })
    }

    /// d_n², with d_0² = 1.
    pub fn norm_sq(&self, n: usize, size: usize) -> Result<S> {
        if n == 0 {
            return match self {
                Family::LittleQJacobi { .. } => {
                    domain("the little q-Jacobi entry exposes only its measure")
                }
                _ => Ok(S::one()),
            };
        }
        let ni = n as i64;
        let v = match self {
            Family::Krawtchouk { p } => {
                if n > size {
                    return domain(format!("degree {n} exceeds N = {size}"));
                }
                binomial::<S>(size as i64, ni) * (p.clone() / (S::one() - p.clone())).powi(ni)
            }
            Family::Charlier { a } => a.powi(ni) / pochhammer(&S::one(), n),
            Family::Hahn { a, b } => {
                if n > size {
                    return domain(format!("degree {n} exceeds N = {size}"));
                }
                let s = a.clone() + b.clone();
                let nn = S::from_usize(n);
                binomial::<S>(size as i64, ni)
                    * pochhammer(a, n)
                    * (nn.clone() + nn.clone() + s.clone() - S::one())
                    * pochhammer(&s, size)
                    / (pochhammer(b, n) * pochhammer(&(nn + s - S::one()), size + 1))
            }
            Family::Meixner { a, b } => pochhammer(a, n) * b.powi(ni) / pochhammer(&S::one(), n),
            Family::QHahn { a, b, q } => {
                if n > size {
                    return domain(format!("degree {n} exceeds N = {size}"));
                }
                let ab = a.clone() * b.clone();
                let abq = ab.clone() / q.clone();
                let den_last = S::one() - abq.clone();
                if den_last.is_zero() {
                    return domain("ab = q makes the q-Hahn normalisation singular");
                }
                q_binomial(size as i64, ni, q)
                    * q_pochhammer(a, q, n)
                    * q_pochhammer(&abq, q, n)
                    / (q_pochhammer(&(ab.clone() * q.powi(size as i64)), q, n)
                        * q_pochhammer(b, q, n)
                        * a.powi(ni))
                    * (S::one() - ab * q.powi(2 * ni - 1))
                    / den_last
            }
            Family::QMeixner { b, c, q } => {
                q.powi(ni) * q_pochhammer(&(b.clone() * q.clone()), q, n)
                    / (q_pochhammer(q, q, n) * q_pochhammer(&(-(q.clone() / c.clone())), q, n))
            }
            Family::QMeixnerSecond { b, c, q } => {
                let (bb, cc) = Self::involuted(b, c);
                return Family::QMeixner { b: bb, c: cc, q: q.clone() }.norm_sq(n, size);
            }
            Family::LittleQJacobi { .. } => {
                return domain("the little q-Jacobi entry exposes only its measure");
            }
        };
        Ok(v)
    }

    /// φ̂_n(x) = d_n sqrt(π(x)) P̌_n(x) in floating point; the second q-Meixner
    /// family carries the extra sign (-1)^x.
    pub fn orthonormal(&self, n: usize, lattice: &Lattice) -> Result<Vec<f64>> {
        let size = lattice.size();
        let d = self.norm_sq(n, size)?.to_f64().sqrt();
        let pi0 = self.to_f64().weight_zero(size)?;
        let signed = matches!(self, Family::QMeixnerSecond { .. });
        (0..lattice.len())
            .map(|x| {
                let w = pi0 * self.weight_ratio(x, size).to_f64();
                let mut v = d * w.max(0.0).sqrt() * self.poly(n, x, size)?.to_f64();
                if signed && x % 2 == 1 {
                    v = -v;
                }
                Ok(v)
            })
            .collect()
    }
}

impl Family<Rational> {
    /// Formal data (π⁽⁻⁾(x), P̌⁽⁻⁾_n(x), d⁽⁻⁾_n²) of the second q-Meixner family.
    pub fn qm_second_family(&self, n: usize, x: usize) -> Result<(f64, Rational, Rational)> {
        match self {
            Family::QMeixner { b, c, q } => {
                self.validate()?;
                let second = Family::QMeixnerSecond { b: b.clone(), c: c.clone(), q: q.clone() };
                let pi = second.to_f64().weight(x, 0)?;
                Ok((pi, second.poly(n, x, 0)?, second.norm_sq(n, 0)?))
            }
            _ => domain("second family exists only for q-Meixner"),
        }
    }
}

/// The second q-Meixner family for given q-Meixner data.
pub fn qm_second_family(b: &Rational, c: &Rational, q: &Rational, n: usize, x: usize) -> Result<(f64, Rational, Rational)> {
    Family::QMeixner { b: b.clone(), c: c.clone(), q: q.clone() }.qm_second_family(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn measure_examples() {
        let k = Family::Krawtchouk { p: rat(1, 2) };
        assert_eq!(k.measure(&Lattice::Finite(2)).unwrap().values, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
        let h = Family::Hahn { a: rat(1, 1), b: rat(1, 1) };
        assert_eq!(h.measure(&Lattice::Finite(1)).unwrap().values, vec![rat(1, 2), rat(1, 2)]);
        let c = Family::Charlier { a: 1.0 };
        assert!((c.weight(0, 0).unwrap() - 0.3678794412).abs() < 1e-9);
        assert!(Family::Charlier { a: rat(1, 1) }.weight(0, 0).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(Family::Krawtchouk { p: rat(3, 2) }.validate().is_err());
        assert!(Family::Meixner { a: rat(1, 1), b: rat(1, 1) }.validate().is_err());
        assert!(Family::QMeixner { b: rat(3, 1), c: rat(1, 1), q: rat(1, 2) }.validate().is_err());
        assert!(Family::QMeixner { b: rat(3, 2), c: rat(1, 1), q: rat(1, 2) }.validate().is_ok());
    }

    #[test]
    fn poly_and_norm_examples() {
        let k = Family::Krawtchouk { p: rat(1, 2) };
        assert_eq!(k.poly(1, 1, 2).unwrap(), rat(0, 1));
        assert_eq!(k.norm_sq(1, 2).unwrap(), rat(2, 1));
        assert_eq!(k.norm_sq(0, 2).unwrap(), rat(1, 1));
        let phi = k.orthonormal(1, &Lattice::Finite(1)).unwrap();
        assert!((phi[0] - 0.5f64.sqrt()).abs() < 1e-15 && (phi[1] + 0.5f64.sqrt()).abs() < 1e-15);
        let h = Family::Hahn { a: rat(1, 1), b: rat(1, 1) };
        let phi = h.orthonormal(1, &Lattice::Finite(4)).unwrap();
        assert!((phi.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eta_values() {
        let q = rat(1, 2);
        assert_eq!(eta(0, &q), rat(0, 1));
        assert_eq!(eta(1, &q), rat(1, 1));
        assert_eq!(eta(2, &q), rat(3, 1));
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let fams = [
            Family::Krawtchouk { p: rat(2, 7) },
            Family::Hahn { a: rat(3, 2), b: rat(2, 5) },
            Family::QHahn { a: rat(1, 3), b: rat(3, 4), q: rat(2, 3) },
        ];
        for f in &fams {
            for n in 0..6 {
                let m = f.measure(&Lattice::Finite(n)).unwrap();
                for (x, v) in m.values.iter().enumerate() {
                    assert_eq!(*v, f.weight(x, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn second_family_at_zero() {
        let (pi, p, d) = qm_second_family(&rat(1, 4), &rat(1, 2), &rat(1, 2), 0, 3).unwrap();
        assert!(pi > 0.0);
        assert_eq!(p, rat(1, 1));
        assert_eq!(d, rat(1, 1));
        let (_, p, _) = qm_second_family(&rat(1, 4), &rat(1, 2), &rat(1, 2), 4, 0).unwrap();
        assert_eq!(p, rat(1, 1));
    }
}
