//! Convolutions of two stationary measures that reproduce a measure of the same family.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::chains::Params;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::numerics::{rat, Rational, Scalar};

/// Summation range of a convolution of two measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Σ_{z=0}^{x} A(x-z, N-z) B(z, N)
    Prefix,
    /// Σ_{z=x}^{y} A(x, z) B(z, y)
    Window,
    /// Σ_{z=y}^{x} A(x-z, N-z) B(z-y, N-y)
    Suffix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    CC1,
    CC2,
    MM1,
    MM2,
    KThconK,
    KPipiI,
    KPipiII,
    H1,
    H2,
    H3,
    H4,
    H5,
    QH1,
    QH2,
    QH3,
    QH4,
    QH5,
    LqJ1,
    LqJ2,
}

const ALL: [(IdentityId, &str); 19] = [
    (IdentityId::CC1, "CC1"),
    (IdentityId::CC2, "CC2"),
    (IdentityId::MM1, "MM1"),
    (IdentityId::MM2, "MM2"),
    (IdentityId::KThconK, "K-thconK"),
    (IdentityId::KPipiI, "K-pipi-i"),
    (IdentityId::KPipiII, "K-pipi-ii"),
    (IdentityId::H1, "H-1"),
    (IdentityId::H2, "H-2"),
    (IdentityId::H3, "H-3"),
    (IdentityId::H4, "H-4"),
    (IdentityId::H5, "H-5"),
    (IdentityId::QH1, "qH-1"),
    (IdentityId::QH2, "qH-2"),
    (IdentityId::QH3, "qH-3"),
    (IdentityId::QH4, "qH-4"),
    (IdentityId::QH5, "qH-5"),
    (IdentityId::LqJ1, "LqJ-1"),
    (IdentityId::LqJ2, "LqJ-2"),
];

impl IdentityId {
    pub fn all() -> impl Iterator<Item = IdentityId> {
        ALL.iter().map(|(i, _)| *i)
    }

    pub fn token(self) -> &'static str {
        ALL.iter().find(|(i, _)| *i == self).expect("registered").1
    }

    pub fn shape(self) -> Shape {
        use IdentityId::*;
        match self {
            CC1 | MM1 | KThconK | H1 | QH1 | LqJ1 => Shape::Prefix,
            KPipiI | H2 | H4 | QH2 | QH4 => Shape::Window,
            CC2 | MM2 | KPipiII | H3 | H5 | QH3 | QH5 | LqJ2 => Shape::Suffix,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        use IdentityId::*;
        match self {
            CC1 | CC2 | KThconK | KPipiI | KPipiII => &["a1", "a2"],
            MM1 | MM2 => &["a1", "a2", "b"],
            H1 | H3 | H5 => &["a1", "b1", "a2"],
            H2 | H4 => &["a1", "b1", "b2"],
            QH1 | QH3 | QH5 => &["a1", "b1", "a2", "q"],
            QH2 | QH4 | LqJ1 | LqJ2 => &["a1", "b1", "b2", "q"],
        }
    }

    /// Measures on a semi-infinite lattice, checked in ratio form.
    pub fn semi_infinite(self) -> bool {
        use IdentityId::*;
        matches!(self, CC1 | CC2 | MM1 | MM2 | LqJ1 | LqJ2)
    }

    /// The stated identity may also be read with the two summands exchanged.
    pub fn symmetric(self) -> bool {
        use IdentityId::*;
        matches!(self, CC1 | CC2 | MM1 | MM2 | KThconK | KPipiI | KPipiII)
    }

    /// Left factor A, right factor B and the resulting measure R.
    pub fn wiring<S: Scalar>(self, params: &Params<S>) -> Result<(Family<S>, Family<S>, Family<S>)> {
        use IdentityId::*;
        let p = params.conform(self.param_names())?;
        let g = |n: &str| p.get(n).expect("conformed");
        let one = S::one();
        let out = match self {
            CC1 | CC2 => {
                let (a1, a2) = (g("a1"), g("a2"));
                (Family::Charlier { a: a2.clone() }, Family::Charlier { a: a1.clone() }, Family::Charlier { a: a1 + a2 })
            }
            MM1 | MM2 => {
                let (a1, a2, b) = (g("a1"), g("a2"), g("b"));
                (
                    Family::Meixner { a: a2.clone(), b: b.clone() },
                    Family::Meixner { a: a1.clone(), b: b.clone() },
                    Family::Meixner { a: a1 + a2, b },
                )
            }
            KThconK | KPipiII | KPipiI => {
                let (a1, a2) = (g("a1"), g("a2"));
                let r = if self == KPipiI {
                    a1.clone() * a2.clone()
                } else {
                    one.clone() - (one.clone() - a1.clone()) * (one - a2.clone())
                };
                (Family::Krawtchouk { p: a2 }, Family::Krawtchouk { p: a1 }, Family::Krawtchouk { p: r })
            }
            H1 | H3 | H5 => {
                let (a1, b1, a2) = (g("a1"), g("b1"), g("a2"));
                let left = Family::Hahn { a: a1.clone(), b: b1.clone() };
                let right = Family::Hahn { a: a2.clone(), b: a1.clone() + b1.clone() };
                let res = Family::Hahn { a: a1 + a2, b: b1 };
                if self == H5 {
                    (right, left, res)
                } else {
                    (left, right, res)
                }
            }
            H2 | H4 => {
                let (a1, b1, b2) = (g("a1"), g("b1"), g("b2"));
                let left = Family::Hahn { a: a1.clone(), b: b1.clone() };
                let right = Family::Hahn { a: a1.clone() + b1.clone(), b: b2.clone() };
                let res = Family::Hahn { a: a1, b: b1 + b2 };
                if self == H4 {
                    (right, left, res)
                } else {
                    (left, right, res)
                }
            }
            QH1 | QH3 | QH5 => {
                let (a1, b1, a2, q) = (g("a1"), g("b1"), g("a2"), g("q"));
                let left = Family::QHahn { a: a1.clone(), b: b1.clone(), q: q.clone() };
                let right = Family::QHahn { a: a2.clone(), b: a1.clone() * b1.clone(), q: q.clone() };
                let res = Family::QHahn { a: a1 * a2, b: b1, q };
                if self == QH5 {
                    (right, left, res)
                } else {
                    (left, right, res)
                }
            }
            QH2 | QH4 => {
                let (a1, b1, b2, q) = (g("a1"), g("b1"), g("b2"), g("q"));
                let left = Family::QHahn { a: a1.clone(), b: b1.clone(), q: q.clone() };
                let right = Family::QHahn { a: a1.clone() * b1.clone(), b: b2.clone(), q: q.clone() };
                let res = Family::QHahn { a: a1, b: b1 * b2, q };
                if self == QH4 {
                    (right, left, res)
                } else {
                    (left, right, res)
                }
            }
            LqJ1 | LqJ2 => {
                let (a1, b1, b2, q) = (g("a1"), g("b1"), g("b2"), g("q"));
                (
                    Family::LittleQJacobi { a: a1.clone(), b: b1.clone(), q: q.clone() },
                    Family::LittleQJacobi { a: a1.clone() * b1.clone(), b: b2.clone(), q: q.clone() },
                    Family::LittleQJacobi { a: a1, b: b1 * b2, q },
                )
            }
        };
        out.0.validate()?;
        out.1.validate()?;
        out.2.validate()?;
        Ok(out)
    }

    /// Deterministic admissible grid of `count` parameter points.
    pub fn grid(self, count: usize) -> Vec<Params<Rational>> {
        const UNIT: [(i64, i64); 7] = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)];
        const POS: [(i64, i64); 7] = [(1, 1), (1, 2), (2, 1), (3, 2), (1, 3), (5, 2), (3, 4)];
        const QS: [(i64, i64); 3] = [(1, 2), (1, 3), (2, 3)];
        let unit_names = |n: &str| match self {
            IdentityId::MM1 | IdentityId::MM2 => n == "b",
            IdentityId::KThconK | IdentityId::KPipiI | IdentityId::KPipiII => true,
            IdentityId::QH1
            | IdentityId::QH2
            | IdentityId::QH3
            | IdentityId::QH4
            | IdentityId::QH5
            | IdentityId::LqJ1
            | IdentityId::LqJ2 => true,
            _ => false,
        };
        (0..count)
            .map(|i| {
                Params::new(self.param_names().iter().enumerate().map(|(j, name)| {
                    let (n, d) = if *name == "q" {
                        QS[i % QS.len()]
                    } else if unit_names(name) {
                        UNIT[(i * (j + 2) + j) % UNIT.len()]
                    } else {
                        POS[(i * (j + 2) + j) % POS.len()]
                    };
                    (*name, rat(n, d))
                }))
            })
            .collect()
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL.iter()
            .find(|(_, t)| *t == s)
            .map(|(i, _)| *i)
            .ok_or_else(|| Error::Case(format!("unknown identity {s:?}")))
    }
}

fn at<S: Scalar>(f: &Family<S>, x: i64, size: i64) -> Result<S> {
    if f.is_finite() {
        f.weight_signed(x, size)
    } else {
        f.weight_signed(x, 0)
    }
}

/// Literal value of the convolution sum with full measures; `n` is ignored for semi-infinite measures.
pub fn convolve_measures<S: Scalar>(
    shape: Shape,
    a: &Family<S>,
    b: &Family<S>,
    x: usize,
    y: usize,
    n: usize,
) -> Result<S> {
    let (x, y, n) = (x as i64, y as i64, n as i64);
    let mut acc = S::zero();
    match shape {
        Shape::Prefix => {
            for z in 0..=x {
                acc = acc + at(a, x - z, n - z)? * at(b, z, n)?;
            }
        }
        Shape::Window => {
            for z in x..=y {
                acc = acc + at(a, x, z)? * at(b, z, y)?;
            }
        }
        Shape::Suffix => {
            for z in y..=x {
                acc = acc + at(a, x - z, n - z)? * at(b, z - y, n - y)?;
            }
        }
    }
    Ok(acc)
}

/// The same sums with π(x)/π(0) in place of π(x), for semi-infinite measures.
pub fn convolve_ratios<S: Scalar>(shape: Shape, a: &Family<S>, b: &Family<S>, x: usize, y: usize) -> Result<S> {
    let mut acc = S::zero();
    match shape {
        Shape::Prefix => {
            for z in 0..=x {
                acc = acc + a.weight_ratio(x - z, 0) * b.weight_ratio(z, 0);
            }
        }
        Shape::Suffix => {
            for z in y..=x {
                acc = acc + a.weight_ratio(x - z, 0) * b.weight_ratio(z - y, 0);
            }
        }
        Shape::Window => return Err(Error::Domain("window sums need finite measures".into())),
    }
    Ok(acc)
}

/// Index triples (x, y, N) visited for a shape up to `n_max`.
fn points(shape: Shape, semi: bool, n_max: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    match (shape, semi) {
        (Shape::Prefix, true) => out.extend((0..=n_max).map(|x| (x, 0, 0))),
        (Shape::Suffix, true) => {
            for x in 0..=n_max {
                out.extend((0..=x).map(|y| (x, y, 0)));
            }
        }
        (Shape::Prefix, false) => {
            for n in 0..=n_max {
                out.extend((0..=n).map(|x| (x, 0, n)));
            }
        }
        (Shape::Window, _) => {
            for y in 0..=n_max {
                out.extend((0..=y).map(|x| (x, y, y)));
            }
        }
        (Shape::Suffix, false) => {
            for n in 0..=n_max {
                for x in 0..=n {
                    out.extend((0..=x).map(|y| (x, y, n)));
                }
            }
        }
    }
    out
}

fn rhs<S: Scalar>(shape: Shape, r: &Family<S>, x: usize, y: usize, n: usize, ratio: bool) -> Result<S> {
    let (pt, size) = match shape {
        Shape::Prefix => (x, n),
        Shape::Window => (x, y),
        Shape::Suffix => (x - y, n.saturating_sub(y)),
    };
    if ratio {
        Ok(r.weight_ratio(pt, 0))
    } else {
        r.weight(pt, size)
    }
}

/// Outcome of one identity at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// every point agreed exactly; `float_error` is the full-form check for semi-infinite measures
    Exact { float_error: Option<f64> },
    /// largest relative error of the full form under floating point
    MaxError(f64),
    Mismatch { x: usize, y: usize, n: usize },
    Domain(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfSimilarityReport {
    pub id: IdentityId,
    pub params: Params<Rational>,
    pub swapped: bool,
    pub n_max: usize,
    pub points: usize,
    pub verdict: Verdict,
}

impl SelfSimilarityReport {
    pub fn passed(&self) -> bool {
        match self.verdict {
            Verdict::Exact { .. } => true,
            Verdict::MaxError(e) => e <= crate::tolerance::RELATIVE,
            _ => false,
        }
    }
}

type Wired<S> = (Family<S>, Family<S>, Family<S>);

fn prepare(
    id: IdentityId,
    params: &Params<Rational>,
    n_max: usize,
    swapped: bool,
) -> (SelfSimilarityReport, Option<Wired<Rational>>) {
    let mut report = SelfSimilarityReport {
        id,
        params: params.clone(),
        swapped,
        n_max,
        points: points(id.shape(), id.semi_infinite(), n_max).len(),
        verdict: Verdict::Domain(String::new()),
    };
    if swapped && !id.symmetric() {
        report.verdict = Verdict::Domain(format!("{id} is not stated with its summands exchanged"));
        return (report, None);
    }
    match id.wiring(params) {
        Ok((a, b, r)) if swapped => (report, Some((b, a, r))),
        Ok(w) => (report, Some(w)),
        Err(e) => {
            report.verdict = Verdict::Domain(e.to_string());
            (report, None)
        }
    }
}

fn full_form_error(id: IdentityId, w: &Wired<f64>, n_max: usize) -> Result<f64> {
    let shape = id.shape();
    let mut worst: f64 = 0.0;
    for (x, y, n) in points(shape, id.semi_infinite(), n_max) {
        let l = convolve_measures(shape, &w.0, &w.1, x, y, n)?;
        let r = rhs(shape, &w.2, x, y, n, false)?;
        worst = worst.max((l - r).abs() / r.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Checks an identity exactly for all points up to `n_max`; `swapped` exchanges the two summands.
pub fn verify_identity(id: IdentityId, params: &Params<Rational>, n_max: usize, swapped: bool) -> SelfSimilarityReport {
    let (mut report, wired) = prepare(id, params, n_max, swapped);
    let Some((a, b, r)) = wired else { return report };
    let shape = id.shape();
    let semi = id.semi_infinite();
    for (x, y, n) in points(shape, semi, n_max) {
        let lhs = if semi { convolve_ratios(shape, &a, &b, x, y) } else { convolve_measures(shape, &a, &b, x, y, n) };
        match lhs.and_then(|l| Ok(l == rhs(shape, &r, x, y, n, semi)?)) {
            Ok(true) => {}
            Ok(false) => {
                report.verdict = Verdict::Mismatch { x, y, n };
                return report;
            }
            Err(e) => {
                report.verdict = Verdict::Domain(e.to_string());
                return report;
            }
        }
    }
    let mut float_error = None;
    if semi {
        match full_form_error(id, &(a.to_f64(), b.to_f64(), r.to_f64()), n_max) {
            Ok(e) if e <= crate::tolerance::RELATIVE => float_error = Some(e),
            Ok(e) => {
                report.verdict = Verdict::MaxError(e);
                return report;
            }
            Err(e) => {
                report.verdict = Verdict::Domain(e.to_string());
                return report;
            }
        }
    }
    report.verdict = Verdict::Exact { float_error };
    report
}

/// The full form under floating point only.
pub fn verify_identity_float(
    id: IdentityId,
    params: &Params<Rational>,
    n_max: usize,
    swapped: bool,
) -> SelfSimilarityReport {
    let (mut report, wired) = prepare(id, params, n_max, swapped);
    let Some((a, b, r)) = wired else { return report };
    report.verdict = match full_form_error(id, &(a.to_f64(), b.to_f64(), r.to_f64()), n_max) {
        Ok(e) => Verdict::MaxError(e),
        Err(e) => Verdict::Domain(e.to_string()),
    };
    report
}

/// Every identity on a grid of `grid` points, with the exchanged reading where stated.
pub fn verify_all(grid: usize, n_max: usize) -> Vec<SelfSimilarityReport> {
    let jobs: Vec<(IdentityId, Params<Rational>, bool)> = IdentityId::all()
        .flat_map(|id| {
            id.grid(grid).into_iter().flat_map(move |p| {
                let mut v = vec![(id, p.clone(), false)];
                if id.symmetric() {
                    v.push((id, p, true));
                }
                v
            })
        })
        .collect();
    jobs.into_par_iter().map(|(id, p, s)| verify_identity(id, &p, n_max, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn krawtchouk_example() {
        let a = Family::Krawtchouk { p: rat(1, 2) };
        let v = convolve_measures(Shape::Prefix, &a, &a, 1, 0, 2).unwrap();
        assert_eq!(v, rat(3, 8));
        let p = Params::new([("a1", rat(1, 2)), ("a2", rat(1, 2))]);
        let (_, _, r) = IdentityId::KThconK.wiring(&p).unwrap();
        assert_eq!(r, Family::Krawtchouk { p: rat(3, 4) });
        assert!(verify_identity(IdentityId::KThconK, &p, 6, false).passed());
    }

    #[test]
    fn charlier_single_term() {
        let a = Family::Charlier { a: 0.5 };
        let b = Family::Charlier { a: 0.25 };
        let v = convolve_measures(Shape::Prefix, &a, &b, 0, 0, 0).unwrap();
        assert!((v - (-0.75f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn all_identities_on_small_grid() {
        for r in verify_all(3, 6) {
            assert!(r.passed(), "{} {} swapped={}: {:?}", r.id, r.params, r.swapped, r.verdict);
        }
    }

    #[test]
    fn hahn_and_q_hahn_examples() {
        let one = Params::new([("a1", rat(1, 1)), ("b1", rat(1, 1)), ("a2", rat(1, 1))]);
        let (_, _, r) = IdentityId::H1.wiring(&one).unwrap();
        assert_eq!(r, Family::Hahn { a: rat(2, 1), b: rat(1, 1) });
        assert!(verify_identity(IdentityId::H1, &one, 6, false).passed());
        let h = Params::new([("a1", rat(1, 2)), ("b1", rat(1, 2)), ("b2", rat(1, 2)), ("q", rat(1, 2))]);
        let rep = verify_identity(IdentityId::QH4, &h, 6, false);
        assert_eq!(rep.verdict, Verdict::Exact { float_error: None });
        assert!(!verify_identity(IdentityId::QH4, &h, 6, true).passed());
        let f = verify_identity_float(IdentityId::QH4, &h, 6, false);
        assert!(matches!(f.verdict, Verdict::MaxError(e) if e < 1e-12));
    }

    #[test]
    fn window_collapses_at_diagonal() {
        let a = Family::Hahn { a: rat(1, 2), b: rat(1, 3) };
        let b = Family::Hahn { a: rat(5, 6), b: rat(2, 1) };
        let v = convolve_measures(Shape::Window, &a, &b, 3, 3, 3).unwrap();
        assert_eq!(v, a.weight(3, 3).unwrap() * b.weight(3, 3).unwrap());
    }

    #[test]
    fn wrong_parameters_are_caught() {
        let p = Params::new([("a1", rat(1, 1)), ("b1", rat(1, 1)), ("a2", rat(1, 1))]);
        let (a, b, _) = IdentityId::H1.wiring(&p).unwrap();
        let wrong = Family::Hahn { a: rat(2, 1), b: rat(2, 1) };
        let l = convolve_measures(Shape::Prefix, &a, &b, 1, 0, 3).unwrap();
        assert_ne!(l, wrong.weight(1, 3).unwrap());
        assert_eq!("K-pipi-ii".parse::<IdentityId>().unwrap(), IdentityId::KPipiII);
    }
}
