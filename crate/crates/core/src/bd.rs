//! Discrete-time birth and death chains and their banded powers.

use crate::chains::TransitionMatrix;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::numerics::Scalar;

/// Birth and death rates read off the difference equation of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct BdRates<S> {
    pub family: Family<S>,
    pub size: usize,
    pub birth: Vec<S>,
    pub death: Vec<S>,
    /// ℰ(n) for n = 0..=N
    pub eigen: Vec<S>,
}

fn agree<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a == b
    } else {
        crate::tolerance::approx_eq(a.to_f64(), b.to_f64(), 1e-10)
    }
}

/// Rates for Krawtchouk or Hahn on {0..N}, checked against the difference equation at every (n, x).
pub fn bd_rates<S: Scalar>(family: &Family<S>, n: usize) -> Result<BdRates<S>> {
    family.validate()?;
    let xs = |x: usize| S::from_usize(x);
    let size = S::from_usize(n);
    let (birth, death, eigen): (Vec<S>, Vec<S>, Vec<S>) = match family {
        Family::Krawtchouk { p } => (
            (0..=n).map(|x| p.clone() * (size.clone() - xs(x))).collect(),
            (0..=n).map(|x| (S::one() - p.clone()) * xs(x)).collect(),
            (0..=n).map(xs).collect(),
        ),
        Family::Hahn { a, b } => (
            (0..=n).map(|x| (xs(x) + a.clone()) * (size.clone() - xs(x))).collect(),
            (0..=n).map(|x| xs(x) * (b.clone() + size.clone() - xs(x))).collect(),
            (0..=n).map(|k| xs(k) * (xs(k) + a.clone() + b.clone() - S::one())).collect(),
        ),
        _ => return Err(Error::Domain(format!("no birth and death rates for {family:?}"))),
    };
    for k in 0..=n {
        let poly: Vec<S> = (0..=n).map(|x| family.poly(k, x, n)).collect::<Result<_>>()?;
        for x in 0..=n {
            let mut lhs = S::zero();
            if x < n {
                lhs = lhs + birth[x].clone() * (poly[x].clone() - poly[x + 1].clone());
            }
            if x > 0 {
                lhs = lhs + death[x].clone() * (poly[x].clone() - poly[x - 1].clone());
            }
            if !agree(&lhs, &(eigen[k].clone() * poly[x].clone())) {
                return Err(Error::Rates { n: k, x });
            }
        }
    }
    Ok(BdRates { family: family.clone(), size: n, birth, death, eigen })
}

/// The tridiagonal generator L with zero column sums.
#[derive(Clone, Debug, PartialEq)]
pub struct BdOperator<S> {
    pub rates: BdRates<S>,
    pub matrix: TransitionMatrix<S>,
}

impl<S: Scalar> BdOperator<S> {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn power(&self, m: usize) -> TransitionMatrix<S> {
        self.matrix.pow(m)
    }
}

pub fn build_l<S: Scalar>(rates: &BdRates<S>) -> BdOperator<S> {
    let (b, d) = (&rates.birth, &rates.death);
    let matrix = TransitionMatrix::from_fn(rates.size + 1, |x, y| {
        if x == y + 1 {
            b[y].clone()
        } else if y == x + 1 {
            d[y].clone()
        } else if x == y {
            -(b[y].clone() + d[y].clone())
        } else {
            S::zero()
        }
    });
    BdOperator { rates: rates.clone(), matrix }
}

/// Entries (x, k) of L^m that break L^m(x+k, x) = (-1)^{m-k} a with a > 0, or leave the band.
pub fn sign_pattern_violations<S: Scalar>(op: &BdOperator<S>, m: usize) -> Vec<(usize, i64)> {
    let lm = op.power(m);
    let dim = op.dim() as i64;
    let mut bad = Vec::new();
    for x in 0..dim {
        for z in 0..dim {
            let k = z - x;
            let v = lm.get(z as usize, x as usize);
            let ok = if k.unsigned_abs() as usize > m {
                v.is_zero()
            } else {
                let a = if (m as i64 - k) % 2 == 0 { v.clone() } else { -v.clone() };
                a > S::zero()
            };
            if !ok {
                bad.push((x as usize, k));
            }
        }
    }
    bad
}

/// Weights c_0 = 1, c_1, ..., c_{m-1} and the time scale t_S.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector<S> {
    pub c: Vec<S>,
    pub t_s: S,
}

impl<S: Scalar> WeightVector<S> {
    pub fn m(&self) -> usize {
        self.c.len()
    }

    pub fn with_time_scale(&self, t_s: S) -> Self {
        WeightVector { c: self.c.clone(), t_s }
    }
}

/// X = Σ_j c_j L^{m-j}.
pub fn x_matrix<S: Scalar>(op: &BdOperator<S>, c: &[S]) -> TransitionMatrix<S> {
    let m = c.len();
    let dim = op.dim();
    let mut x = TransitionMatrix::zeros(dim);
    let mut power = op.matrix.clone();
    for j in (0..m).rev() {
        x = x.add(&power.scale(&c[j]));
        if j > 0 {
            power = power.mul(&op.matrix);
        }
    }
    x
}

/// Smallest c with c·coef + rest > 0 for every pair, as the max of -rest/coef.
fn lower_bound<S: Scalar>(pairs: impl Iterator<Item = (S, S)>) -> Option<S> {
    pairs.map(|(coef, rest)| -rest / coef).reduce(|a, b| if b > a { b } else { a })
}

/// θ = 2 above a positive bound; zero below a negative one; one when the bound is zero.
fn pick<S: Scalar>(bound: S) -> S {
    if bound > S::zero() {
        S::from_int(2) * bound
    } else if bound < S::zero() {
        S::zero()
    } else {
        S::one()
    }
}

fn check_x<S: Scalar>(x: &TransitionMatrix<S>, m: usize) -> Result<()> {
    let dim = x.dim();
    for col in 0..dim {
        for row in 0..dim {
            let d = row.abs_diff(col);
            let v = x.get(row, col);
            let ok = if d == 0 {
                *v < S::zero()
            } else if d <= m {
                *v > S::zero()
            } else {
                v.is_zero()
            };
            if !ok {
                let stage = if d == 0 { m - 1 } else { m.saturating_sub(d) };
                return Err(Error::Tuning { stage, reason: format!("X({row}, {col}) = {v}") });
            }
        }
    }
    Ok(())
}

/// Greedy choice of c_1, ..., c_{m-1}, with t_S = 1/(2 max(-X(x,x))).
pub fn tune_weights<S: Scalar>(op: &BdOperator<S>, m: usize) -> Result<WeightVector<S>> {
    let n = op.dim() - 1;
    if m == 0 {
        return Err(Error::Tuning { stage: 0, reason: "m must be at least 1".into() });
    }
    if m > n {
        return Err(Error::Tuning { stage: 0, reason: format!("band {m} does not fit on {{0..{n}}}") });
    }
    let powers: Vec<TransitionMatrix<S>> = (0..=m).map(|j| op.power(j)).collect();
    let mut c = vec![S::one()];
    for k in 1..m {
        let d = m - k;
        let coef = &powers[d];
        let partial = |row: usize, col: usize| {
            (0..k).fold(S::zero(), |acc, j| acc + c[j].clone() * powers[m - j].get(row, col).clone())
        };
        let mut pairs = Vec::new();
        for col in 0..=n {
            for row in [col + d, col.wrapping_sub(d)] {
                if row <= n {
                    pairs.push((coef.get(row, col).clone(), partial(row, col)));
                }
            }
        }
        if k == m - 1 {
            for col in 0..=n {
                // X(x,x) < 0 with L(x,x) < 0 is again a lower bound on c
                pairs.push((-coef.get(col, col).clone(), -partial(col, col)));
            }
        }
        if pairs.iter().any(|(cf, _)| *cf <= S::zero()) {
            return Err(Error::Tuning { stage: k, reason: "vanishing leading coefficient".into() });
        }
        let bound = lower_bound(pairs.into_iter())
            .ok_or_else(|| Error::Tuning { stage: k, reason: "no entries in band".into() })?;
        c.push(pick(bound));
    }
    let x = x_matrix(op, &c);
    check_x(&x, m)?;
    let worst = (0..=n).map(|i| -x.get(i, i).clone()).reduce(|a, b| if b > a { b } else { a }).expect("nonempty");
    let t_s = S::one() / (S::from_int(2) * worst);
    Ok(WeightVector { c, t_s })
}

/// K = I + t_S X.
pub fn build_k_bd<S: Scalar>(op: &BdOperator<S>, weights: &WeightVector<S>) -> Result<TransitionMatrix<S>> {
    let m = weights.m();
    if m == 0 || weights.c[0] != S::one() {
        return Err(Error::Tuning { stage: 0, reason: "c_0 must be 1".into() });
    }
    let x = x_matrix(op, &weights.c);
    check_x(&x, m)?;
    if weights.t_s <= S::zero() {
        return Err(Error::Tuning { stage: m - 1, reason: "t_S must be positive".into() });
    }
    let k = TransitionMatrix::identity(op.dim()).add(&x.scale(&weights.t_s));
    if !k.is_nonnegative() {
        return Err(Error::Tuning { stage: m - 1, reason: "t_S too large, negative diagonal".into() });
    }
    Ok(k)
}

/// κ(n) = 1 + t_S Σ_j (-1)^{m-j} c_j ℰ(n)^{m-j}.
pub fn kappa_bd<S: Scalar>(weights: &WeightVector<S>, eigen: &S) -> S {
    let m = weights.m();
    let sum = weights.c.iter().enumerate().fold(S::zero(), |acc, (j, c)| {
        let e = (-eigen.clone()).powi((m - j) as i64);
        acc + c.clone() * e
    });
    S::one() + weights.t_s.clone() * sum
}

/// First x where Σ_y K(x,y) π(y) P_n(y) differs from κ π(x) P_n(x).
pub fn eigen_relation_violation<S: Scalar>(
    k: &TransitionMatrix<S>,
    rates: &BdRates<S>,
    n: usize,
    kappa: &S,
) -> Result<Option<usize>> {
    let size = rates.size;
    let v: Vec<S> = (0..=size)
        .map(|y| Ok(rates.family.weight_ratio(y, size) * rates.family.poly(n, y, size)?))
        .collect::<Result<_>>()?;
    let kv = k.apply(&v);
    Ok((0..=size).find(|&x| !agree(&kv[x], &(kappa.clone() * v[x].clone()))))
}
