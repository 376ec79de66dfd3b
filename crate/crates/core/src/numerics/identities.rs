//! Finite summation identities checked by direct summation against closed forms.

use crate::error::{domain, Result};
use crate::numerics::pochhammer::{binomial, pochhammer, q_binomial, q_pochhammer};
use crate::numerics::{Scalar, SeriesSpec};

/// A summation identity with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Summation<S> {
    /// 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
    ChuVandermonde { b: S, c: S },
    /// balanced 3F2(-n, a, b; c, 1+a+b-c-n; 1) = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)
    PfaffSaalschutz { a: S, b: S, c: S },
    /// 2phi1(q^-n, b; c; q, c q^n / b) = (c/b; q)_n / (c; q)_n
    QChuVandermonde { b: S, c: S, q: S },
    /// 3phi2(q^-n, a, b; c, ab q^{1-n}/c; q, q) = (c/a, c/b; q)_n / (c, c/(ab); q)_n
    QPfaffSaalschutz { a: S, b: S, c: S, q: S },
    /// Σ_k C(n,k) (a)_k (b)_{n-k} = (a+b)_n
    RisingBinomial { a: S, b: S },
    /// Σ_k C(n,k) (b1)_{n-k} (b2)_k (a)_{m+k} / (a+b1+b2)_{m+k}
    ///   = (a)_m (b1+b2)_n (a+b1)_{m+n} / ((a+b1+b2)_{m+n} (a+b1)_m)
    ShiftedRisingBinomial { a: S, b1: S, b2: S, m: usize },
    /// Σ_k [n k] (a;q)_k (b;q)_{n-k} a^{n-k} = (ab;q)_n
    QRisingBinomial { a: S, b: S, q: S },
    /// Σ_k [n k] (b1;q)_{n-k} (b2;q)_k b1^k (a;q)_{m+k} / (a b1 b2;q)_{m+k}
    ///   = (a;q)_m (b1 b2;q)_n (a b1;q)_{m+n} / ((a b1 b2;q)_{m+n} (a b1;q)_m)
    QShiftedRisingBinomial { a: S, b1: S, b2: S, q: S, m: usize },
    /// Σ_y π_K(y, N, b) (-y)_k = (-N)_k b^k, checked for k = 0..=n_max
    KrawtchoukFactorialMoments { b: S, big_n: usize },
    /// Σ_n C(N,n) P_n(x, p) t^n = (1 - (1-p) t / p)^x (1+t)^{N-x}, for N = 0..=n_max and all x
    KrawtchoukGenerating { p: S, t: S },
}

/// Left and right sides at each index.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport<S> {
    pub name: &'static str,
    /// (index, sub-index, lhs, rhs)
    pub rows: Vec<(usize, usize, S, S)>,
}

impl<S: Scalar> IdentityReport<S> {
    pub fn holds(&self, tol: f64) -> bool {
        self.rows.iter().all(|(_, _, l, r)| l.close(r, tol))
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.rows
            .iter()
            .map(|(_, _, l, r)| (l.to_f64() - r.to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> Summation<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Summation::ChuVandermonde { .. } => "chu-vandermonde",
            Summation::PfaffSaalschutz { .. } => "pfaff-saalschutz",
            Summation::QChuVandermonde { .. } => "q-chu-vandermonde",
            Summation::QPfaffSaalschutz { .. } => "q-pfaff-saalschutz",
            Summation::RisingBinomial { .. } => "rising-binomial",
            Summation::ShiftedRisingBinomial { .. } => "shifted-rising-binomial",
            Summation::QRisingBinomial { .. } => "q-rising-binomial",
            Summation::QShiftedRisingBinomial { .. } => "q-shifted-rising-binomial",
            Summation::KrawtchoukFactorialMoments { .. } => "krawtchouk-factorial-moments",
            Summation::KrawtchoukGenerating { .. } => "krawtchouk-generating-function",
        }
    }

    /// All rows for index `n`.
    fn rows(&self, n: usize) -> Result<Vec<(usize, usize, S, S)>> {
        let one = S::one();
        let nn = S::from_usize(n);
        let single = |l: S, r: S| Ok(vec![(n, 0, l, r)]);
        match self {
            Summation::ChuVandermonde { b, c } => {
                let lhs = SeriesSpec::hyper(n, vec![b.clone()], vec![c.clone()], one).evaluate()?;
                let den = pochhammer(c, n);
                if den.is_zero() {
                    return domain("(c)_n vanishes");
                }
                single(lhs, pochhammer(&(c.clone() - b.clone()), n) / den)
            }
            Summation::PfaffSaalschutz { a, b, c } => {
                let lower2 = one.clone() + a.clone() + b.clone() - c.clone() - nn;
                let lhs = SeriesSpec::hyper(n, vec![a.clone(), b.clone()], vec![c.clone(), lower2], one)
                    .evaluate()?;
                let den = pochhammer(c, n) * pochhammer(&(c.clone() - a.clone() - b.clone()), n);
                if den.is_zero() {
                    return domain("right-hand denominator vanishes");
                }
                let rhs = pochhammer(&(c.clone() - a.clone()), n) * pochhammer(&(c.clone() - b.clone()), n)
                    / den;
                single(lhs, rhs)
            }
            Summation::QChuVandermonde { b, c, q } => {
                let z = c.clone() * q.powi(n as i64) / b.clone();
                let lhs = SeriesSpec::qhyper(n, vec![b.clone()], vec![c.clone()], q.clone(), z).evaluate()?;
                let den = q_pochhammer(c, q, n);
                if den.is_zero() {
                    return domain("(c;q)_n vanishes");
                }
                single(lhs, q_pochhammer(&(c.clone() / b.clone()), q, n) / den)
            }
            Summation::QPfaffSaalschutz { a, b, c, q } => {
                let ab = a.clone() * b.clone();
                let lower2 = ab.clone() * q.powi(1 - n as i64) / c.clone();
                let lhs = SeriesSpec::qhyper(
                    n,
                    vec![a.clone(), b.clone()],
                    vec![c.clone(), lower2],
                    q.clone(),
                    q.clone(),
                )
                .evaluate()?;
                let den = q_pochhammer(c, q, n) * q_pochhammer(&(c.clone() / ab), q, n);
                if den.is_zero() {
                    return domain("right-hand denominator vanishes");
                }
                let rhs = q_pochhammer(&(c.clone() / a.clone()), q, n)
                    * q_pochhammer(&(c.clone() / b.clone()), q, n)
                    / den;
                single(lhs, rhs)
            }
            Summation::RisingBinomial { a, b } => {
                let lhs = (0..=n).fold(S::zero(), |acc, k| {
                    acc + binomial::<S>(n as i64, k as i64) * pochhammer(a, k) * pochhammer(b, n - k)
                });
                single(lhs, pochhammer(&(a.clone() + b.clone()), n))
            }
            Summation::ShiftedRisingBinomial { a, b1, b2, m } => {
                let m = *m;
                let s = a.clone() + b1.clone() + b2.clone();
                let mut lhs = S::zero();
                for k in 0..=n {
                    let den = pochhammer(&s, m + k);
                    if den.is_zero() {
                        return domain("(a+b1+b2)_{m+k} vanishes");
                    }
                    lhs = lhs
                        + binomial::<S>(n as i64, k as i64)
                            * pochhammer(b1, n - k)
                            * pochhammer(b2, k)
                            * pochhammer(a, m + k)
                            / den;
                }
                let ab1 = a.clone() + b1.clone();
                let den = pochhammer(&s, m + n) * pochhammer(&ab1, m);
                if den.is_zero() {
                    return domain("right-hand denominator vanishes");
                }
                let rhs = pochhammer(a, m) * pochhammer(&(b1.clone() + b2.clone()), n) * pochhammer(&ab1, m + n)
                    / den;
                single(lhs, rhs)
            }
            Summation::QRisingBinomial { a, b, q } => {
                let lhs = (0..=n).fold(S::zero(), |acc, k| {
                    acc + q_binomial(n as i64, k as i64, q)
                        * q_pochhammer(a, q, k)
                        * q_pochhammer(b, q, n - k)
                        * a.powi((n - k) as i64)
                });
                single(lhs, q_pochhammer(&(a.clone() * b.clone()), q, n))
            }
            Summation::QShiftedRisingBinomial { a, b1, b2, q, m } => {
                let m = *m;
                let s = a.clone() * b1.clone() * b2.clone();
                let mut lhs = S::zero();
                for k in 0..=n {
                    let den = q_pochhammer(&s, q, m + k);
                    if den.is_zero() {
                        return domain("(a b1 b2;q)_{m+k} vanishes");
                    }
                    lhs = lhs
                        + q_binomial(n as i64, k as i64, q)
                            * q_pochhammer(b1, q, n - k)
                            * q_pochhammer(b2, q, k)
                            * b1.powi(k as i64)
                            * q_pochhammer(a, q, m + k)
                            / den;
                }
                let ab1 = a.clone() * b1.clone();
                let den = q_pochhammer(&s, q, m + n) * q_pochhammer(&ab1, q, m);
                if den.is_zero() {
                    return domain("right-hand denominator vanishes");
                }
                let rhs = q_pochhammer(a, q, m)
                    * q_pochhammer(&(b1.clone() * b2.clone()), q, n)
                    * q_pochhammer(&ab1, q, m + n)
                    / den;
                single(lhs, rhs)
            }
            Summation::KrawtchoukFactorialMoments { b, big_n } => {
                let big_n = *big_n;
                let lhs = (0..=big_n).fold(S::zero(), |acc, y| {
                    let pi = binomial::<S>(big_n as i64, y as i64)
                        * b.powi(y as i64)
                        * (one.clone() - b.clone()).powi((big_n - y) as i64);
                    acc + pi * pochhammer(&-S::from_usize(y), n)
                });
                single(lhs, pochhammer(&-S::from_usize(big_n), n) * b.powi(n as i64))
            }
            Summation::KrawtchoukGenerating { p, t } => {
                let big_n = n;
                let mut out = Vec::with_capacity(big_n + 1);
                for x in 0..=big_n {
                    let mut lhs = S::zero();
                    for k in 0..=big_n {
                        let pk = SeriesSpec::hyper(
                            k,
                            vec![-S::from_usize(x)],
                            vec![-S::from_usize(big_n)],
                            one.clone() / p.clone(),
                        )
                        .evaluate()?;
                        lhs = lhs + binomial::<S>(big_n as i64, k as i64) * pk * t.powi(k as i64);
                    }
                    let rhs = (one.clone() - (one.clone() - p.clone()) * t.clone() / p.clone())
                        .powi(x as i64)
                        * (one.clone() + t.clone()).powi((big_n - x) as i64);
                    out.push((big_n, x, lhs, rhs));
                }
                Ok(out)
            }
        }
    }
}

/// Evaluates both sides of a summation identity for `n = 0..=n_max`.
pub fn identity_oracle<S: Scalar>(id: &Summation<S>, n_max: usize) -> Result<IdentityReport<S>> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        rows.extend(id.rows(n)?);
    }
    Ok(IdentityReport { name: id.name(), rows })
}

/// Every summation identity at `count` rational points away from the poles.
pub fn sample_grid(count: usize) -> Vec<Summation<crate::numerics::Rational>> {
    use crate::numerics::rat;
    let mut out = Vec::new();
    for i in 0..count as i64 {
        let q = [rat(1, 2), rat(1, 3), rat(2, 3)][i as usize % 3].clone();
        let (a, b, c) = (rat(2 * i + 1, 3), rat(3 * i + 2, 7), rat(5 * i + 4, 11));
        // q-parameters in (0, 1) with c < ab so no factor (q^{-j}; q) appears
        let (qa, qb, qc) = (rat(i + 2, i + 3), rat(2 * i + 5, 2 * i + 7), rat(1, 13 + i));
        out.push(Summation::ChuVandermonde { b: b.clone(), c: c.clone() });
        out.push(Summation::PfaffSaalschutz { a: a.clone(), b: b.clone(), c: c.clone() });
        out.push(Summation::QChuVandermonde { b: qb.clone(), c: qc.clone(), q: q.clone() });
        out.push(Summation::QPfaffSaalschutz { a: qa.clone(), b: qb.clone(), c: qc.clone(), q: q.clone() });
        out.push(Summation::RisingBinomial { a: a.clone(), b: b.clone() });
        out.push(Summation::ShiftedRisingBinomial { a: a.clone(), b1: b.clone(), b2: c.clone(), m: i as usize });
        out.push(Summation::QRisingBinomial { a: qa.clone(), b: qb.clone(), q: q.clone() });
        out.push(Summation::QShiftedRisingBinomial {
            a: qa.clone(),
            b1: qb.clone(),
            b2: qc.clone(),
            q: q.clone(),
            m: i as usize,
        });
        out.push(Summation::KrawtchoukFactorialMoments { b: qc.clone(), big_n: 6 + i as usize });
        out.push(Summation::KrawtchoukGenerating { p: qb, t: c });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Rational};

    #[test]
    fn grid_holds_exactly() {
        for id in sample_grid(5) {
            let r = identity_oracle(&id, 12).unwrap();
            assert!(r.holds(0.0), "{}", r.name);
        }
    }

    #[test]
    fn rising_binomial_example() {
        let id = Summation::RisingBinomial { a: rat(1, 1), b: rat(1, 1) };
        let r = identity_oracle(&id, 2).unwrap();
        assert_eq!(r.rows[2].2, rat(6, 1));
        assert!(r.holds(0.0));
    }

    #[test]
    fn moment_example() {
        let id = Summation::KrawtchoukFactorialMoments { b: rat(1, 2), big_n: 2 };
        let r = identity_oracle(&id, 1).unwrap();
        assert_eq!(r.rows[1].2, rat(-1, 1));
        assert!(r.holds(0.0));
    }

    #[test]
    fn all_identities_hold_on_sample_points() {
        let q = rat(1, 3);
        let ids: Vec<Summation<Rational>> = vec![
            Summation::ChuVandermonde { b: rat(2, 3), c: rat(5, 2) },
            Summation::PfaffSaalschutz { a: rat(1, 3), b: rat(3, 4), c: rat(7, 5) },
            Summation::QChuVandermonde { b: rat(2, 3), c: rat(1, 5), q: q.clone() },
            Summation::QPfaffSaalschutz { a: rat(1, 3), b: rat(3, 4), c: rat(2, 7), q: q.clone() },
            Summation::RisingBinomial { a: rat(3, 2), b: rat(2, 9) },
            Summation::ShiftedRisingBinomial { a: rat(3, 2), b1: rat(2, 9), b2: rat(5, 4), m: 3 },
            Summation::QRisingBinomial { a: rat(1, 2), b: rat(2, 9), q: q.clone() },
            Summation::QShiftedRisingBinomial { a: rat(1, 2), b1: rat(2, 9), b2: rat(3, 4), q: q.clone(), m: 2 },
            Summation::KrawtchoukFactorialMoments { b: rat(2, 7), big_n: 9 },
            Summation::KrawtchoukGenerating { p: rat(2, 7), t: rat(3, 5) },
        ];
        for id in &ids {
            let r = identity_oracle(id, 9).unwrap();
            assert!(r.holds(0.0), "{}", id.name());
        }
    }
}
