//! Terminating hypergeometric and basic hypergeometric series.

use crate::error::{Error, Result};
use crate::numerics::pochhammer::{pochhammer, q_pochhammer};
use crate::numerics::{Rational, Scalar};

/// Ordinary (`pFq`) or basic (`r phi s`) series.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesKind<S> {
    Ordinary,
    Basic { q: S },
}

/// A terminating series whose first numerator parameter is `-n` (or `q^{-n}`).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec<S> {
    pub kind: SeriesKind<S>,
    pub order: usize,
    pub upper: Vec<S>,
    pub lower: Vec<S>,
    pub argument: S,
}

impl<S: Scalar> SeriesSpec<S> {
    /// `(p+1)F(s)(-n, upper; lower; z)`, the `-n` is inserted here.
    pub fn hyper(n: usize, upper: Vec<S>, lower: Vec<S>, argument: S) -> Self {
        let mut all = vec![-S::from_usize(n)];
        all.extend(upper);
        SeriesSpec { kind: SeriesKind::Ordinary, order: n, upper: all, lower, argument }
    }

    /// `(r+1)phi(s)(q^{-n}, upper; lower; q, z)`, the `q^{-n}` is inserted here.
    pub fn qhyper(n: usize, upper: Vec<S>, lower: Vec<S>, q: S, argument: S) -> Self {
        let mut all = vec![q.powi(-(n as i64))];
        all.extend(upper);
        SeriesSpec { kind: SeriesKind::Basic { q }, order: n, upper: all, lower, argument }
    }

    pub fn evaluate(&self) -> Result<S> {
        match &self.kind {
            SeriesKind::Ordinary => hyper_terminating(self),
            SeriesKind::Basic { .. } => qhyper_terminating(self),
        }
    }

    /// Individual terms t_0, ..., t_n.
    pub fn terms(&self) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(self.order + 1);
        for k in 0..=self.order {
            out.push(self.term(k)?);
        }
        Ok(out)
    }

    fn term(&self, k: usize) -> Result<S> {
        match &self.kind {
            SeriesKind::Ordinary => {
                let num = self.upper.iter().fold(S::one(), |acc, a| acc * pochhammer(a, k));
                let den = self.lower.iter().fold(S::one(), |acc, b| acc * pochhammer(b, k));
                if den.is_zero() {
                    return Err(Error::Pole { k });
                }
                let kf: S = pochhammer(&S::one(), k);
                Ok(num / (den * kf) * self.argument.powi(k as i64))
            }
            SeriesKind::Basic { q } => {
                let num = self.upper.iter().fold(S::one(), |acc, a| acc * q_pochhammer(a, q, k));
                let den = self.lower.iter().fold(S::one(), |acc, b| acc * q_pochhammer(b, q, k));
                if den.is_zero() {
                    return Err(Error::Pole { k });
                }
                let qk = q_pochhammer(q, q, k);
                let mut t = num / (den * qk) * self.argument.powi(k as i64);
                // [(-1)^k q^{k(k-1)/2}]^{1+s-r}
                let excess = 1 + self.lower.len() as i64 - self.upper.len() as i64;
                if excess != 0 {
                    let kk = k as i64;
                    let mut f = q.powi(kk * (kk - 1) / 2);
                    if k % 2 == 1 {
                        f = -f;
                    }
                    t = t * f.powi(excess);
                }
                Ok(t)
            }
        }
    }
}

fn check_poles<S: Scalar>(spec: &SeriesSpec<S>) -> Result<()> {
    // a vanishing lower factorial at k <= n is a pole even if the matching term is zero
    for k in 1..=spec.order {
        for b in &spec.lower {
            let d = match &spec.kind {
                SeriesKind::Ordinary => b.clone() + S::from_usize(k - 1),
                SeriesKind::Basic { q } => S::one() - b.clone() * q.powi(k as i64 - 1),
            };
            if d.is_zero() {
                return Err(Error::Pole { k });
            }
        }
    }
    Ok(())
}

/// Sums a terminating `pFq` term by term.
pub fn hyper_terminating<S: Scalar>(spec: &SeriesSpec<S>) -> Result<S> {
    if spec.kind != SeriesKind::Ordinary {
        return Err(Error::Domain("expected an ordinary hypergeometric series".into()));
    }
    sum_terms(spec)
}

/// Sums a terminating basic hypergeometric series term by term.
pub fn qhyper_terminating<S: Scalar>(spec: &SeriesSpec<S>) -> Result<S> {
    match &spec.kind {
        SeriesKind::Basic { q } => {
            if q.is_zero() || *q == S::one() {
                return Err(Error::Domain("basic series needs q not in {0, 1}".into()));
            }
        }
        SeriesKind::Ordinary => {
            return Err(Error::Domain("expected a basic hypergeometric series".into()))
        }
    }
    sum_terms(spec)
}

fn sum_terms<S: Scalar>(spec: &SeriesSpec<S>) -> Result<S> {
    check_poles(spec)?;
    // running ratio keeps the cost linear in n
    let mut total = S::one();
    let mut term = S::one();
    let mut magnitude = 1.0;
    for k in 0..spec.order {
        let mut ratio = spec.argument.clone();
        match &spec.kind {
            SeriesKind::Ordinary => {
                let kk = S::from_usize(k);
                for a in &spec.upper {
                    ratio = ratio * (a.clone() + kk.clone());
                }
                for b in &spec.lower {
                    ratio = ratio / (b.clone() + kk.clone());
                }
                ratio = ratio / S::from_usize(k + 1);
            }
            SeriesKind::Basic { q } => {
                let qk = q.powi(k as i64);
                for a in &spec.upper {
                    ratio = ratio * (S::one() - a.clone() * qk.clone());
                }
                for b in &spec.lower {
                    ratio = ratio / (S::one() - b.clone() * qk.clone());
                }
                ratio = ratio / (S::one() - qk.clone() * q.clone());
                let excess = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
                if excess != 0 {
                    // t_{k+1}/t_k picks up (-q^k)^excess
                    ratio = ratio * (-qk).powi(excess);
                }
            }
        }
        term = term * ratio;
        if term.is_zero() {
            break;
        }
        if !S::EXACT {
            magnitude += term.to_f64().abs();
        }
        total = total + term.clone();
    }
    // float rounding grows with the cancellation Σ|t_k| / |S|; past a factor of 100
    // the same f64 inputs are re-summed as exact dyadic rationals and rounded once
    if !S::EXACT && magnitude > CANCELLATION_LIMIT * total.to_f64().abs() {
        if let Some(exact) = dyadic_spec(spec) {
            return S::from_float(sum_terms(&exact)?.to_f64());
        }
    }
    Ok(total)
}

const CANCELLATION_LIMIT: f64 = 100.0;

/// The series with every f64 input read as the dyadic rational it is.
fn dyadic_spec<S: Scalar>(spec: &SeriesSpec<S>) -> Option<SeriesSpec<Rational>> {
    let conv = |v: &S| Rational::from_float(v.to_f64());
    let mut upper: Vec<Rational> = spec.upper.iter().map(conv).collect::<Option<_>>()?;
    let kind = match &spec.kind {
        SeriesKind::Ordinary => SeriesKind::Ordinary,
        SeriesKind::Basic { q } => {
            let q = conv(q)?;
            // the stored q^{-n} is already rounded
            upper[0] = q.powi(-(spec.order as i64));
            SeriesKind::Basic { q }
        }
    };
    Some(SeriesSpec {
        kind,
        order: spec.order,
        upper,
        lower: spec.lower.iter().map(conv).collect::<Option<_>>()?,
        argument: conv(&spec.argument)?,
    })
}

/// Non-terminating `(r)phi(r-1)` summed in floating point until terms fall below `tol`.
pub fn qhyper_nonterminating(upper: &[f64], lower: &[f64], q: f64, z: f64, tol: f64) -> Result<f64> {
    if upper.len() != lower.len() + 1 {
        return Err(Error::Domain("only balanced r = s + 1 series are supported".into()));
    }
    if !(z.abs() < 1.0 && q.abs() < 1.0) {
        return Err(Error::Domain("non-terminating series needs |z| < 1 and |q| < 1".into()));
    }
    let mut total = 1.0;
    let mut term = 1.0;
    let mut qk = 1.0;
    for k in 0..100_000 {
        let mut ratio = z;
        for a in upper {
            ratio *= 1.0 - a * qk;
        }
        for b in lower {
            let d = 1.0 - b * qk;
            if d == 0.0 {
                return Err(Error::Pole { k: k + 1 });
            }
            ratio /= d;
        }
        ratio /= 1.0 - qk * q;
        term *= ratio;
        total += term;
        qk *= q;
        if term.abs() < tol * total.abs().max(1e-300) && k > 4 {
            return Ok(total);
        }
    }
    Err(Error::Numeric("non-terminating basic series did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Rational};

    #[test]
    fn spec_examples() {
        let s = SeriesSpec::hyper(1, vec![], vec![], rat(1, 3));
        assert_eq!(s.evaluate().unwrap(), rat(2, 3));
        let s = SeriesSpec::hyper(1, vec![rat(1, 1), rat(1, 1)], vec![rat(3, 1), rat(-1, 1)], rat(1, 1));
        assert_eq!(s.evaluate().unwrap(), rat(4, 3));
        let q = rat(1, 2);
        let s = SeriesSpec::qhyper(1, vec![rat(1, 2)], vec![rat(1, 4)], q, rat(1, 4));
        assert_eq!(s.evaluate().unwrap(), rat(2, 3));
    }

    #[test]
    fn poles_are_reported() {
        let s = SeriesSpec::hyper(3, vec![rat(1, 1)], vec![rat(-1, 1)], rat(1, 1));
        assert_eq!(s.evaluate(), Err(Error::Pole { k: 2 }));
    }

    #[test]
    fn zero_argument_is_one() {
        let q = rat(1, 3);
        let s: SeriesSpec<Rational> = SeriesSpec::qhyper(4, vec![], vec![], q, rat(0, 1));
        assert_eq!(s.evaluate().unwrap(), rat(1, 1));
    }

    #[test]
    fn ratio_sum_matches_direct_terms() {
        let q = rat(2, 5);
        let s = SeriesSpec::qhyper(
            5,
            vec![rat(1, 3), rat(3, 7)],
            vec![rat(1, 9), rat(2, 11)],
            q.clone(),
            q,
        );
        let direct = s.terms().unwrap().into_iter().fold(rat(0, 1), |a, t| a + t);
        assert_eq!(s.evaluate().unwrap(), direct);
        let s = SeriesSpec::qhyper(4, vec![], vec![rat(1, 3)], rat(1, 2), rat(3, 1));
        let direct = s.terms().unwrap().into_iter().fold(rat(0, 1), |a, t| a + t);
        assert_eq!(s.evaluate().unwrap(), direct);
    }

    #[test]
    fn nonterminating_q_gauss() {
        // 2phi1(a, b; c; q, c/(ab)) = (c/a, c/b; q)_inf / (c, c/(ab); q)_inf
        use crate::numerics::pochhammer::q_pochhammer_inf_multi;
        let (a, b, c, q) = (0.2, 0.3, 0.05, 0.6);
        let z = c / (a * b);
        let lhs = qhyper_nonterminating(&[a, b], &[c], q, z, 1e-18).unwrap();
        let rhs = q_pochhammer_inf_multi(&[c / a, c / b], q).unwrap()
            / q_pochhammer_inf_multi(&[c, c / (a * b)], q).unwrap();
        assert!((lhs - rhs).abs() < 1e-13, "{lhs} vs {rhs}");
    }
}
