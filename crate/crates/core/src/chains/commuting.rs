//! One-parameter deformations that keep the stationary measure fixed.

use crate::chains::params::Params;
use crate::chains::registry::CaseId;
use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Admissible range of `t` as (lower, upper, upper included).
pub fn deformation_interval<S: Scalar>(case: CaseId, params: &Params<S>) -> Result<(S, S, bool)> {
    let g = |n: &str| params.get(n);
    match case {
        CaseId::KI | CaseId::CConv1 => Ok((S::zero(), S::one(), true)),
        CaseId::HI => Ok((-g("a")?, g("b")?, false)),
        CaseId::QHI | CaseId::QMI => Ok((g("b")?, S::one() / g("a")?, false)),
        _ => Err(Error::Case(format!("{case} has no registered commuting deformation"))),
    }
}

/// Case parameters of the deformed chain at `t`.
pub fn commuting_family<S: Scalar>(case: CaseId, params: &Params<S>, t: &S) -> Result<Params<S>> {
    let params = params.conform(&case.param_names())?;
    let (lo, hi, closed) = deformation_interval(case, &params)?;
    let inside = *t > lo && (*t < hi || closed && *t == hi);
    if !inside {
        let right = if closed { "]" } else { ")" };
        return Err(Error::Domain(format!("{case}: t = {t} outside ({lo}, {hi}{right}")));
    }
    let g = |n: &str| params.get(n).expect("conformed");
    let one = S::one();
    let (a, b) = (g("a"), g("b"));
    let out = match case {
        CaseId::KI => {
            let at = a.clone() * t.clone();
            let b2 = (one.clone() - at.clone()) * b.clone()
                / (one.clone() - a * (one.clone() - b * (one - t.clone())));
            params.with("a", at).with("b", b2)
        }
        CaseId::CConv1 => {
            let at = a.clone() * t.clone();
            let b2 = (one.clone() - at.clone()) * b / (one - a);
            params.with("a", at).with("b", b2)
        }
        CaseId::HI => params.with("a", a + t.clone()).with("b", b - t.clone()),
        _ => params.with("a", a * t.clone()).with("b", b / t.clone()),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_finite, resolve_lambda};
    use crate::numerics::{rat, Rational};

    #[test]
    fn k_i_half() {
        let p: Params<Rational> = Params::new([("a", rat(1, 2)), ("b", rat(1, 2))]);
        assert_eq!(commuting_family(CaseId::KI, &p, &rat(1, 1)).unwrap(), p);
        let d = commuting_family(CaseId::KI, &p, &rat(1, 2)).unwrap();
        assert_eq!(d.get("a").unwrap(), rat(1, 4));
        assert_eq!(resolve_lambda(CaseId::KI, &d).unwrap(), resolve_lambda(CaseId::KI, &p).unwrap());
        let k = build_finite(CaseId::KI, &p, 4).unwrap();
        let kt = build_finite(CaseId::KI, &d, 4).unwrap();
        assert!(k.commutator(&kt).is_zero());
        assert!(k != kt);
        assert!(commuting_family(CaseId::KI, &p, &rat(3, 2)).is_err());
        assert!(commuting_family(CaseId::KII, &p, &rat(1, 2)).is_err());
    }
}
