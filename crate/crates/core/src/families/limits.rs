use crate::error::Result;
use crate::families::Family;
use crate::numerics::Scalar;

/// Parameter substitutions that turn a finite family into a semi-infinite one as `N` grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMap {
    /// Krawtchouk to Charlier: p = a/N.
    KrawtchoukToCharlier,
    /// Hahn to Meixner: (a, b) = (a, N(1-b)/b).
    HahnToMeixner,
    /// Meixner to Charlier: (a, b) = (N, a/(N+a)), N playing the role of the diverging `a`.
    MeixnerToCharlier,
    /// q-Hahn to q-Meixner: (a, b) = (bq, -q^{-N}/(bc)).
    QHahnToQMeixner,
}

/// Given parameters of the limiting family, returns the source family at size `n`.
///
/// The returned source parameters are formal; only the target is validated.
pub fn limit_map<S: Scalar>(map: LimitMap, target: &Family<S>, n: usize) -> Result<Family<S>> {
    target.validate()?;
    let nn = S::from_usize(n);
    let wrong = || {
        crate::error::Error::Domain(format!("{map:?} does not apply to a {} target", target.id()))
    };
    match (map, target) {
        (LimitMap::KrawtchoukToCharlier, Family::Charlier { a }) => {
            Ok(Family::Krawtchouk { p: a.clone() / nn })
        }
        (LimitMap::HahnToMeixner, Family::Meixner { a, b }) => Ok(Family::Hahn {
            a: a.clone(),
            b: nn * (S::one() - b.clone()) / b.clone(),
        }),
        (LimitMap::MeixnerToCharlier, Family::Charlier { a }) => Ok(Family::Meixner {
            a: nn.clone(),
            b: a.clone() / (nn + a.clone()),
        }),
        (LimitMap::QHahnToQMeixner, Family::QMeixner { b, c, q }) => Ok(Family::QHahn {
            a: b.clone() * q.clone(),
            b: -(q.powi(-(n as i64)) / (b.clone() * c.clone())),
            q: q.clone(),
        }),
        _ => Err(wrong()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn examples() {
        let k = limit_map(LimitMap::KrawtchoukToCharlier, &Family::Charlier { a: rat(1, 2) }, 100).unwrap();
        assert_eq!(k, Family::Krawtchouk { p: rat(1, 200) });
        let h = limit_map(LimitMap::HahnToMeixner, &Family::Meixner { a: rat(2, 1), b: rat(1, 2) }, 10)
            .unwrap();
        assert_eq!(h, Family::Hahn { a: rat(2, 1), b: rat(10, 1) });
        assert!(limit_map(LimitMap::HahnToMeixner, &Family::Charlier { a: rat(1, 1) }, 10).is_err());
        assert!(limit_map(LimitMap::KrawtchoukToCharlier, &Family::Charlier { a: rat(-1, 1) }, 10).is_err());
    }

    #[test]
    fn krawtchouk_approaches_charlier() {
        let n = 10_000;
        let k = limit_map(LimitMap::KrawtchoukToCharlier, &Family::Charlier { a: 1.0 }, n).unwrap();
        let c = Family::Charlier { a: 1.0 };
        for x in 0..=8 {
            let d = (k.weight(x, n).unwrap() - c.weight(x, 0).unwrap()).abs();
            assert!(d < 1e-3);
        }
    }

    #[test]
    fn meixner_limits_shrink() {
        let m = Family::Meixner { a: 3.0, b: 0.4 };
        let err = |n: usize| {
            let h = limit_map(LimitMap::HahnToMeixner, &m, n).unwrap();
            (0..6).map(|x| (h.weight(x, n).unwrap() - m.weight(x, 0).unwrap()).abs()).fold(0.0, f64::max)
        };
        assert!(err(2000) < err(200) && err(2000) < 1e-2);
        let c = Family::Charlier { a: 1.5 };
        let m_err = |n: usize| {
            let m = limit_map(LimitMap::MeixnerToCharlier, &c, n).unwrap();
            (0..6).map(|x| (m.weight(x, 0).unwrap() - c.weight(x, 0).unwrap()).abs()).fold(0.0, f64::max)
        };
        assert!(m_err(5000) < m_err(50) && m_err(5000) < 1e-3);
    }

    #[test]
    fn q_hahn_approaches_q_meixner() {
        let target = Family::QMeixner { b: 0.5, c: 0.7, q: 0.5 };
        let n = 40;
        let src = limit_map(LimitMap::QHahnToQMeixner, &target, n).unwrap();
        for x in 0..6 {
            let a = src.weight_ratio(x, n);
            let b = target.weight_ratio(x, 0);
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{x}: {a} vs {b}");
        }
    }
}
