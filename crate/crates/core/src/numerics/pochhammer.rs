//! Shifted factorials, their q-analogues and binomial coefficients.

use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Length of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QLength {
    Finite(usize),
    Infinite,
}

/// Truncation threshold for infinite q-products.
pub const INFINITE_PRODUCT_CUTOFF: f64 = 1e-18;

/// Rising factorial (a)_k.
pub fn pochhammer<S: Scalar>(a: &S, k: usize) -> S {
    let mut acc = S::one();
    for j in 0..k {
        acc = acc * (a.clone() + S::from_usize(j));
    }
    acc
}

/// Finite q-shifted factorial (a; q)_k.
pub fn q_pochhammer<S: Scalar>(a: &S, q: &S, k: usize) -> S {
    let mut acc = S::one();
    let mut aq = a.clone();
    for _ in 0..k {
        acc = acc * (S::one() - aq.clone());
        aq = aq * q.clone();
    }
    acc
}

/// (a; q)_k or (a; q)_inf. The infinite product is only available in floating point.
pub fn q_pochhammer_len<S: Scalar>(a: &S, q: &S, len: QLength) -> Result<S> {
    match len {
        QLength::Finite(k) => Ok(q_pochhammer(a, q, k)),
        QLength::Infinite => {
            if S::EXACT {
                return Err(Error::Transcendental("infinite q-product".into()));
            }
            S::from_float(q_pochhammer_inf(a.to_f64(), q.to_f64())?)
        }
    }
}

/// (a; q)_inf for |q| < 1, stopping once |a q^k| drops below the cutoff.
pub fn q_pochhammer_inf(a: f64, q: f64) -> Result<f64> {
    if !(q.abs() < 1.0) {
        return Err(Error::Domain(format!("infinite q-product needs |q| < 1, got {q}")));
    }
    let mut acc = 1.0;
    let mut aq = a;
    let mut k = 0usize;
    while aq.abs() >= INFINITE_PRODUCT_CUTOFF {
        acc *= 1.0 - aq;
        aq *= q;
        k += 1;
        if k > 100_000 {
            return Err(Error::Numeric("infinite q-product did not converge".into()));
        }
    }
    Ok(acc)
}

/// Product of several finite q-shifted factorials (a_1, ..., a_r; q)_k.
pub fn q_pochhammer_multi<S: Scalar>(args: &[S], q: &S, k: usize) -> S {
    args.iter().fold(S::one(), |acc, a| acc * q_pochhammer(a, q, k))
}

/// Product of several infinite q-shifted factorials.
pub fn q_pochhammer_inf_multi(args: &[f64], q: f64) -> Result<f64> {
    args.iter().try_fold(1.0, |acc, &a| Ok(acc * q_pochhammer_inf(a, q)?))
}

/// Binomial coefficient, zero outside 0 <= k <= n.
pub fn binomial<S: Scalar>(n: i64, k: i64) -> S {
    if k < 0 || n < 0 || k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc = S::one();
    for j in 0..k {
        acc = acc * S::from_int(n - j) / S::from_int(j + 1);
    }
    acc
}

/// Gaussian binomial coefficient, zero outside 0 <= k <= n.
pub fn q_binomial<S: Scalar>(n: i64, k: i64, q: &S) -> S {
    if k < 0 || n < 0 || k > n {
        return S::zero();
    }
    let (n, k) = (n as usize, k as usize);
    q_pochhammer(q, q, n) / (q_pochhammer(q, q, k) * q_pochhammer(q, q, n - k))
}

/// k!
pub fn factorial<S: Scalar>(k: usize) -> S {
    pochhammer(&S::one(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Rational};

    #[test]
    fn rising_factorials() {
        assert_eq!(pochhammer(&rat(3, 1), 2), rat(12, 1));
        assert_eq!(pochhammer(&rat(1, 1), 4), rat(24, 1));
        assert_eq!(pochhammer(&rat(-2, 1), 3), rat(0, 1));
        assert_eq!(pochhammer(&rat(5, 7), 0), rat(1, 1));
    }

    #[test]
    fn q_factorials() {
        let h = rat(1, 2);
        assert_eq!(q_pochhammer(&h, &h, 2), rat(3, 8));
        let inf = q_pochhammer_inf(0.5, 0.5).unwrap();
        assert!((inf - 0.2887880951).abs() < 1e-9);
        assert!(q_pochhammer_len::<Rational>(&h, &h, QLength::Infinite).is_err());
        let f: f64 = q_pochhammer_len(&0.5, &0.5, QLength::Infinite).unwrap();
        assert!((f - inf).abs() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial::<Rational>(2, 1), rat(2, 1));
        assert_eq!(binomial::<Rational>(2, 3), rat(0, 1));
        assert_eq!(binomial::<Rational>(2, -1), rat(0, 1));
        assert_eq!(q_binomial(2, 1, &rat(1, 2)), rat(3, 2));
        assert_eq!(q_binomial(5, 6, &rat(1, 2)), rat(0, 1));
    }
}
