//! Products of triangular Krawtchouk kernels with alternating signs.

use std::fmt;
use std::str::FromStr;

use crate::chains::TransitionMatrix;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::numerics::pochhammer::binomial;
use crate::numerics::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// p⁽⁺⁾ = 1 - p, p⁽⁻⁾ = p.
    pub fn weight<S: Scalar>(self, p: &S) -> S {
        match self {
            Sign::Plus => S::one() - p.clone(),
            Sign::Minus => p.clone(),
        }
    }
}

/// Signs ε_1, ..., ε_m with parameters p_1, ..., p_m.
#[derive(Clone, Debug, PartialEq)]
pub struct SignPattern<S> {
    signs: Vec<Sign>,
    p: Vec<S>,
}

/// Parses strings such as `+-+` or `+,-,+`.
pub fn parse_signs(s: &str) -> Result<Vec<Sign>> {
    s.chars()
        .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(Error::Pattern(format!("unexpected character {c:?} in sign pattern"))),
        })
        .collect()
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(Error::Pattern(format!("bad sign {s:?}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Sign::Plus { "+" } else { "-" })
    }
}

impl<S: Scalar> SignPattern<S> {
    /// Accepts only alternating patterns of length at least two.
    pub fn new(signs: Vec<Sign>, p: Vec<S>) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::Pattern("a pattern needs at least two signs".into()));
        }
        if signs.len() != p.len() {
            return Err(Error::Pattern(format!("{} signs but {} parameters", signs.len(), p.len())));
        }
        if let Some(i) = signs.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::Pattern(format!(
                "signs {} and {} are equal; normalise the pattern first",
                i + 1,
                i + 2
            )));
        }
        for (j, v) in p.iter().enumerate() {
            if !(*v > S::zero() && *v < S::one()) {
                return Err(Error::Domain(format!("p{} = {v} outside (0, 1)", j + 1)));
            }
        }
        Ok(SignPattern { signs, p })
    }

    /// Merges equal neighbours: π⁻(p)π⁻(p') = π⁻(pp'), π⁺(p)π⁺(p') = π⁺(1-(1-p)(1-p')).
    pub fn normalized(signs: Vec<Sign>, p: Vec<S>) -> Result<Self> {
        if signs.len() != p.len() {
            return Err(Error::Pattern(format!("{} signs but {} parameters", signs.len(), p.len())));
        }
        let mut out_s: Vec<Sign> = Vec::new();
        let mut out_p: Vec<S> = Vec::new();
        for (s, v) in signs.into_iter().zip(p) {
            match out_s.last() {
                Some(&last) if last == s => {
                    let prev = out_p.pop().expect("parallel vectors");
                    let merged = match s {
                        Sign::Minus => prev * v,
                        Sign::Plus => S::one() - (S::one() - prev) * (S::one() - v),
                    };
                    out_p.push(merged);
                }
                _ => {
                    out_s.push(s);
                    out_p.push(v);
                }
            }
        }
        Self::new(out_s, out_p)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn p(&self) -> &[S] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Pattern with flipped signs and p -> 1 - p.
    pub fn reflected(&self) -> Self {
        SignPattern {
            signs: self.signs.iter().map(|s| s.flip()).collect(),
            p: self.p.iter().map(|v| S::one() - v.clone()).collect(),
        }
    }

    /// κ(1) = Π p_j⁽ε_j⁾.
    pub fn kappa_one(&self) -> S {
        self.signs.iter().zip(&self.p).fold(S::one(), |a, (s, v)| a * s.weight(v))
    }

    pub fn kappa(&self, n: usize) -> S {
        self.kappa_one().powi(n as i64)
    }

    /// Stationary p from the alternating-pattern sums.
    pub fn resolved_p(&self) -> S {
        let m = self.len();
        let prefix = |k: usize| {
            self.signs[..k].iter().zip(&self.p[..k]).fold(S::one(), |a, (s, v)| a * s.weight(v))
        };
        let mut sum = S::zero();
        if self.signs[0] == Sign::Plus {
            for k in 0..=(m - 1) / 2 {
                sum = sum + prefix(2 * k) * self.p[2 * k].clone();
            }
        } else {
            for k in 1..=m / 2 {
                sum = sum + prefix(2 * k - 1) * self.p[2 * k - 1].clone();
            }
        }
        sum / (S::one() - self.kappa_one())
    }

    pub fn to_f64(&self) -> SignPattern<f64> {
        SignPattern { signs: self.signs.clone(), p: self.p.iter().map(|v| v.to_f64()).collect() }
    }
}

impl<S: Scalar> fmt::Display for SignPattern<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.signs.iter().map(|s| s.to_string()).collect();
        let p: Vec<String> = self.p.iter().map(|v| v.to_string()).collect();
        write!(f, "({s}) p=({})", p.join(", "))
    }
}

/// π⁽⁺⁾ or π⁽⁻⁾ on {0, ..., N}.
pub fn triangular_kernel<S: Scalar>(sign: Sign, p: &S, n: usize) -> TransitionMatrix<S> {
    let k = |x: usize, size: usize| {
        binomial::<S>(size as i64, x as i64) * p.powi(x as i64) * (S::one() - p.clone()).powi((size - x) as i64)
    };
    TransitionMatrix::from_fn(n + 1, |x, y| match sign {
        Sign::Plus if y <= x => k(x - y, n - y),
        Sign::Minus if x <= y => k(x, y),
        _ => S::zero(),
    })
}

/// A multiple convolution chain.
#[derive(Clone, Debug)]
pub struct MultipleChain<S> {
    pub pattern: SignPattern<S>,
    pub matrix: TransitionMatrix<S>,
    pub lambda: Family<S>,
}

/// K = π⁽ε_1⁾(p_1) ... π⁽ε_m⁾(p_m), with p resolved from the closed sums
/// and cross-checked against K(0,N) p^N = K(N,0) (1-p)^N.
pub fn build_multiple<S: Scalar>(pattern: &SignPattern<S>, n: usize) -> Result<MultipleChain<S>> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mut k = TransitionMatrix::identity(n + 1);
    for (s, p) in pattern.signs.iter().zip(&pattern.p) {
        k = k.mul(&triangular_kernel(*s, p, n));
    }
    let p = pattern.resolved_p();
    let lhs = k.get(0, n).clone() * p.powi(n as i64);
    let rhs = k.get(n, 0).clone() * (S::one() - p.clone()).powi(n as i64);
    let scale = lhs.to_f64().abs().max(rhs.to_f64().abs());
    if !lhs.close(&rhs, 1e-12 * scale.max(1e-300)) {
        return Err(Error::Numeric(format!(
            "resolved p = {p} disagrees with K(0,N)/K(N,0) for {pattern}"
        )));
    }
    let lambda = Family::Krawtchouk { p }.validated()?;
    Ok(MultipleChain { pattern: pattern.clone(), matrix: k, lambda })
}
