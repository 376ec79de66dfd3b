//! Convolution sums of measures, tabulated once per factor.

use crate::error::Result;
use crate::families::Family;
use crate::numerics::pochhammer::{q_pochhammer, q_pochhammer_inf};
use crate::numerics::Scalar;

/// Shape of the convolution sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvolutionType {
    /// Σ_{z ≤ min(x,y)} π(x-z, N-z, λ2) π(z, y, λ1)
    I,
    /// Σ_{x+y-N ≤ z ≤ min(x,y)} π(x-z, N-y, λ2) π(z, y, λ1)
    II,
    /// Σ_{z ≥ max(x,y)} π(x, z, λ2) π(z-y, N-y, λ1)
    III,
    /// Σ_{z2 ≤ min(x,y)} π(z2, y, λ1) Σ_{z1 ≥ max(x,y)} π(x-z2, z1-z2, λ3) π(z1-y, N-y, λ2)
    IV,
    /// Σ_{z2 ≤ min(x,y)} π(z2, y, λ1) Σ_{z1 ≥ x+y-z2} π(x-z2, z1-y, λ3) π(z1-y, N-y, λ2)
    V,
}

/// One ingredient of a convolution.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor<S> {
    Measure(Family<S>),
    /// π'(i, j) for i ≥ j, a stochastic kernel in `i`:
    /// (β;q)_{i-j} (γ/β)^{i-j} q^{C(i,2)-C(j,2)} / (q;q)_{i-j}
    ///   · (-γ/β;q)_j (-γ;q)_∞ / ((-γ;q)_i (-γ/β;q)_∞)
    QMeixnerKernel { beta: S, gamma: S, q: S },
}

impl<S: Scalar> Factor<S> {
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Factor<T> {
        match self {
            Factor::Measure(m) => Factor::Measure(m.map(f)),
            Factor::QMeixnerKernel { beta, gamma, q } => {
                Factor::QMeixnerKernel { beta: f(beta), gamma: f(gamma), q: f(q) }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Factor::Measure(m) => m.validate(),
            Factor::QMeixnerKernel { beta, gamma, q } => {
                let ok = *beta > S::zero()
                    && *beta < S::one()
                    && *gamma > S::zero()
                    && *q > S::zero()
                    && *q < S::one();
                if ok {
                    Ok(())
                } else {
                    crate::error::domain("kernel needs 0 < beta < 1, gamma > 0 and 0 < q < 1")
                }
            }
        }
    }

    /// Kernel value without the constant (-γ;q)_∞ / (-γ/β;q)_∞.
    pub fn kernel_ratio(beta: &S, gamma: &S, q: &S, i: usize, j: usize) -> S {
        if i < j {
            return S::zero();
        }
        let d = i - j;
        let gb = gamma.clone() / beta.clone();
        let (ii, jj) = (i as i64, j as i64);
        q_pochhammer(beta, q, d) * gb.powi(d as i64) * q.powi(ii * (ii - 1) / 2 - jj * (jj - 1) / 2)
            / q_pochhammer(q, q, d)
            * q_pochhammer(&-gb, q, j)
            / q_pochhammer(&-gamma.clone(), q, i)
    }

    pub fn tabulate(&self, upper: usize) -> Result<FactorTable<S>> {
        match self {
            Factor::Measure(m) if m.is_finite() => {
                let mut rows = Vec::with_capacity(upper + 1);
                for size in 0..=upper {
                    let mut row = Vec::with_capacity(size + 1);
                    let mut cur = m.weight_zero(size)?;
                    row.push(cur.clone());
                    for x in 0..size {
                        cur = cur * m.weight_step(x, size);
                        row.push(cur.clone());
                    }
                    rows.push(row);
                }
                Ok(FactorTable::Finite(rows))
            }
            Factor::Measure(m) => {
                let mut vals = Vec::with_capacity(upper + 1);
                let mut cur = m.weight_zero(0)?;
                vals.push(cur.clone());
                for x in 0..upper {
                    cur = cur * m.weight_step(x, 0);
                    vals.push(cur.clone());
                }
                Ok(FactorTable::Semi(vals))
            }
            Factor::QMeixnerKernel { beta, gamma, q } => {
                let c = kernel_constant(beta, gamma, q)?;
                let rows = (0..=upper)
                    .map(|i| (0..=i).map(|j| c.clone() * Self::kernel_ratio(beta, gamma, q, i, j)).collect())
                    .collect();
                Ok(FactorTable::Kernel(rows))
            }
        }
    }
}

fn kernel_constant<S: Scalar>(beta: &S, gamma: &S, q: &S) -> Result<S> {
    let (b, g, q) = (beta.to_f64(), gamma.to_f64(), q.to_f64());
    if S::EXACT {
        return Err(crate::error::Error::Transcendental("q-Meixner kernel constant".into()));
    }
    S::from_float(q_pochhammer_inf(-g, q)? / q_pochhammer_inf(-g / b, q)?)
}

/// Precomputed factor values.
#[derive(Clone, Debug)]
pub enum FactorTable<S> {
    /// `[size][point]`
    Finite(Vec<Vec<S>>),
    Semi(Vec<S>),
    /// `[i][j]`, j ≤ i
    Kernel(Vec<Vec<S>>),
}

impl<S: Scalar> FactorTable<S> {
    /// Measure value at (point, size); kernels use the raw index pair instead.
    #[inline]
    pub fn get(&self, point: i64, size: i64, raw: (usize, usize)) -> S {
        match self {
            FactorTable::Finite(rows) => {
                if point < 0 || size < 0 || point > size || size as usize >= rows.len() {
                    S::zero()
                } else {
                    rows[size as usize][point as usize].clone()
                }
            }
            FactorTable::Semi(v) => {
                if point < 0 || point as usize >= v.len() {
                    S::zero()
                } else {
                    v[point as usize].clone()
                }
            }
            FactorTable::Kernel(rows) => {
                let (i, j) = raw;
                if j > i || i >= rows.len() {
                    S::zero()
                } else {
                    rows[i][j].clone()
                }
            }
        }
    }
}

/// K(x, y) for the convolution type, summing intermediate points up to `upper`.
pub fn convolve<S: Scalar>(conv: ConvolutionType, t: &[FactorTable<S>], x: usize, y: usize, upper: usize) -> S {
    let (xi, yi, u) = (x as i64, y as i64, upper as i64);
    let mut acc = S::zero();
    match conv {
        ConvolutionType::I => {
            for z in 0..=x.min(y) {
                let zi = z as i64;
                let a = t[1].get(xi - zi, u - zi, (x, z));
                if a.is_zero() {
                    continue;
                }
                acc = acc + a * t[0].get(zi, yi, (z, y));
            }
        }
        ConvolutionType::II => {
            let lo = (xi + yi - u).max(0) as usize;
            for z in lo..=x.min(y) {
                let zi = z as i64;
                acc = acc + t[1].get(xi - zi, u - yi, (x, z)) * t[0].get(zi, yi, (z, y));
            }
        }
        ConvolutionType::III => {
            for z in x.max(y)..=upper {
                let zi = z as i64;
                let a = t[1].get(xi, zi, (x, z));
                if a.is_zero() {
                    continue;
                }
                acc = acc + a * t[0].get(zi - yi, u - yi, (z, y));
            }
        }
        ConvolutionType::IV => {
            for z2 in 0..=x.min(y) {
                let z2i = z2 as i64;
                let outer = t[0].get(z2i, yi, (z2, y));
                if outer.is_zero() {
                    continue;
                }
                let mut inner = S::zero();
                for z1 in x.max(y)..=upper {
                    let z1i = z1 as i64;
                    let c = t[2].get(xi - z2i, z1i - z2i, (x, z1));
                    if c.is_zero() {
                        continue;
                    }
                    inner = inner + c * t[1].get(z1i - yi, u - yi, (z1, y));
                }
                acc = acc + outer * inner;
            }
        }
        ConvolutionType::V => {
            for z2 in 0..=x.min(y) {
                let z2i = z2 as i64;
                let outer = t[0].get(z2i, yi, (z2, y));
                if outer.is_zero() {
                    continue;
                }
                let mut inner = S::zero();
                for z1 in (x + y - z2)..=upper {
                    let z1i = z1 as i64;
                    let c = t[2].get(xi - z2i, z1i - yi, (x, z1));
                    if c.is_zero() {
                        continue;
                    }
                    inner = inner + c * t[1].get(z1i - yi, u - yi, (z1, y));
                }
                acc = acc + outer * inner;
            }
        }
    }
    acc
}

/// The dual kernel K(N-x, N-y) summed directly in reflected variables.
pub fn convolve_dual<S: Scalar>(conv: ConvolutionType, t: &[FactorTable<S>], x: usize, y: usize, n: usize) -> S {
    let (xi, yi, ni) = (x as i64, y as i64, n as i64);
    let none = (0, 0);
    let mut acc = S::zero();
    match conv {
        ConvolutionType::I => {
            for z in x.max(y)..=n {
                let zi = z as i64;
                acc = acc + t[1].get(zi - xi, zi, none) * t[0].get(ni - zi, ni - yi, none);
            }
        }
        ConvolutionType::II => {
            for z in x.max(y)..=(x + y).min(n) {
                let zi = z as i64;
                acc = acc + t[1].get(zi - xi, yi, none) * t[0].get(ni - zi, ni - yi, none);
            }
        }
        ConvolutionType::III => {
            for z in 0..=x.min(y) {
                let zi = z as i64;
                acc = acc + t[1].get(ni - xi, ni - zi, none) * t[0].get(yi - zi, yi, none);
            }
        }
        ConvolutionType::IV => {
            for z2 in x.max(y)..=n {
                let z2i = z2 as i64;
                let outer = t[0].get(ni - z2i, ni - yi, none);
                let mut inner = S::zero();
                for z1 in 0..=x.min(y) {
                    let z1i = z1 as i64;
                    inner = inner + t[2].get(z2i - xi, z2i - z1i, none) * t[1].get(yi - z1i, yi, none);
                }
                acc = acc + outer * inner;
            }
        }
        ConvolutionType::V => {
            for z2 in x.max(y)..=n {
                let z2i = z2 as i64;
                if xi + yi - z2i < 0 {
                    continue;
                }
                let outer = t[0].get(ni - z2i, ni - yi, none);
                let mut inner = S::zero();
                for z1 in 0..=(x + y - z2) {
                    let z1i = z1 as i64;
                    inner = inner + t[2].get(z2i - xi, yi - z1i, none) * t[1].get(yi - z1i, yi, none);
                }
                acc = acc + outer * inner;
            }
        }
    }
    acc
}
