//! Truncated matrices for the Charlier, Meixner and q-Meixner chains.
//!
//! The stationary measure fixes a tail point `x0`. The matrix is built on
//! `0..=2*x0+10` so that rows and columns up to `x0` see every transition
//! carrying more than the tail tolerance; checks are made on that block.

use crate::chains::convolution::{Factor, FactorTable};
use crate::chains::params::Params;
use crate::chains::registry::{wiring, CaseId, Wiring};
use crate::chains::{assemble, convolve, TransitionMatrix};
use crate::error::{Error, Result};
use crate::families::{truncate, Family, Lattice, MAX_TRUNCATION};
use crate::numerics::pochhammer::q_pochhammer_inf;
use crate::numerics::{Rational, Scalar};

/// A semi-infinite chain restricted to a finite window.
#[derive(Clone, Debug)]
pub struct SemiChain {
    pub case: CaseId,
    pub params: Params<Rational>,
    pub wiring: Wiring<Rational>,
    pub stationary: Family<Rational>,
    /// window `0..=x_max`
    pub lattice: Lattice,
    /// tail point of the stationary measure; checks use `x, y <= trusted`
    pub trusted: usize,
    /// last intermediate point of the convolution sums
    pub inner_upper: usize,
    pub matrix: TransitionMatrix<f64>,
    /// π over the window
    pub measure: Vec<f64>,
}

fn kernel_tail(beta: f64, gamma: f64, q: f64, tol: f64) -> Result<usize> {
    let c = q_pochhammer_inf(-gamma, q)? / q_pochhammer_inf(-gamma / beta, q)?;
    let mut prev = f64::INFINITY;
    for i in 0..MAX_TRUNCATION {
        let v = c * Factor::<f64>::kernel_ratio(&beta, &gamma, &q, i, 0);
        if v < tol && v < 0.5 * prev {
            return Ok(i);
        }
        prev = v;
    }
    Err(Error::Truncation("q-Meixner kernel tail does not decay".into()))
}

fn factor_tail(f: &Factor<Rational>, tol: f64) -> Result<usize> {
    match f {
        Factor::Measure(m) if m.is_finite() => Ok(0),
        Factor::Measure(m) => Ok(truncate(m, tol)?.last()),
        Factor::QMeixnerKernel { beta, gamma, q } => {
            kernel_tail(Scalar::to_f64(beta), Scalar::to_f64(gamma), Scalar::to_f64(q), tol)
        }
    }
}

/// Builds a C, M or qM chain with stationary tail below `tail_tol`.
pub fn build_semi_infinite(case: CaseId, params: &Params<Rational>, tail_tol: f64) -> Result<SemiChain> {
    if !case.is_semi_infinite() {
        return Err(Error::Case(format!("{case} is a finite case")));
    }
    let w = wiring(case, params)?;
    let trusted = truncate(&w.stationary, tail_tol)?.last();
    let x_max = 2 * trusted + 10;
    let mut tail = 0;
    for f in &w.factors {
        tail = tail.max(factor_tail(f, tail_tol * 1e-3)?);
    }
    let upper = x_max + tail;
    if upper > MAX_TRUNCATION {
        return Err(Error::Truncation(format!("window {upper} exceeds the cap {MAX_TRUNCATION}")));
    }
    let tables = w
        .factors
        .iter()
        .map(|f| f.map(Scalar::to_f64).tabulate(upper))
        .collect::<Result<Vec<FactorTable<f64>>>>()?;
    let matrix = assemble(x_max + 1, |x, y| convolve(w.conv, &tables, x, y, upper))?;
    let lattice = Lattice::SemiInfinite { x_max, tail_tol };
    let measure = w.stationary.to_f64().measure(&lattice)?.values;
    Ok(SemiChain {
        case,
        params: params.conform(&case.param_names())?,
        stationary: w.stationary.clone(),
        wiring: w,
        lattice,
        trusted,
        inner_upper: upper,
        matrix,
        measure,
    })
}

impl SemiChain {
    pub fn kappa(&self, n: usize) -> Result<Rational> {
        super::kappa_from_wiring(&self.wiring, n)
    }

    /// π(x) P̌_n(x) over the window, formed exactly from π(x)/π(0) and P̌_n(x)
    /// before the single conversion to floating point.
    pub fn weighted_poly(&self, n: usize) -> Result<Vec<f64>> {
        let pi0 = self.stationary.to_f64().weight_zero(0)?;
        (0..self.lattice.len())
            .map(|x| {
                let r = self.stationary.weight_ratio(x, 0) * self.stationary.poly(n, x, 0)?;
                Ok(pi0 * Scalar::to_f64(&r))
            })
            .collect()
    }

    /// max over trusted columns of |1 - Σ_x K(x, y)|.
    pub fn column_deficiency(&self) -> f64 {
        (0..=self.trusted)
            .map(|y| (1.0 - self.matrix.column(y).iter().sum::<f64>()).abs())
            .fold(0.0, f64::max)
    }

    /// max over trusted rows of |Σ_y K(x,y) π(y) P̌_n(y) - κ(n) π(x) P̌_n(x)|.
    pub fn eigen_residual(&self, n: usize) -> Result<f64> {
        let v = self.weighted_poly(n)?;
        let kappa = Scalar::to_f64(&self.kappa(n)?);
        let kv = self.matrix.apply(&v);
        Ok((0..=self.trusted).map(|x| (kv[x] - kappa * v[x]).abs()).fold(0.0, f64::max))
    }

    /// Largest detailed balance violation on the trusted block, relative to the entries.
    pub fn balance_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for y in 0..=self.trusted {
            for x in 0..y {
                let l = self.matrix.get(x, y) * self.measure[y];
                let r = self.matrix.get(y, x) * self.measure[x];
                let scale = l.abs().max(r.abs());
                if scale > 0.0 {
                    worst = worst.max((l - r).abs() / scale);
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::registry::sample_points;
    use crate::numerics::rat;

    #[test]
    fn charlier_type_one() {
        let p = Params::new([("a", rat(1, 2)), ("b", rat(1, 2))]);
        let c = build_semi_infinite(CaseId::CConv1, &p, 1e-14).unwrap();
        assert_eq!(c.stationary, Family::Charlier { a: rat(1, 1) });
        assert!(c.column_deficiency() < 1e-12);
        for n in 0..=10 {
            assert!(c.eigen_residual(n).unwrap() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn all_cases_hold_on_samples() {
        for case in CaseId::semi_infinite() {
            for p in sample_points(case, 2) {
                let c = build_semi_infinite(case, &p, 1e-14).unwrap();
                assert!(c.column_deficiency() < 1e-12, "{case} {p}: {}", c.column_deficiency());
                assert!(c.balance_residual() < 1e-9, "{case} {p}: {}", c.balance_residual());
                for n in 0..=10 {
                    let r = c.eigen_residual(n).unwrap();
                    assert!(r < 1e-10, "{case} {p} n={n}: {r}");
                }
            }
        }
    }
}
