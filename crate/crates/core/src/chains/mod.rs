//! Transition matrices built from convolutions of orthogonality measures.

pub mod commuting;
pub mod convolution;
pub mod matrix;
pub mod multiple;
pub mod params;
pub mod registry;
pub mod semi_infinite;

use rayon::prelude::*;

pub use commuting::{commuting_family, deformation_interval};
pub use convolution::{convolve, convolve_dual, ConvolutionType, Factor, FactorTable};
pub use matrix::TransitionMatrix;
pub use multiple::{build_multiple, parse_signs, triangular_kernel, MultipleChain, Sign, SignPattern};
pub use params::Params;
pub use registry::{sample_points, wiring, CaseId, CaseInfo, KappaProduct, ParamDomain, SeriesTemplate, Wiring};
pub use semi_infinite::{build_semi_infinite, SemiChain};

use crate::error::{Error, Result};
use crate::families::{Family, Lattice, MeasureVector};
use crate::numerics::{Scalar, SeriesSpec};

/// A registered case at a parameter point on a finite lattice.
#[derive(Clone, Debug)]
pub struct ChainSpec<S> {
    pub case: CaseId,
    pub params: Params<S>,
    /// stationary measure π(x, N, λ)
    pub lambda: Family<S>,
    pub lattice: Lattice,
    pub wiring: Wiring<S>,
}

impl<S: Scalar> ChainSpec<S> {
    pub fn new(case: CaseId, params: &Params<S>, lattice: Lattice) -> Result<Self> {
        if case.is_semi_infinite() == lattice.is_finite() {
            return Err(Error::Case(format!("{case} does not live on this lattice")));
        }
        let wiring = wiring(case, params)?;
        Ok(ChainSpec {
            case,
            params: params.conform(&case.param_names())?,
            lambda: wiring.stationary.clone(),
            lattice,
            wiring,
        })
    }

    pub fn finite(case: CaseId, params: &Params<S>, n: usize) -> Result<Self> {
        Self::new(case, params, Lattice::Finite(n))
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn measure(&self) -> Result<MeasureVector<S>> {
        self.lambda.measure(&self.lattice)
    }

    pub fn kappa(&self, n: usize) -> Result<S> {
        kappa_from_wiring(&self.wiring, n)
    }

    pub fn kappas(&self) -> Result<Vec<S>> {
        (0..self.lattice.len()).map(|n| self.kappa(n)).collect()
    }

    pub fn matrix(&self) -> Result<TransitionMatrix<S>> {
        build_from_wiring(&self.wiring, self.size())
    }

    pub fn dual_matrix(&self) -> Result<TransitionMatrix<S>> {
        build_dual_from_wiring(&self.wiring, self.size())
    }
}

fn tables<S: Scalar>(w: &Wiring<S>, upper: usize) -> Result<Vec<FactorTable<S>>> {
    w.factors.iter().map(|f| f.tabulate(upper)).collect()
}

fn assemble<S: Scalar>(dim: usize, entry: impl Fn(usize, usize) -> S + Sync) -> Result<TransitionMatrix<S>> {
    let cols: Vec<Vec<S>> = (0..dim).into_par_iter().map(|y| (0..dim).map(|x| entry(x, y)).collect()).collect();
    TransitionMatrix::from_columns(cols)
}

fn build_from_wiring<S: Scalar>(w: &Wiring<S>, n: usize) -> Result<TransitionMatrix<S>> {
    let t = tables(w, n)?;
    assemble(n + 1, |x, y| convolve(w.conv, &t, x, y, n))
}

fn build_dual_from_wiring<S: Scalar>(w: &Wiring<S>, n: usize) -> Result<TransitionMatrix<S>> {
    let t = tables(w, n)?;
    assemble(n + 1, |x, y| convolve_dual(w.conv, &t, x, y, n))
}

fn kappa_from_wiring<S: Scalar>(w: &Wiring<S>, n: usize) -> Result<S> {
    match &w.product {
        Some(p) => Ok(p.at(n)),
        None => w.series.at(n).evaluate(),
    }
}

fn finite_case(case: CaseId) -> Result<()> {
    if case.is_semi_infinite() {
        Err(Error::Case(format!("{case} is semi-infinite")))
    } else {
        Ok(())
    }
}

/// K(x, y) on {0, ..., N} for a finite case.
pub fn build_finite<S: Scalar>(case: CaseId, params: &Params<S>, n: usize) -> Result<TransitionMatrix<S>> {
    finite_case(case)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    build_from_wiring(&wiring(case, params)?, n)
}

/// The dual chain K(N-x, N-y), summed directly in reflected variables.
pub fn build_dual<S: Scalar>(case: CaseId, params: &Params<S>, n: usize) -> Result<TransitionMatrix<S>> {
    finite_case(case)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    build_dual_from_wiring(&wiring(case, params)?, n)
}

/// Stationary measure of the dual chain, π(N-x, N, λ).
pub fn dual_measure<S: Scalar>(case: CaseId, params: &Params<S>, n: usize) -> Result<Vec<S>> {
    finite_case(case)?;
    let mut v = resolve_lambda(case, params)?.measure(&Lattice::Finite(n))?.values;
    v.reverse();
    Ok(v)
}

/// Parameters of the stationary measure.
pub fn resolve_lambda<S: Scalar>(case: CaseId, params: &Params<S>) -> Result<Family<S>> {
    Ok(wiring(case, params)?.stationary)
}

/// κ(n) from the product form when one exists, else from the terminating series.
pub fn kappa_closed<S: Scalar>(case: CaseId, params: &Params<S>, n: usize) -> Result<S> {
    kappa_from_wiring(&wiring(case, params)?, n)
}

/// The terminating series representing κ(n).
pub fn kappa_series<S: Scalar>(case: CaseId, params: &Params<S>, n: usize) -> Result<SeriesSpec<S>> {
    Ok(wiring(case, params)?.series.at(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Rational};

    fn half() -> Params<Rational> {
        Params::new([("a", rat(1, 2)), ("b", rat(1, 2))])
    }

    #[test]
    fn k_i_small() {
        let k = build_finite(CaseId::KI, &half(), 1).unwrap();
        assert_eq!(k.rows(), vec![vec![rat(1, 2), rat(1, 4)], vec![rat(1, 2), rat(3, 4)]]);
        assert_eq!(resolve_lambda(CaseId::KI, &half()).unwrap(), Family::Krawtchouk { p: rat(2, 3) });
        assert_eq!(build_finite(CaseId::KI, &half(), 2).unwrap().det(), rat(1, 64));
        assert_eq!(kappa_closed(CaseId::KI, &half(), 1).unwrap(), rat(1, 4));
        let d = build_dual(CaseId::KI, &half(), 1).unwrap();
        assert_eq!(d.rows(), vec![vec![rat(3, 4), rat(1, 2)], vec![rat(1, 4), rat(1, 2)]]);
    }

    #[test]
    fn resolved_parameters() {
        let one = Params::new([("a", rat(1, 1)), ("b", rat(1, 1)), ("c", rat(1, 1))]);
        assert_eq!(resolve_lambda(CaseId::HI, &one).unwrap(), Family::Hahn { a: rat(2, 1), b: rat(1, 1) });
        let halves = Params::new([("a", rat(1, 2)), ("b", rat(1, 2)), ("c", rat(1, 2))]);
        assert_eq!(resolve_lambda(CaseId::KIV, &halves).unwrap(), Family::Krawtchouk { p: rat(1, 2) });
        let k2 = Params::new([("a", rat(1, 4)), ("b", rat(1, 2))]);
        assert_eq!(kappa_closed(CaseId::KII, &k2, 1).unwrap(), rat(-1, 4));
        let qh = halves.clone().with("q", rat(1, 2));
        assert_eq!(kappa_closed(CaseId::QHI, &qh, 1).unwrap(), rat(2, 9));
        assert_eq!(
            resolve_lambda(CaseId::CConv1, &half()).unwrap(),
            Family::Charlier { a: rat(1, 1) }
        );
        assert_eq!(kappa_closed(CaseId::CConv3, &half(), 1).unwrap(), rat(1, 2));
        let m = Params::new([("a", rat(1, 1)), ("b", rat(1, 1)), ("c", rat(1, 2))]);
        assert_eq!(kappa_closed(CaseId::MI, &m, 1).unwrap(), rat(1, 2));
    }

    #[test]
    fn finite_cases_are_reversible() {
        for case in CaseId::finite() {
            for p in sample_points(case, 3) {
                for n in 1..=4 {
                    let spec = ChainSpec::finite(case, &p, n).unwrap();
                    let k = spec.matrix().unwrap();
                    assert!(k.is_stochastic(0.0), "{case} {p} N={n}");
                    let pi = spec.measure().unwrap().values;
                    assert_eq!(k.balance_violation(&pi, 0.0), None, "{case} {p} N={n}");
                    assert_eq!(spec.dual_matrix().unwrap(), k.reversed());
                }
            }
        }
    }

    #[test]
    fn semi_infinite_rejected_by_finite_builders() {
        assert!(matches!(build_finite(CaseId::CConv1, &half(), 3), Err(Error::Case(_))));
        assert!(matches!(build_dual(CaseId::MI, &half(), 3), Err(Error::Case(_))));
    }
}
