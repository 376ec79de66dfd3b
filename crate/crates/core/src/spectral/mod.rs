//! Symmetrisation, eigenvalues, spectral representation and time evolution.

pub mod qm;
pub mod sampler;

use nalgebra::{DMatrix, SymmetricEigen};

pub use qm::{
    qm_extra_kappa, qm_extra_kappa_double_sum, qm_extra_kappa_sum, qm_kappa_ratio, qm_second_vectors,
    qm_union_completeness, qm_union_reconstruct,
};
pub use sampler::{sample_paths, total_variation, SampleResult};

use crate::chains::TransitionMatrix;
use crate::error::{Error, Result};
use crate::families::{Family, FamilyId, Lattice, PolynomialTable};
use crate::numerics::Scalar;
use crate::tolerance;

/// H = Φ⁻¹ K Φ with Φ = diag(√π).
#[derive(Clone, Debug)]
pub struct SymmetricForm {
    pub h: TransitionMatrix<f64>,
    pub sqrt_pi: Vec<f64>,
}

fn check_balance<S: Scalar>(k: &TransitionMatrix<S>, pi: &[S]) -> Result<()> {
    if pi.len() != k.dim() {
        return Err(Error::Domain(format!("measure has {} points, matrix {}", pi.len(), k.dim())));
    }
    match k.balance_violation(pi, tolerance::RELATIVE) {
        Some((x, y)) => Err(Error::Balance { x, y }),
        None => Ok(()),
    }
}

/// Symmetric form after checking detailed balance (exactly for rationals).
pub fn symmetrize<S: Scalar>(k: &TransitionMatrix<S>, pi: &[S]) -> Result<SymmetricForm> {
    check_balance(k, pi)?;
    let sqrt_pi: Vec<f64> = pi.iter().map(|v| v.to_f64().max(0.0).sqrt()).collect();
    let h = TransitionMatrix::from_fn(k.dim(), |x, y| k.get(x, y).to_f64() * sqrt_pi[y] / sqrt_pi[x]);
    Ok(SymmetricForm { h, sqrt_pi })
}

/// sign(H(x,y)) H(x,y)², which is exact and symmetric for rational input.
pub fn symmetric_squares<S: Scalar>(k: &TransitionMatrix<S>, pi: &[S]) -> Result<TransitionMatrix<S>> {
    check_balance(k, pi)?;
    Ok(TransitionMatrix::from_fn(k.dim(), |x, y| {
        let v = k.get(x, y).clone();
        let sq = v.clone() * v.clone() * pi[y].clone() / pi[x].clone();
        if v < S::zero() {
            -sq
        } else {
            sq
        }
    }))
}

/// κ(n) = Σ_y K(0,y) π(y)/π(0) P̌_n(y).
pub fn kappa_sum<S: Scalar>(k: &TransitionMatrix<S>, family: &Family<S>, size: usize, n: usize) -> Result<S> {
    let mut acc = S::zero();
    for y in 0..k.dim() {
        let kv = k.get(0, y);
        if kv.is_zero() {
            continue;
        }
        acc = acc + kv.clone() * family.weight_ratio(y, size) * family.poly(n, y, size)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    SumFormula,
    Numeric,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::SumFormula => "sum-formula",
            Provenance::Numeric => "numeric",
        }
    }
}

/// Eigenvalues and orthonormal eigenvectors of H, indexed by n.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub kappa: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// d_n², when the eigenvectors come from polynomials
    pub norms: Option<Vec<f64>>,
    pub provenance: Provenance,
    /// true when indices were assigned by sign changes rather than by value
    pub matched_by_sign_changes: bool,
}

fn sign_changes(v: &[f64]) -> usize {
    let floor = tolerance::SIGN_FLOOR * v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for &c in v {
        if c.abs() <= floor {
            continue;
        }
        if last != 0.0 && (c > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = c;
    }
    count
}

/// Full eigendecomposition of H. The n-th eigenvector is the one with n sign
/// changes; on collisions or miscounts the eigenvalues are paired in sorted
/// order with `closed` (when given) or simply sorted in decreasing order.
pub fn eigendecompose(h: &SymmetricForm, closed: Option<&[f64]>) -> Result<Spectrum> {
    let dim = h.h.dim();
    let m = DMatrix::from_fn(dim, dim, |i, j| 0.5 * (h.h.get(i, j) + h.h.get(j, i)));
    let eig = SymmetricEigen::try_new(m, 1e-15, 10_000)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..dim)
        .map(|i| {
            let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            let lead = v.iter().copied().find(|c| c.abs() > tolerance::SIGN_FLOOR).unwrap_or(1.0);
            if lead < 0.0 {
                v.iter_mut().for_each(|c| *c = -*c);
            }
            (eig.eigenvalues[i], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
    let collide = pairs.windows(2).any(|w| (w[0].0 - w[1].0).abs() < tolerance::COLLISION);
    let counts: Vec<usize> = pairs.iter().map(|(_, v)| sign_changes(v)).collect();
    let mut seen = vec![false; dim];
    let permutation = counts.iter().all(|&c| c < dim && !std::mem::replace(&mut seen[c], true));
    let mut kappa = vec![0.0; dim];
    let mut vectors = vec![Vec::new(); dim];
    let by_sign = permutation && !collide;
    if by_sign {
        for ((val, v), c) in pairs.into_iter().zip(counts) {
            kappa[c] = val;
            vectors[c] = v;
        }
    } else if let Some(cl) = closed {
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| cl[j].partial_cmp(&cl[i]).expect("finite eigenvalues"));
        for ((val, v), n) in pairs.into_iter().zip(order) {
            kappa[n] = val;
            vectors[n] = v;
        }
    } else {
        for (i, (val, v)) in pairs.into_iter().enumerate() {
            kappa[i] = val;
            vectors[i] = v;
        }
    }
    Ok(Spectrum { kappa, vectors, norms: None, provenance: Provenance::Numeric, matched_by_sign_changes: by_sign })
}

/// Sorted multisets agree entrywise within `tol`.
pub fn same_multiset(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    a.iter().zip(&b).all(|(x, y)| tolerance::approx_eq(*x, *y, tol))
}

/// Eigensystem given by the stationary family: κ(n), d_n², P̌_n and π.
#[derive(Clone, Debug)]
pub struct PolySpectrum<S> {
    pub family: Family<S>,
    pub lattice: Lattice,
    pub kappa: Vec<S>,
    pub norms: Vec<S>,
    pub polys: PolynomialTable<S>,
    pub measure: Vec<S>,
}

impl<S: Scalar> PolySpectrum<S> {
    /// Uses eigenvalues `kappa[0..]`; their number fixes the polynomial degrees used.
    pub fn new(family: &Family<S>, lattice: Lattice, kappa: Vec<S>) -> Result<Self> {
        if kappa.is_empty() {
            return Err(Error::Domain("empty spectrum".into()));
        }
        let n_max = kappa.len() - 1;
        let size = lattice.size();
        let norms = (0..=n_max).map(|n| family.norm_sq(n, size)).collect::<Result<Vec<_>>>()?;
        let polys = family.poly_table(n_max, &lattice)?;
        let measure = family.measure(&lattice)?.values;
        Ok(PolySpectrum { family: family.clone(), lattice, kappa, norms, polys, measure })
    }

    pub fn to_spectrum(&self) -> Result<Spectrum> {
        let vectors = (0..self.kappa.len())
            .map(|n| self.family.orthonormal(n, &self.lattice))
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum {
            kappa: self.kappa.iter().map(|k| k.to_f64()).collect(),
            vectors,
            norms: Some(self.norms.iter().map(|d| d.to_f64()).collect()),
            provenance: Provenance::ClosedForm,
            matched_by_sign_changes: false,
        })
    }

    fn complete(&self) -> Result<()> {
        if matches!(self.family.id(), FamilyId::QMeixner | FamilyId::QMeixnerSecond) {
            return Err(Error::Completeness(
                "a single q-Meixner family does not span the lattice; the second family is needed".into(),
            ));
        }
        if !self.lattice.is_finite() {
            return Err(Error::Completeness("spectral sums need a finite lattice".into()));
        }
        if self.kappa.len() != self.lattice.len() {
            return Err(Error::Completeness(format!(
                "{} eigenvalues for {} lattice points",
                self.kappa.len(),
                self.lattice.len()
            )));
        }
        Ok(())
    }
}

/// K(x,y) = Σ_n κ(n) d_n² π(x) P̌_n(x) P̌_n(y).
pub fn spectral_reconstruct<S: Scalar>(spec: &PolySpectrum<S>) -> Result<TransitionMatrix<S>> {
    spec.complete()?;
    let dim = spec.lattice.len();
    Ok(TransitionMatrix::from_fn(dim, |x, y| {
        let s = (0..dim).fold(S::zero(), |acc, n| {
            acc + spec.kappa[n].clone()
                * spec.norms[n].clone()
                * spec.polys.get(n, x).clone()
                * spec.polys.get(n, y).clone()
        });
        s * spec.measure[x].clone()
    }))
}

fn validate_distribution<S: Scalar>(p0: &[S], dim: usize) -> Result<()> {
    if p0.len() != dim {
        return Err(Error::Domain(format!("initial distribution has {} entries, expected {dim}", p0.len())));
    }
    if p0.iter().any(|v| *v < S::zero()) {
        return Err(Error::Domain("initial distribution has a negative entry".into()));
    }
    let total = p0.iter().cloned().fold(S::zero(), |a, b| a + b);
    if !total.close(&S::one(), tolerance::RELATIVE) {
        return Err(Error::Domain(format!("initial distribution sums to {total}")));
    }
    Ok(())
}

/// Distribution after `l` steps with the spectral weights that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult<S> {
    pub ell: usize,
    pub distribution: Vec<S>,
    /// w_n = c_n d_n = d_n² Σ_x P̌_n(x) P(x;0)
    pub weights: Vec<S>,
}

impl<S: Scalar> EvolutionResult<S> {
    /// c_n = w_n / d_n.
    pub fn coefficients(&self, norms: &[S]) -> Vec<f64> {
        self.weights.iter().zip(norms).map(|(w, d)| w.to_f64() / d.to_f64().sqrt()).collect()
    }
}

/// K^l P0 by repeated multiplication.
pub fn evolve_direct<S: Scalar>(k: &TransitionMatrix<S>, p0: &[S], l: usize) -> Result<Vec<S>> {
    validate_distribution(p0, k.dim())?;
    let mut p = p0.to_vec();
    for _ in 0..l {
        p = k.apply(&p);
    }
    Ok(p)
}

/// P(x;l) = π(x) Σ_n κ(n)^l w_n P̌_n(x).
pub fn evolve_spectral<S: Scalar>(spec: &PolySpectrum<S>, p0: &[S], l: usize) -> Result<EvolutionResult<S>> {
    spec.complete()?;
    let dim = spec.lattice.len();
    validate_distribution(p0, dim)?;
    let weights: Vec<S> = (0..dim)
        .map(|n| {
            let s = (0..dim).fold(S::zero(), |a, x| a + spec.polys.get(n, x).clone() * p0[x].clone());
            spec.norms[n].clone() * s
        })
        .collect();
    let powers: Vec<S> = spec.kappa.iter().map(|k| k.powi(l as i64)).collect();
    let distribution = (0..dim)
        .map(|x| {
            let s = (0..dim).fold(S::zero(), |a, n| {
                a + powers[n].clone() * weights[n].clone() * spec.polys.get(n, x).clone()
            });
            spec.measure[x].clone() * s
        })
        .collect();
    Ok(EvolutionResult { ell: l, distribution, weights })
}

/// C = max_x Σ_{n≥1} π(x) |w_n P̌_n(x)|, so that |P(x;l) - π(x)| ≤ C max_{n≥1} |κ(n)|^l.
pub fn decay_constant<S: Scalar>(spec: &PolySpectrum<S>, weights: &[S]) -> f64 {
    let dim = spec.lattice.len();
    (0..dim)
        .map(|x| {
            let s: f64 = (1..dim).map(|n| (weights[n].to_f64() * spec.polys.get(n, x).to_f64()).abs()).sum();
            spec.measure[x].to_f64() * s
        })
        .fold(0.0, f64::max)
}

/// max_{n≥1} |κ(n)|.
pub fn second_largest_modulus<S: Scalar>(kappa: &[S]) -> f64 {
    kappa.iter().skip(1).map(|k| k.to_f64().abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_finite, CaseId, ChainSpec, Params};
    use crate::numerics::{rat, Rational};

    fn half() -> Params<Rational> {
        Params::new([("a", rat(1, 2)), ("b", rat(1, 2))])
    }

    #[test]
    fn symmetric_form_of_small_chain() {
        let spec = ChainSpec::finite(CaseId::KI, &half(), 1).unwrap();
        let k = spec.matrix().unwrap();
        let pi = spec.measure().unwrap().values;
        let h = symmetrize(&k, &pi).unwrap();
        let r = 2f64.sqrt() / 4.0;
        let want = [[0.5, r], [r, 0.75]];
        for x in 0..2 {
            for y in 0..2 {
                assert!((h.h.get(x, y) - want[x][y]).abs() < 1e-15);
            }
        }
        let wrong = vec![rat(1, 2), rat(1, 2)];
        assert_eq!(symmetrize(&k, &wrong).unwrap_err(), Error::Balance { x: 0, y: 1 });
        let e = eigendecompose(&h, None).unwrap();
        assert!((e.kappa[0] - 1.0).abs() < 1e-14 && (e.kappa[1] - 0.25).abs() < 1e-14);
        assert!(e.vectors[0].iter().all(|v| *v > 0.0));
    }

    #[test]
    fn kappa_sum_example() {
        let k = build_finite(CaseId::KI, &half(), 4).unwrap();
        let fam = Family::Krawtchouk { p: rat(2, 3) };
        assert_eq!(kappa_sum(&k, &fam, 4, 2).unwrap(), rat(1, 16));
        assert_eq!(kappa_sum(&k, &fam, 4, 0).unwrap(), rat(1, 1));
    }

    #[test]
    fn reconstruction_and_evolution() {
        let spec = ChainSpec::finite(CaseId::KI, &half(), 3).unwrap();
        let k = spec.matrix().unwrap();
        let ps = PolySpectrum::new(&spec.lambda, spec.lattice, spec.kappas().unwrap()).unwrap();
        assert_eq!(spectral_reconstruct(&ps).unwrap(), k);
        let ones = PolySpectrum::new(&spec.lambda, spec.lattice, vec![rat(1, 1); 4]).unwrap();
        assert_eq!(spectral_reconstruct(&ones).unwrap(), TransitionMatrix::identity(4));
        let p0 = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        for l in 0..6 {
            let e = evolve_spectral(&ps, &p0, l).unwrap();
            assert_eq!(e.distribution, evolve_direct(&k, &p0, l).unwrap());
            assert_eq!(e.weights[0], rat(1, 1));
        }
        assert!(evolve_direct(&k, &[rat(1, 2), rat(1, 3), rat(0, 1), rat(0, 1)], 1).is_err());
    }

    #[test]
    fn q_meixner_single_family_is_incomplete() {
        let fam = Family::QMeixner { b: 0.25, c: 0.5, q: 0.5 };
        let ps = PolySpectrum::new(&fam, Lattice::SemiInfinite { x_max: 20, tail_tol: 1e-14 }, vec![1.0, 0.5]).unwrap();
        assert!(matches!(spectral_reconstruct(&ps), Err(Error::Completeness(_))));
    }
}
