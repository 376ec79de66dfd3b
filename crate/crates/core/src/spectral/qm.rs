//! The second eigensystem of the q-Meixner chains.

use crate::chains::{kappa_closed, CaseId, Params, SemiChain, TransitionMatrix};
use crate::error::{Error, Result};
use crate::families::{Family, Lattice};
use crate::numerics::pochhammer::{q_pochhammer, q_pochhammer_inf_multi};
use crate::numerics::series::qhyper_nonterminating;
use crate::numerics::{Rational, Scalar};

fn f(v: &Rational) -> f64 {
    Scalar::to_f64(v)
}

fn get(params: &Params<Rational>, names: &[&str]) -> Result<Vec<f64>> {
    names.iter().map(|n| params.get(n).map(|v| f(&v))).collect()
}

/// κ⁽⁻⁾(n) from its closed form (qM-i, qM-iii) or from the finite sum of
/// non-terminating 3φ2 series (qM-iv).
pub fn qm_extra_kappa(case: CaseId, params: &Params<Rational>, n: usize) -> Result<f64> {
    if !matches!(case, CaseId::QMI | CaseId::QMIII | CaseId::QMIV) {
        return Err(Error::Case(format!("{case} has no second eigensystem")));
    }
    let params = params.conform(&case.param_names())?;
    crate::chains::wiring(case, &params)?;
    let qp = |a: f64, q: f64| q_pochhammer(&a, &q, n);
    match case {
        CaseId::QMI => {
            let v = get(&params, &["a", "b", "c", "q"])?;
            let (a, b, c, q) = (v[0], v[1], v[2], v[3]);
            let lead = q_pochhammer_inf_multi(&[a, -c], q)? / q_pochhammer_inf_multi(&[a * b, -c / b], q)?;
            Ok(lead * qp(-c / b, q) / qp(-c, q))
        }
        CaseId::QMIII => {
            let v = get(&params, &["a", "b", "c", "q"])?;
            let (a, b, c, q) = (v[0], v[1], v[2], v[3]);
            let lead = q_pochhammer_inf_multi(&[c, -b], q)? / q_pochhammer_inf_multi(&[a * c, -b / a], q)?;
            Ok(lead * qp(-b / a, q) / qp(-b, q))
        }
        CaseId::QMIV => {
            let v = get(&params, &["a1", "b1", "a2", "b2", "q"])?;
            let (a1, b1, a2, b2, q) = (v[0], v[1], v[2], v[3], v[4]);
            let lead = q_pochhammer_inf_multi(&[b1, -b2], q)? / q_pochhammer_inf_multi(&[b1 * a2, -b2 / a2], q)?;
            let qn = q.powi(-(n as i32));
            let mut total = 0.0;
            for k in 0..=n {
                let qk = q.powi(k as i32);
                let num = q_pochhammer(&qn, &q, k) * q_pochhammer(&b1, &q, k) * q_pochhammer(&a2, &q, k);
                let den = q_pochhammer(&-b2, &q, k) * q_pochhammer(&(a1 * b1), &q, k) * q_pochhammer(&q, &q, k);
                let z = (-b2 / a2 * q.powi(n as i32)).powi(k as i32);
                let phi = qhyper_nonterminating(
                    &[a1, a2 * qk, -b2 / a2 * qk],
                    &[-b2 * qk, a1 * b1 * qk],
                    q,
                    b1,
                    1e-17,
                )?;
                total += num / den * z * phi;
            }
            Ok(lead * total)
        }
        _ => unreachable!("checked above"),
    }
}

/// κ⁽⁻⁾(n) / κ(n).
pub fn qm_kappa_ratio(case: CaseId, params: &Params<Rational>, n: usize) -> Result<f64> {
    Ok(qm_extra_kappa(case, params, n)? / f(&kappa_closed(case, params, n)?))
}

/// The qM-iv κ⁽⁻⁾(n) as the double sum over the lattice, before the inner sums are done.
pub fn qm_extra_kappa_double_sum(params: &Params<Rational>, n: usize) -> Result<f64> {
    let params = params.conform(&CaseId::QMIV.param_names())?;
    crate::chains::wiring(CaseId::QMIV, &params)?;
    let g = |k: &str| params.get(k).expect("conformed");
    let (a1, b1, a2, b2, q) = (g("a1"), g("b1"), g("a2"), g("b2"), g("q"));
    let lead = q_pochhammer_inf_multi(&[f(&b1), -f(&b2)], f(&q))?
        / q_pochhammer_inf_multi(&[f(&b1) * f(&a2), -f(&b2) / f(&a2)], f(&q))?;
    let outer = Family::QMeixner { b: f(&a2) / f(&q), c: -f(&b1), q: f(&q) };
    let inner = Family::QHahn { a: -f(&b2) / f(&a2), b: f(&a2), q: f(&q) };
    let start = Family::QHahn { a: f(&a1), b: f(&b1), q: f(&q) };
    let poly = Family::QMeixner {
        b: -b2.clone() / (a2.clone() * q.clone()),
        c: a1.clone() * b1.clone() * a2.clone() / b2.clone(),
        q: q.clone(),
    };
    let polys = (0..400).map(|y| poly.poly(n, y, 0).map(|v| f(&v)));
    let polys: Vec<f64> = polys.collect::<Result<_>>()?;
    let mut total = 0.0;
    for z in 0..polys.len() {
        let w = outer.weight(z, 0)?;
        if w.abs() < 1e-22 && z > 8 {
            return Ok(lead * total);
        }
        let mut s = 0.0;
        for (y, p) in polys.iter().enumerate().take(z + 1) {
            s += inner.weight(y, z)? * start.weight(0, y)? * p;
        }
        total += w * s;
    }
    Err(Error::Truncation("double sum for the second eigenvalue did not settle".into()))
}

fn second_family(chain: &SemiChain) -> Result<Family<Rational>> {
    match &chain.stationary {
        Family::QMeixner { b, c, q } => Ok(Family::QMeixnerSecond { b: b.clone(), c: c.clone(), q: q.clone() }),
        _ => Err(Error::Case(format!("{} has no second eigensystem", chain.case))),
    }
}

/// κ⁽⁻⁾(n) = Σ_y K(0,y) (-1)^y √(π(y)π⁽⁻⁾(y) / (π(0)π⁽⁻⁾(0))) P̌⁽⁻⁾_n(y) over the window.
pub fn qm_extra_kappa_sum(chain: &SemiChain, n: usize) -> Result<f64> {
    let second = second_family(chain)?;
    let mut total = 0.0;
    for y in 0..chain.lattice.len() {
        let k = *chain.matrix.get(0, y);
        if k == 0.0 {
            continue;
        }
        let r = f(&chain.stationary.weight_ratio(y, 0)) * f(&second.weight_ratio(y, 0));
        let sign = if y % 2 == 0 { 1.0 } else { -1.0 };
        total += k * sign * r.sqrt() * f(&second.poly(n, y, 0)?);
    }
    Ok(total)
}

/// Signed orthonormal vectors φ̂⁽⁻⁾_n on `0..=chain.trusted`.
pub fn qm_second_vectors(chain: &SemiChain, n_max: usize) -> Result<Vec<Vec<f64>>> {
    let second = second_family(chain)?;
    let lattice = Lattice::SemiInfinite { x_max: chain.trusted, tail_tol: chain.lattice_tail() };
    (0..=n_max).map(|n| second.orthonormal(n, &lattice)).collect()
}

fn first_vectors(chain: &SemiChain, n_max: usize) -> Result<Vec<Vec<f64>>> {
    let lattice = Lattice::SemiInfinite { x_max: chain.trusted, tail_tol: chain.lattice_tail() };
    (0..=n_max).map(|n| chain.stationary.orthonormal(n, &lattice)).collect()
}

fn outer_sum(vs: &[Vec<f64>], weights: &[f64], x: usize, y: usize) -> f64 {
    vs.iter().zip(weights).map(|(v, w)| w * v[x] * v[y]).sum()
}

/// max over the trusted block of |Σ_n φ̂_n(x)φ̂_n(y) + Σ_n φ̂⁽⁻⁾_n(x)φ̂⁽⁻⁾_n(y) - δ_xy|.
pub fn qm_union_completeness(chain: &SemiChain, n_max: usize) -> Result<f64> {
    let a = first_vectors(chain, n_max)?;
    let b = qm_second_vectors(chain, n_max)?;
    let ones = vec![1.0; n_max + 1];
    let mut worst: f64 = 0.0;
    for x in 0..=chain.trusted {
        for y in 0..=chain.trusted {
            let s = outer_sum(&a, &ones, x, y) + outer_sum(&b, &ones, x, y);
            let d = if x == y { 1.0 } else { 0.0 };
            worst = worst.max((s - d).abs());
        }
    }
    Ok(worst)
}

/// K on the trusted block rebuilt from both eigensystems.
pub fn qm_union_reconstruct(chain: &SemiChain, n_max: usize) -> Result<TransitionMatrix<f64>> {
    let a = first_vectors(chain, n_max)?;
    let b = qm_second_vectors(chain, n_max)?;
    let ka: Vec<f64> = (0..=n_max).map(|n| chain.kappa(n).map(|k| f(&k))).collect::<Result<_>>()?;
    let kb: Vec<f64> = (0..=n_max).map(|n| qm_extra_kappa(chain.case, &chain.params, n)).collect::<Result<_>>()?;
    let sp: Vec<f64> = chain.measure.iter().map(|p| f64::sqrt(*p)).collect();
    Ok(TransitionMatrix::from_fn(chain.trusted + 1, |x, y| {
        (outer_sum(&a, &ka, x, y) + outer_sum(&b, &kb, x, y)) * sp[x] / sp[y]
    }))
}

impl SemiChain {
    fn lattice_tail(&self) -> f64 {
        match self.lattice {
            Lattice::SemiInfinite { tail_tol, .. } => tail_tol,
            Lattice::Finite(_) => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_semi_infinite, sample_points};
    use crate::numerics::rat;

    #[test]
    fn closed_forms_match_eigenvector_sums() {
        for case in [CaseId::QMI, CaseId::QMIII, CaseId::QMIV] {
            for p in sample_points(case, 3) {
                let chain = build_semi_infinite(case, &p, 1e-14).unwrap();
                for n in 0..6 {
                    let closed = qm_extra_kappa(case, &p, n).unwrap();
                    let sum = qm_extra_kappa_sum(&chain, n).unwrap();
                    assert!((closed - sum).abs() < 1e-10, "{case} {p} n={n}: {closed} vs {sum}");
                    let r = qm_kappa_ratio(case, &p, n).unwrap();
                    assert!(closed > 0.0 && r > 0.0 && r < 1.0, "{case} {p} n={n}");
                }
            }
        }
    }

    #[test]
    fn q_meixner_iv_forms_agree() {
        for p in sample_points(CaseId::QMIV, 3) {
            for n in 0..5 {
                let a = qm_extra_kappa(CaseId::QMIV, &p, n).unwrap();
                let b = qm_extra_kappa_double_sum(&p, n).unwrap();
                assert!((a - b).abs() < 1e-9, "{p} n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn first_example_in_unit_interval() {
        let p = Params::new([("a", rat(1, 2)), ("b", rat(1, 2)), ("c", rat(1, 2)), ("q", rat(1, 2))]);
        let k0 = qm_extra_kappa(CaseId::QMI, &p, 0).unwrap();
        assert!(k0 > 0.0 && k0 < 1.0);
        assert!(matches!(qm_extra_kappa(CaseId::MI, &p, 0), Err(Error::Case(_))));
    }

    #[test]
    fn union_of_both_families_is_complete() {
        let p = Params::new([("a", rat(1, 2)), ("b", rat(1, 2)), ("c", rat(1, 2)), ("q", rat(1, 2))]);
        let chain = build_semi_infinite(CaseId::QMI, &p, 1e-14).unwrap();
        let err = qm_union_completeness(&chain, 40).unwrap();
        assert!(err < 1e-8, "{err}");
        let rec = qm_union_reconstruct(&chain, 40).unwrap();
        for x in 0..=chain.trusted.min(6) {
            for y in 0..=chain.trusted.min(6) {
                assert!((rec.get(x, y) - chain.matrix.get(x, y)).abs() < 1e-8, "({x},{y})");
            }
        }
    }
}
