//! Verification suites over parameter grids, shared by the command line front end.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bd::{bd_rates, build_k_bd, build_l, eigen_relation_violation, kappa_bd, sign_pattern_violations, tune_weights};
use crate::chains::{
    build_dual, build_multiple, build_semi_infinite, commuting_family, deformation_interval, kappa_closed,
    parse_signs, resolve_lambda, sample_points, CaseId, ChainSpec, Params, SignPattern,
};
use crate::error::{Error, Result};
use crate::families::{Family, Lattice};
use crate::io::Check;
use crate::numerics::{identity_oracle, rat, sample_grid, Rational, Scalar};
use crate::selfsim::verify_all;
use crate::spectral::{eigendecompose, kappa_sum, qm_kappa_ratio, same_multiset, symmetrize};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Chains,
    Identities,
    Bd,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chains" => Ok(Suite::Chains),
            "identities" => Ok(Suite::Identities),
            "bd" => Ok(Suite::Bd),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Chains => "chains",
            Suite::Identities => "identities",
            Suite::Bd => "bd",
            Suite::All => "all",
        })
    }
}

fn failed(name: String, e: Error) -> Check {
    Check::new(name, false, e.to_string())
}

/// κ(n) from the closed recipe and the numeric spectrum of H, with the checks behind them.
#[derive(Clone, Debug)]
pub struct FiniteSpectrum {
    pub kappa: Vec<Rational>,
    pub numeric: Vec<f64>,
    pub checks: Vec<Check>,
}

/// Exact structural checks of one finite chain, plus the float eigenvalue leg.
pub fn finite_spectrum(case: CaseId, params: &Params<Rational>, n: usize) -> Result<FiniteSpectrum> {
    let tag = |s: &str| format!("{case} {params} N={n}: {s}");
    let spec = ChainSpec::finite(case, params, n)?;
    let k = spec.matrix()?;
    let pi = spec.measure()?.values;
    let mut checks = vec![
        Check::new(tag("stochastic"), k.is_nonnegative() && k.is_stochastic(0.0), ""),
        Check::new(
            tag("detailed balance"),
            k.balance_violation(&pi, 0.0).is_none(),
            k.balance_violation(&pi, 0.0).map(|(x, y)| format!("at ({x}, {y})")).unwrap_or_default(),
        ),
    ];
    let kappa = spec.kappas()?;
    let sums: Vec<Rational> = (0..=n).map(|j| kappa_sum(&k, &spec.lambda, n, j)).collect::<Result<_>>()?;
    checks.push(Check::new(tag("kappa closed form = sum formula"), sums == kappa, ""));
    let closed: Vec<f64> = kappa.iter().map(Scalar::to_f64).collect();
    let h = symmetrize(&k, &pi)?;
    let numeric = eigendecompose(&h, Some(&closed))?.kappa;
    checks.push(Check::new(
        tag("kappa matches eigensolver"),
        same_multiset(&closed, &numeric, tolerance::EIGENVALUE),
        "",
    ));
    checks.push(Check::new(tag("dual is the reflected chain"), build_dual(case, params, n)? == k.reversed(), ""));
    Ok(FiniteSpectrum { kappa, numeric, checks })
}

pub fn semi_infinite_checks(case: CaseId, params: &Params<Rational>) -> Vec<Check> {
    let tag = |s: &str| format!("{case} {params}: {s}");
    let chain = match build_semi_infinite(case, params, tolerance::TAIL) {
        Ok(c) => c,
        Err(e) => return vec![failed(tag("build"), e)],
    };
    let mut out = vec![
        Check::new(
            tag("column deficiency"),
            chain.column_deficiency() < tolerance::COLUMN_DEFICIENCY,
            format!("{:e}", chain.column_deficiency()),
        ),
        Check::new(tag("detailed balance"), chain.balance_residual() < 1e-9, format!("{:e}", chain.balance_residual())),
    ];
    let worst = (0..=10).map(|n| chain.eigen_residual(n)).try_fold(0.0f64, |m, r| r.map(|r| m.max(r)));
    out.push(match worst {
        Ok(w) => Check::new(tag("eigen relation n <= 10"), w < tolerance::SEMI_RESIDUAL, format!("{w:e}")),
        Err(e) => failed(tag("eigen relation n <= 10"), e),
    });
    if matches!(case, CaseId::QMI | CaseId::QMIII | CaseId::QMIV) {
        let ratios: Result<Vec<f64>> = (1..=8).map(|n| qm_kappa_ratio(case, params, n)).collect();
        out.push(match ratios {
            Ok(r) => Check::new(tag("second family ratio in (0, 1)"), r.iter().all(|v| *v > 0.0 && *v < 1.0), ""),
            Err(e) => failed(tag("second family ratio"), e),
        });
    }
    out
}

fn multiple_checks(grid: usize) -> Vec<Check> {
    let ps = [rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(3, 5)];
    let mut out = Vec::new();
    for signs in ["+-", "-+", "+-+", "-+-", "+-+-", "-+-+"] {
        for g in 0..grid.max(1) {
            let s = parse_signs(signs).expect("static pattern");
            let p: Vec<Rational> = (0..s.len()).map(|j| ps[(g + 2 * j) % ps.len()].clone()).collect();
            let pat = match SignPattern::new(s, p) {
                Ok(p) => p,
                Err(e) => {
                    out.push(failed(format!("{signs}: pattern"), e));
                    continue;
                }
            };
            for n in 1..=5 {
                let tag = format!("pattern {pat} N={n}");
                match multiple_chain_check(&pat, n) {
                    Ok(ok) => out.push(Check::new(tag, ok, "")),
                    Err(e) => out.push(failed(tag, e)),
                }
            }
        }
    }
    out
}

pub fn multiple_chain_check(pat: &SignPattern<Rational>, n: usize) -> Result<bool> {
    let c = build_multiple(pat, n)?;
    let pi = c.lambda.measure(&Lattice::Finite(n))?.values;
    let exact = c.matrix.is_stochastic(0.0)
        && c.matrix.balance_violation(&pi, 0.0).is_none()
        && build_multiple(&pat.reflected(), n)?.matrix.reversed() == c.matrix;
    let closed: Vec<f64> = (0..=n).map(|j| pat.kappa(j).to_f64()).collect();
    let numeric = eigendecompose(&symmetrize(&c.matrix, &pi)?, None)?.kappa;
    Ok(exact && same_multiset(&closed, &numeric, tolerance::EIGENVALUE))
}

fn commuting_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for case in [CaseId::KI, CaseId::HI, CaseId::QHI, CaseId::CConv1, CaseId::QMI] {
        for p in sample_points(case, 2) {
            let tag = format!("{case} {p}: commuting deformation");
            match commuting_one(case, &p) {
                Ok((ok, detail)) => out.push(Check::new(tag, ok, detail)),
                Err(e) => out.push(failed(tag, e)),
            }
        }
    }
    out
}

/// A point strictly inside the admissible t range, away from the identity point.
pub fn interior_t(case: CaseId, params: &Params<Rational>) -> Result<Rational> {
    let (lo, hi, _) = deformation_interval(case, params)?;
    let identity = if case == CaseId::HI { rat(0, 1) } else { rat(1, 1) };
    let t = lo.clone() + (hi.clone() - lo.clone()) * rat(1, 3);
    Ok(if t == identity { lo + (hi - t) * rat(1, 2) } else { t })
}

fn commuting_one(case: CaseId, p: &Params<Rational>) -> Result<(bool, String)> {
    let t = interior_t(case, p)?;
    let d = commuting_family(case, p, &t)?;
    let same_lambda = resolve_lambda(case, &d)? == resolve_lambda(case, p)?;
    if case.is_semi_infinite() {
        let a = build_semi_infinite(case, p, tolerance::TAIL)?;
        let b = build_semi_infinite(case, &d, tolerance::TAIL)?;
        let m = a.trusted.min(b.trusted).min(a.matrix.dim().min(b.matrix.dim()) - 1);
        let dim = a.matrix.dim().min(b.matrix.dim());
        let mut worst = 0.0f64;
        for x in 0..=m {
            for y in 0..=m {
                let ab: f64 = (0..dim).map(|z| a.matrix.get(x, z) * b.matrix.get(z, y)).sum();
                let ba: f64 = (0..dim).map(|z| b.matrix.get(x, z) * a.matrix.get(z, y)).sum();
                worst = worst.max((ab - ba).abs());
            }
        }
        Ok((same_lambda && worst < 1e-10, format!("t={t} commutator {worst:e}")))
    } else {
        let mut ok = same_lambda;
        for n in 1..=6 {
            let k = crate::chains::build_finite(case, p, n)?;
            let kt = crate::chains::build_finite(case, &d, n)?;
            ok &= k.commutator(&kt).is_zero();
        }
        Ok((ok, format!("t={t}")))
    }
}

fn chains_suite(grid: usize) -> Vec<Check> {
    let jobs: Vec<(CaseId, Params<Rational>, usize)> = CaseId::finite()
        .flat_map(|c| sample_points(c, grid).into_iter().flat_map(move |p| (1..=6).map(move |n| (c, p.clone(), n))))
        .collect();
    let mut out: Vec<Check> = jobs
        .par_iter()
        .map(|(c, p, n)| match finite_spectrum(*c, p, *n) {
            Ok(s) => s.checks,
            Err(e) => vec![failed(format!("{c} {p} N={n}"), e)],
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    for case in CaseId::finite() {
        for p in sample_points(case, grid) {
            let ok = (0..=6).all(|j| {
                let a = kappa_closed(case, &p, j);
                let b = ChainSpec::finite(case, &p, 7).and_then(|s| kappa_sum(&s.matrix()?, &s.lambda, 7, j));
                let c = ChainSpec::finite(case, &p, 8).and_then(|s| kappa_sum(&s.matrix()?, &s.lambda, 8, j));
                matches!((a, b, c), (Ok(a), Ok(b), Ok(c)) if a == b && b == c)
            });
            out.push(Check::new(format!("{case} {p}: kappa independent of N"), ok, ""));
        }
    }
    let semi: Vec<(CaseId, Params<Rational>)> =
        CaseId::semi_infinite().flat_map(|c| sample_points(c, grid.min(2)).into_iter().map(move |p| (c, p))).collect();
    out.extend(semi.par_iter().map(|(c, p)| semi_infinite_checks(*c, p)).collect::<Vec<_>>().into_iter().flatten());
    out.extend(multiple_checks(grid.min(3)));
    out.extend(commuting_checks());
    out
}

fn identities_suite(grid: usize) -> Vec<Check> {
    let mut out: Vec<Check> = sample_grid(grid)
        .iter()
        .map(|id| match identity_oracle(id, 12) {
            Ok(r) => Check::new(format!("{} {id:?}", r.name), r.holds(0.0), ""),
            Err(e) => failed(format!("{id:?}"), e),
        })
        .collect();
    out.extend(verify_all(grid, 10).into_iter().map(|r| {
        let name = format!("{}{} {} N<={}", r.id, if r.swapped { " (exchanged)" } else { "" }, r.params, r.n_max);
        Check::new(name, r.passed(), format!("{:?}", r.verdict))
    }));
    out
}

/// Rational grid for the birth and death families.
pub fn bd_families(grid: usize) -> Vec<Family<Rational>> {
    let unit = [rat(1, 3), rat(1, 2), rat(3, 4), rat(2, 5), rat(5, 7)];
    let pos = [rat(1, 1), rat(1, 2), rat(5, 2), rat(2, 3), rat(4, 1)];
    (0..grid.max(1))
        .flat_map(|i| {
            [
                Family::Krawtchouk { p: unit[i % 5].clone() },
                Family::Hahn { a: pos[i % 5].clone(), b: pos[(i + 2) % 5].clone() },
            ]
        })
        .collect()
}

/// Rates, tuned weights and the banded chain for one family, m and N.
pub fn bd_check(fam: &Family<Rational>, m: usize, n: usize) -> Result<bool> {
    let rates = bd_rates(fam, n)?;
    let l = build_l(&rates);
    let w = tune_weights(&l, m)?;
    let k = build_k_bd(&l, &w)?;
    let pi = fam.measure(&Lattice::Finite(n))?.values;
    let mut ok = sign_pattern_violations(&l, m).is_empty()
        && k.is_nonnegative()
        && k.is_stochastic(0.0)
        && k.is_banded(m)
        && k.balance_violation(&pi, 0.0).is_none();
    for j in 0..=n {
        ok &= eigen_relation_violation(&k, &rates, j, &kappa_bd(&w, &rates.eigen[j]))?.is_none();
    }
    Ok(ok)
}

fn bd_suite(grid: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for fam in bd_families(grid) {
        for m in 1..=3 {
            for n in m..=8 {
                let tag = format!("{fam:?} m={m} N={n}");
                out.push(match bd_check(&fam, m, n) {
                    Ok(ok) => Check::new(tag, ok, ""),
                    Err(e) => failed(tag, e),
                });
            }
        }
    }
    out
}

pub fn run_suite(suite: Suite, grid: usize) -> Vec<Check> {
    match suite {
        Suite::Chains => chains_suite(grid),
        Suite::Identities => identities_suite(grid),
        Suite::Bd => bd_suite(grid),
        Suite::All => {
            let mut v = chains_suite(grid);
            v.extend(identities_suite(grid));
            v.extend(bd_suite(grid));
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_i_spectrum() {
        let p = Params::new([("a", rat(1, 2)), ("b", rat(1, 2))]);
        let s = finite_spectrum(CaseId::KI, &p, 1).unwrap();
        assert_eq!(s.kappa, vec![rat(1, 1), rat(1, 4)]);
        assert!(s.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Identities, Suite::Bd] {
            for c in run_suite(suite, 1) {
                assert!(c.passed, "{} {}", c.name, c.detail);
            }
        }
        for c in commuting_checks() {
            assert!(c.passed, "{} {}", c.name, c.detail);
        }
    }
}
