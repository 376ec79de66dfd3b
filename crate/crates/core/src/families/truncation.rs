use crate::error::{domain, Error, Result};
use crate::families::{Family, Lattice, MAX_TRUNCATION};
use crate::numerics::Scalar;

/// Smallest `x_max` with Σ_{x > x_max} π(x) < `tail_tol`.
pub fn truncate<S: Scalar>(family: &Family<S>, tail_tol: f64) -> Result<Lattice> {
    if family.is_finite() {
        return domain("truncation applies to semi-infinite families only");
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return domain(format!("tail tolerance must lie in (0, 1), got {tail_tol}"));
    }
    let f = family.to_f64();
    let terms = weights_until_negligible(&f, tail_tol)?;
    // tails[x] = Σ_{y > x} π(y), summed from the far end
    let mut tail = 0.0;
    let mut x_max = terms.len() - 1;
    for x in (0..terms.len()).rev() {
        if tail >= tail_tol {
            break;
        }
        x_max = x;
        tail += terms[x];
    }
    if x_max > MAX_TRUNCATION {
        return Err(Error::Truncation(format!(
            "x_max = {x_max} exceeds the cap {MAX_TRUNCATION}"
        )));
    }
    Ok(Lattice::SemiInfinite { x_max, tail_tol })
}

/// Extends [`truncate`] until Σ_{x > x_max} π(x)P_n(x)²d_n² < `tail_tol` for every n ≤ `n_max`.
/// The mass cutoff alone is too short once P_n grows along the lattice.
pub fn truncate_for_degree<S: Scalar>(family: &Family<S>, n_max: usize, tail_tol: f64) -> Result<Lattice> {
    let base = truncate(family, tail_tol)?.last();
    let f = family.to_f64();
    let d: Vec<f64> = (0..=n_max).map(|n| f.norm_sq(n, 0)).collect::<Result<_>>()?;
    let term = |x: usize, w: f64| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (n, dn) in d.iter().enumerate() {
            let p = f.poly(n, x, 0)?;
            worst = worst.max(dn * w * p * p);
        }
        Ok(worst)
    };
    let mut w = f.weight_zero(0)?;
    for x in 0..base {
        w *= f.weight_step(x, 0);
    }
    let mut prev = term(base, w)?;
    let mut x = base;
    while x < MAX_TRUNCATION {
        w *= f.weight_step(x, 0);
        let cur = term(x + 1, w)?;
        let r = if prev > 0.0 { cur / prev } else { 0.0 };
        if r < 1.0 && cur < tail_tol * 1e-3 && cur * r / (1.0 - r) < tail_tol * 1e-3 {
            return Ok(Lattice::SemiInfinite { x_max: x, tail_tol });
        }
        prev = cur;
        x += 1;
    }
    Err(Error::Truncation(format!("degree-{n_max} tail of {} exceeds the cap {MAX_TRUNCATION}", f.id())))
}

/// Asymptotic value of π(x+1)/π(x).
fn limiting_ratio(f: &Family<f64>) -> f64 {
    match f {
        Family::Meixner { b, .. } => *b,
        Family::LittleQJacobi { a, .. } => *a,
        _ => 0.0,
    }
}

/// π(0), π(1), ... until the remaining tail is provably far below `tail_tol`.
pub(crate) fn weights_until_negligible(f: &Family<f64>, tail_tol: f64) -> Result<Vec<f64>> {
    let limit = limiting_ratio(f);
    let mut cur = f.weight_zero(0)?;
    let mut out = vec![cur];
    let cap = 2 * MAX_TRUNCATION;
    for x in 0..cap {
        let r = f.weight_step(x, 0);
        cur *= r;
        out.push(cur);
        let bound_ratio = r.max(limit);
        if bound_ratio < 1.0 {
            let bound = cur * bound_ratio / (1.0 - bound_ratio);
            if cur < tail_tol * 1e-3 && bound < tail_tol * 1e-3 {
                return Ok(out);
            }
        }
        if cur == 0.0 {
            return Ok(out);
        }
    }
    Err(Error::Truncation(format!("tail of {} not below {tail_tol} within {cap} points", f.id())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charlier_tail() {
        let f = Family::Charlier { a: 1.0 };
        let l = truncate(&f, 1e-14).unwrap();
        let x_max = l.last();
        let tail: f64 = (x_max + 1..200).map(|x| f.weight(x, 0).unwrap()).sum();
        assert!(tail < 1e-14);
        let tail_before: f64 = (x_max..200).map(|x| f.weight(x, 0).unwrap()).sum();
        assert!(tail_before >= 1e-14);
    }

    #[test]
    fn degree_cutoff_covers_polynomial_growth() {
        let f = Family::QMeixner { b: 1.5, c: 0.5, q: 1.0 / 3.0 };
        let base = truncate(&f, 1e-14).unwrap().last();
        let wide = truncate_for_degree(&f, 6, 1e-14).unwrap().last();
        assert!(wide > base);
        let d = f.norm_sq(6, 0).unwrap();
        let tail: f64 = (wide + 1..wide + 40).map(|x| d * f.weight(x, 0).unwrap() * f.poly(6, x, 0).unwrap().powi(2)).sum();
        assert!(tail < 1e-14, "{tail}");
    }

    #[test]
    fn slow_meixner_hits_cap() {
        let f = Family::Meixner { a: 1.0, b: 0.9999 };
        assert!(matches!(truncate(&f, 1e-14), Err(Error::Truncation(_))));
    }
}
