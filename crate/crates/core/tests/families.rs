use convchain::families::{eta, truncate_for_degree, Family, Lattice, DEFAULT_TAIL_TOL};
use convchain::numerics::{pochhammer, rat, Rational, Scalar};

fn finite_grid() -> Vec<Family<Rational>> {
    let unit = [rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 5), rat(4, 7)];
    let pos = [rat(1, 1), rat(1, 2), rat(5, 2), rat(2, 3), rat(3, 1)];
    let qs = [rat(1, 2), rat(1, 3), rat(2, 3)];
    let mut out = Vec::new();
    for i in 0..5 {
        out.push(Family::Krawtchouk { p: unit[i].clone() });
        out.push(Family::Hahn { a: pos[i].clone(), b: pos[(i + 3) % 5].clone() });
        out.push(Family::QHahn { a: unit[i].clone(), b: unit[(i + 2) % 5].clone(), q: qs[i % 3].clone() });
    }
    out
}

#[test]
fn finite_measures_sum_to_one() {
    for f in finite_grid() {
        for n in 0..=12 {
            assert_eq!(f.measure(&Lattice::Finite(n)).unwrap().total(), rat(1, 1), "{f:?} N={n}");
        }
    }
}

#[test]
fn finite_orthogonality_is_exact() {
    for f in finite_grid() {
        for n in 1..=8 {
            let lat = Lattice::Finite(n);
            let pi = f.measure(&lat).unwrap().values;
            let t = f.poly_table(n, &lat).unwrap();
            for a in 0..=n {
                for b in 0..=n {
                    let s = (0..=n).fold(rat(0, 1), |acc, x| acc + pi[x].clone() * t.get(a, x).clone() * t.get(b, x).clone());
                    let want = if a == b { rat(1, 1) / f.norm_sq(a, n).unwrap() } else { rat(0, 1) };
                    assert_eq!(s, want, "{f:?} N={n} m={a} n={b}");
                }
            }
        }
    }
}

#[test]
fn self_duality() {
    let fams = [
        (Family::Krawtchouk { p: rat(2, 5) }, 10),
        (Family::Charlier { a: rat(3, 2) }, 0),
        (Family::Meixner { a: rat(5, 3), b: rat(1, 4) }, 0),
    ];
    for (f, size) in fams {
        for n in 0..=10 {
            for x in 0..=10 {
                assert_eq!(f.poly(n, x, size).unwrap(), f.poly(x, n, size).unwrap(), "{f:?} n={n} x={x}");
            }
        }
    }
}

#[test]
fn reflection_identities() {
    let (a, b) = (rat(2, 3), rat(5, 4));
    for n in 1..=8 {
        for x in 0..=n {
            let p = rat(2, 7);
            let k = Family::Krawtchouk { p: p.clone() };
            let kr = Family::Krawtchouk { p: rat(1, 1) - p.clone() };
            assert_eq!(k.weight(n - x, n).unwrap(), kr.weight(x, n).unwrap());
            let h = Family::Hahn { a: a.clone(), b: b.clone() };
            let hr = Family::Hahn { a: b.clone(), b: a.clone() };
            assert_eq!(h.weight(n - x, n).unwrap(), hr.weight(x, n).unwrap());
            let (qa, qb, q) = (rat(1, 3), rat(3, 5), rat(1, 2));
            let qh = Family::QHahn { a: qa.clone(), b: qb.clone(), q: q.clone() };
            let qhr = Family::QHahn { a: qb.clone(), b: qa.clone(), q: q.clone() };
            let factor = (qa.clone() * qb.clone()).powi(x as i64) / qb.powi(n as i64);
            assert_eq!(qh.weight(n - x, n).unwrap(), factor * qhr.weight(x, n).unwrap());
            for d in 0..=n {
                let sign = if d % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                let kf = sign.clone() * (rat(1, 1) / p.clone() - rat(1, 1)).powi(d as i64);
                assert_eq!(k.poly(d, n - x, n).unwrap(), kf * kr.poly(d, x, n).unwrap());
                let hf = sign * pochhammer(&b, d) / pochhammer(&a, d);
                assert_eq!(h.poly(d, n - x, n).unwrap(), hf * hr.poly(d, x, n).unwrap());
            }
        }
    }
}

/// Newton divided difference of order `pts.len() - 1`.
fn divided_difference(pts: &[(Rational, Rational)]) -> Rational {
    let mut col: Vec<Rational> = pts.iter().map(|p| p.1.clone()).collect();
    for order in 1..pts.len() {
        col = (0..col.len() - 1)
            .map(|i| (col[i + 1].clone() - col[i].clone()) / (pts[i + order].0.clone() - pts[i].0.clone()))
            .collect();
    }
    col[0].clone()
}

#[test]
fn q_polynomials_have_degree_n_in_eta() {
    let q = rat(1, 3);
    let fams = [
        (Family::QHahn { a: rat(1, 2), b: rat(2, 3), q: q.clone() }, 9),
        (Family::QMeixner { b: rat(1, 2), c: rat(3, 2), q: q.clone() }, 0),
    ];
    for (f, size) in fams {
        for n in 0..=6 {
            let pts: Vec<(Rational, Rational)> =
                (0..=n + 1).map(|x| (eta(x, &q), f.poly(n, x, size).unwrap())).collect();
            assert_eq!(divided_difference(&pts), rat(0, 1), "{f:?} n={n}");
            if n > 0 {
                assert_ne!(divided_difference(&pts[..=n]), rat(0, 1));
            }
        }
    }
}

#[test]
fn q_meixner_two_family_orthogonality() {
    for (b, c, q) in [(rat(1, 2), rat(1, 1), rat(1, 2)), (rat(3, 2), rat(1, 2), rat(1, 3)), (rat(1, 4), rat(2, 1), rat(2, 3))] {
        let first = Family::QMeixner { b: b.clone(), c: c.clone(), q: q.clone() };
        let second = Family::QMeixnerSecond { b, c, q };
        let n_max = 6;
        let last = truncate_for_degree(&first, n_max, DEFAULT_TAIL_TOL).unwrap().last()
            .max(truncate_for_degree(&second, n_max, DEFAULT_TAIL_TOL).unwrap().last());
        let lat = Lattice::SemiInfinite { x_max: last, tail_tol: DEFAULT_TAIL_TOL };
        let phi: Vec<Vec<f64>> = (0..=n_max).map(|n| first.orthonormal(n, &lat).unwrap()).collect();
        let psi: Vec<Vec<f64>> = (0..=n_max).map(|n| second.orthonormal(n, &lat).unwrap()).collect();
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        for n in 0..=n_max {
            for m in 0..=n_max {
                assert!(dot(&phi[n], &psi[m]).abs() < 1e-10, "cross n={n} m={m}: {}", dot(&phi[n], &psi[m]));
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((dot(&psi[n], &psi[m]) - want).abs() < 1e-10, "second n={n} m={m}");
                assert!((dot(&phi[n], &phi[m]) - want).abs() < 1e-10, "first n={n} m={m}");
            }
        }
    }
}

#[test]
fn float_and_exact_weights_agree() {
    for f in finite_grid() {
        let g = f.to_f64();
        for x in 0..=9 {
            let e = f.weight(x, 9).unwrap().to_f64();
            assert!((g.weight(x, 9).unwrap() - e).abs() <= 1e-12 * e.abs().max(1e-300), "{f:?} x={x}");
        }
    }
}
