use proptest::prelude::*;

use convchain::bd::{bd_rates, build_k_bd, build_l, eigen_relation_violation, kappa_bd, tune_weights};
use convchain::chains::{build_multiple, kappa_closed, CaseId, ChainSpec, Params, Sign, SignPattern, TransitionMatrix};
use convchain::io::{matrix_from_csv, matrix_to_csv};
use convchain::numerics::{identity_oracle, q_pochhammer, rat, Rational, Scalar, SeriesSpec, Summation};
use convchain::selfsim::{verify_identity, IdentityId};
use convchain::spectral::{kappa_sum, sample_paths};
use convchain::families::Family;
use convchain::Error;

fn unit() -> impl Strategy<Value = Rational> {
    (2i64..13).prop_flat_map(|d| (1..d).prop_map(move |n| rat(n, d)))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..30, 1i64..8).prop_map(|(n, d)| rat(n, d))
}

/// Multiples of 1/16 in (0, 10].
fn dyadic() -> impl Strategy<Value = Rational> {
    (1i64..=160).prop_map(|n| rat(n, 16))
}

/// Relative 1e-12 at magnitude 1 and above, absolute below.
fn within(float: f64, exact: &Rational) -> bool {
    let e = exact.to_f64();
    (float - e).abs() <= 1e-12 * e.abs().max(1.0)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn finite_case() -> impl Strategy<Value = CaseId> {
    let cases: Vec<CaseId> = CaseId::finite().collect();
    (0..cases.len()).prop_map(move |i| cases[i])
}

/// Parameters drawn from the declared domain of `case`.
fn case_params(case: CaseId) -> impl Strategy<Value = Params<Rational>> {
    let names = case.param_names();
    let doms: Vec<bool> = case.info().params.iter().map(|(_, d)| matches!(d, convchain::chains::ParamDomain::Unit)).collect();
    let values: Vec<BoxedStrategy<Rational>> =
        doms.iter().map(|u| if *u { unit().boxed() } else { positive().boxed() }).collect();
    values.prop_map(move |vs| Params::new(names.iter().copied().zip(vs)))
}

fn holds_or_pole(id: Summation<Rational>, n_max: usize) -> std::result::Result<(), TestCaseError> {
    match identity_oracle(&id, n_max) {
        Ok(r) => {
            prop_assert!(r.holds(0.0), "{} fails: {:?}", r.name, r.rows.iter().find(|row| row.2 != row.3));
            Ok(())
        }
        Err(Error::Pole { .. }) => Err(TestCaseError::reject("pole")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn pfaff_saalschutz(a in positive(), b in positive(), c in positive()) {
        holds_or_pole(Summation::PfaffSaalschutz { a, b, c }, 8)?;
    }

    #[test]
    fn q_pfaff_saalschutz(a in unit(), b in unit(), c in unit(), q in unit()) {
        holds_or_pole(Summation::QPfaffSaalschutz { a, b, c, q }, 6)?;
    }

    #[test]
    fn series_exact_and_float_agree(
        b in dyadic(),
        c in dyadic(),
        q in (1i64..16).prop_map(|n| rat(n, 16)),
        z in (-160i64..=160).prop_map(|n| rat(n, 16)),
        n in 0usize..=20,
    ) {
        // dyadic parameters are exact in both backends, so only evaluation error remains
        let exact = SeriesSpec::hyper(n, vec![b.clone()], vec![c.clone()], z.clone()).evaluate().unwrap();
        let float = SeriesSpec::hyper(n, vec![b.to_f64()], vec![c.to_f64()], z.to_f64()).evaluate().unwrap();
        prop_assert!(within(float, &exact), "{float} vs {exact}");
        let exact = SeriesSpec::qhyper(n, vec![b.clone()], vec![c.clone()], q.clone(), q.clone()).evaluate();
        let float = SeriesSpec::qhyper(n, vec![b.to_f64()], vec![c.to_f64()], q.to_f64(), q.to_f64()).evaluate();
        match (exact, float) {
            (Ok(e), Ok(f)) => prop_assert!(within(f, &e), "{f} vs {e}"),
            (Err(Error::Pole { .. }), Err(Error::Pole { .. })) => {}
            (e, f) => prop_assert!(false, "{e:?} vs {f:?}"),
        }
    }

    #[test]
    fn series_float_error_follows_conditioning(b in positive(), c in positive(), n in 0usize..=20) {
        let spec = SeriesSpec::hyper(n, vec![b.clone()], vec![c.clone()], rat(-1, 1));
        let exact = spec.evaluate().unwrap().to_f64();
        let scale: f64 = spec.terms().unwrap().iter().map(|t| t.to_f64().abs()).sum();
        let float = SeriesSpec::hyper(n, vec![b.to_f64()], vec![c.to_f64()], -1.0).evaluate().unwrap();
        // input rounding of b and c is amplified by Σ|t_k|
        prop_assert!((float - exact).abs() <= 1e-14 * (n as f64 + 1.0) * scale, "{float} vs {exact}, scale {scale}");
    }

    #[test]
    fn binomial_series(z in (-20i64..20, 1i64..7), n in 0usize..15) {
        let z = rat(z.0, z.1);
        let s = SeriesSpec::hyper(n, vec![], vec![], z.clone()).evaluate().unwrap();
        prop_assert_eq!(s, (rat(1, 1) - z).powi(n as i64));
    }

    #[test]
    fn q_pochhammer_splits(a in (-9i64..9, 1i64..9), q in unit(), k in 0usize..=16, m in 0usize..=16) {
        let a = rat(a.0, a.1);
        let whole = q_pochhammer(&a, &q, k + m);
        let shifted = a.clone() * q.powi(k as i64);
        prop_assert_eq!(whole, q_pochhammer(&a, &q, k) * q_pochhammer(&shifted, &q, m));
    }

    #[test]
    fn rising_binomial(a in positive(), b in positive()) {
        holds_or_pole(Summation::RisingBinomial { a, b }, 10)?;
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn finite_chains_are_reversible(
        (case, p) in finite_case().prop_flat_map(|c| (Just(c), case_params(c))),
        n in 1usize..5,
    ) {
        let spec = match ChainSpec::finite(case, &p, n) {
            Ok(s) => s,
            Err(Error::Domain(_)) => return Err(TestCaseError::reject("outside domain")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let k = spec.matrix().unwrap();
        let pi = spec.measure().unwrap().values;
        prop_assert!(k.is_nonnegative());
        prop_assert!(k.column_sums().iter().all(|s| *s == rat(1, 1)), "{case} {p}");
        prop_assert_eq!(k.balance_violation(&pi, 0.0), None);
        let kappas = spec.kappas().unwrap();
        let total = kappas.iter().fold(rat(0, 1), |acc, v| acc + v.clone());
        prop_assert_eq!(total, k.trace());
        for (d, closed) in kappas.iter().enumerate() {
            prop_assert_eq!(closed, &kappa_closed(case, &p, d).unwrap());
            prop_assert_eq!(closed, &kappa_sum(&k, &spec.lambda, n, d).unwrap());
        }
    }

    #[test]
    fn krawtchouk_self_similarity(a1 in unit(), a2 in unit(), which in 0usize..3) {
        let id = [IdentityId::KThconK, IdentityId::KPipiI, IdentityId::KPipiII][which];
        let p = Params::new([("a1", a1), ("a2", a2)]);
        let report = verify_identity(id, &p, 6, false);
        prop_assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn tuned_birth_death_chains(p in unit(), n in 2usize..7, m in 1usize..4) {
        prop_assume!(m <= n);
        let family = Family::Krawtchouk { p };
        let rates = bd_rates(&family, n).unwrap();
        let op = build_l(&rates);
        let w = tune_weights(&op, m).unwrap();
        let k = build_k_bd(&op, &w).unwrap();
        prop_assert!(k.is_nonnegative() && k.is_banded(m));
        prop_assert!(k.column_sums().iter().all(|s| *s == rat(1, 1)));
        for d in 0..=n {
            let eigen = bd_rates(&family, n).unwrap().eigen[d].clone();
            let kappa = kappa_bd(&w, &eigen);
            prop_assert_eq!(eigen_relation_violation(&k, &rates, d, &kappa).unwrap(), None);
        }
    }

    #[test]
    fn multiple_chain_reflection(
        ps in proptest::collection::vec(unit(), 1..=4),
        bits in proptest::collection::vec(any::<bool>(), 4),
        n in 1usize..6,
    ) {
        let signs: Vec<Sign> = bits[..ps.len()].iter().map(|b| if *b { Sign::Plus } else { Sign::Minus }).collect();
        let pattern = match SignPattern::new(signs, ps) {
            Ok(p) => p,
            Err(Error::Pattern(_)) => return Err(TestCaseError::reject("pattern")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let k = build_multiple(&pattern, n).unwrap().matrix;
        let r = build_multiple(&pattern.reflected(), n).unwrap().matrix;
        prop_assert_eq!(r, TransitionMatrix::from_fn(n + 1, |x, y| k.get(n - x, n - y).clone()));
        prop_assert_eq!(pattern.reflected().kappa(1), pattern.kappa(1));
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn csv_round_trip(n in 1usize..6, cells in proptest::collection::vec((-50i64..50, 1i64..20), 36)) {
        let m = TransitionMatrix::from_fn(n, |x, y| {
            let (a, b) = cells[x * 6 + y];
            rat(a, b)
        });
        let text = matrix_to_csv(&m).unwrap();
        prop_assert_eq!(matrix_from_csv::<Rational>(&text).unwrap(), m.clone());
        let f = m.to_f64().map(|v| v / 3.0);
        prop_assert_eq!(matrix_from_csv::<f64>(&matrix_to_csv(&f).unwrap()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), l in 0usize..5) {
        let p = Params::new([("a", rat(1, 3)), ("b", rat(1, 2))]);
        let k = ChainSpec::finite(CaseId::KI, &p, 4).unwrap().matrix().unwrap().to_f64();
        let p0 = [0.0, 0.0, 1.0, 0.0, 0.0];
        let a = sample_paths(&k, &p0, l, 2000, seed).unwrap();
        prop_assert_eq!(&a, &sample_paths(&k, &p0, l, 2000, seed).unwrap());
        prop_assert_eq!(a.counts.iter().sum::<u64>(), 2000);
    }
}
