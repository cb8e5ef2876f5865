//! Randomized invariants.

use num_bigint::BigUint;
use proptest::prelude::*;
use sumprod::energy::{self, difference_table};
use sumprod::families::{generate, FamilySpec};
use sumprod::harness::{
    self, parse_csv, parse_json, rect_decompose, run_check, sum_construction_stats, verify_rect, CheckResult, Input,
    Options, Pass, RectProfile, Report,
};
use sumprod::incidence::{line_profile, unit_slope_cubes, Incidence, GRID_GUARD};
use sumprod::setops::{combine, combine_support, translate_intersect, Op};
use sumprod::spectral::{build_matrices, principal_eigen, EnergyMatrices};
use sumprod::subgroups::subgroup_context;
use sumprod::{AnySet, GSet, Ground, ModP, Rational, Universe};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=6).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| Rational::normalize(n, d).unwrap()))
}

fn rational_set(max: usize) -> impl Strategy<Value = GSet<Rational>> {
    prop::collection::vec(rational(), 1..=max).prop_map(|v| GSet::new(Universe::Rational, v).unwrap())
}

fn residue_set(max: usize) -> impl Strategy<Value = GSet<ModP>> {
    prop::sample::select(vec![7u64, 11, 13, 31, 101]).prop_flat_map(move |p| {
        prop::collection::vec(1..p as i64, 1..=max)
            .prop_map(move |v| GSet::new(Universe::Residue { modulus: p }, v.into_iter().map(|x| ModP::new(x, p).unwrap())).unwrap())
    })
}

fn subgroup_pair() -> impl Strategy<Value = (u64, u64)> {
    let primes = vec![5u64, 7, 11, 13, 17, 19, 29, 31, 37, 41, 61, 73, 97, 101, 109, 151, 181, 241];
    prop::sample::select(primes).prop_flat_map(|p| {
        let ts: Vec<u64> = (1..p).filter(|t| (p - 1) % t == 0).collect();
        prop::sample::select(ts).prop_map(move |t| (p, t))
    })
}

fn difference_facts<T: Ground>(a: &GSet<T>) -> Result<(), TestCaseError> {
    let n = a.len() as u64;
    let t = difference_table(a);
    prop_assert_eq!(t.total(), n * n);
    let zero = a.elements()[0].zero_like();
    prop_assert_eq!(t.get(&zero), n);
    for (x, r) in t.iter() {
        prop_assert_eq!(t.get(&x.negated()), r);
        prop_assert_eq!(translate_intersect(a, x).len() as u64, r);
    }
    let mut neg: Vec<T> = combine_support(a, a, Op::Sub).unwrap().iter().map(|x| x.negated()).collect();
    neg.sort();
    prop_assert_eq!(neg, combine_support(a, a, Op::Sub).unwrap());
    Ok(())
}

fn energy_facts<T: Incidence>(a: &GSet<T>) -> Result<(), TestCaseError> {
    let [moment, triple, pair] = energy::e3_routes(a).unwrap();
    prop_assert_eq!(&moment, &triple);
    prop_assert_eq!(&moment, &pair);
    prop_assert_eq!(energy::t_k(a, 2).unwrap(), energy::energy(a));
    prop_assert_eq!(BigUint::from(unit_slope_cubes(a, GRID_GUARD).unwrap()), energy::e3(a));
    let n = a.len() as u128;
    let prof = line_profile(a, a, GRID_GUARD).unwrap();
    let pairs: u128 = prof.lines.iter().map(|(_, k)| (*k as u128) * (*k as u128 - 1)).sum();
    prop_assert_eq!(pairs, n * n * (n * n - 1));
    Ok(())
}

fn exact_checks_hold(input: &Input) -> Result<(), TestCaseError> {
    let opts = Options::default();
    for info in harness::CHECKS.iter().filter(|c| c.exact && harness::applies(c, input)) {
        match run_check(info.id, input, &opts) {
            Ok(r) => prop_assert_eq!(r.pass, Pass::ProvedExact, "{} on {}: {} vs {}", info.id, input.label, r.lhs, r.rhs),
            Err(e) => prop_assert!(e.is_guard(), "{} on {}: {}", info.id, input.label, e),
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &a.recip().unwrap(), Rational::from_integer(1));
        let cross = (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()));
        prop_assert_eq!(a.cmp(&b), cross);
    }

    #[test]
    fn residue_field_axioms(p in prop::sample::select(vec![5u64, 7, 101, 1_000_003]), x in 1i64..1_000_000, y in 0i64..1_000_000, z in 0i64..1_000_000) {
        let (a, b, c) = (ModP::reduce(x, p), ModP::reduce(y, p), ModP::reduce(z, p));
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        if !a.is_zero() {
            prop_assert_eq!(a.times(&ModP::reduce(1, p).try_quotient(&a).unwrap()), ModP::reduce(1, p));
        }
    }

    #[test]
    fn difference_tables(a in rational_set(12), b in residue_set(10)) {
        difference_facts(&a)?;
        difference_facts(&b)?;
    }

    #[test]
    fn energy_identities(a in rational_set(10), b in residue_set(8)) {
        energy_facts(&a)?;
        energy_facts(&b)?;
    }

    #[test]
    fn cauchy_schwarz_both_signs(a in rational_set(20)) {
        let n = BigUint::from(a.len());
        let e = energy::energy(&a);
        for op in [Op::Add, Op::Sub] {
            let size = BigUint::from(combine(&a, &a, op).unwrap().len());
            prop_assert!(size * &e >= n.pow(4));
        }
    }

    #[test]
    fn power_iteration_ignores_order(a in rational_set(9), seed in any::<u64>()) {
        let max_r = difference_table(&a).max_count();
        let m: EnergyMatrices<f64> = build_matrices(&a, max_r).unwrap();
        let n = m.order;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut shuffled = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                shuffled[i * n + j] = m.mprime[perm[i] * n + perm[j]];
            }
        }
        let x = principal_eigen(&m.mprime, n, 1e-13).unwrap().mu1;
        let y = principal_eigen(&shuffled, n, 1e-13).unwrap().mu1;
        prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0));
    }

    #[test]
    fn power_iteration_matches_dense_eigensolver(a in rational_set(9)) {
        let max_r = difference_table(&a).max_count();
        let m: EnergyMatrices<f64> = build_matrices(&a, max_r.div_ceil(2)).unwrap();
        let n = m.order;
        let dense = nalgebra::DMatrix::from_row_slice(n, n, &m.mprime).symmetric_eigen();
        let top = dense.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mu1 = principal_eigen(&m.mprime, n, 1e-13).unwrap().mu1;
        prop_assert!((top - mu1).abs() <= 1e-6 * top.abs().max(1.0), "{} vs {}", top, mu1);
    }

    #[test]
    fn subgroup_structure((p, t) in subgroup_pair()) {
        let ctx = subgroup_context(p, t).unwrap();
        let g = ctx.gamma();
        for &x in g {
            for &y in g {
                prop_assert!(ctx.contains(x * y % p));
            }
        }
        let mut seen = vec![false; p as usize];
        for j in 0..ctx.n() as usize {
            for x in ctx.coset(j) {
                prop_assert!(!seen[x.value() as usize]);
                seen[x.value() as usize] = true;
            }
        }
        prop_assert!(seen[1..].iter().all(|&s| s));
        if p <= 31 {
            let mut quads = 0u64;
            for &a in g { for &b in g { for &c in g { for &d in g {
                quads += ((a + p - b) % p == (c + p - d) % p) as u64;
            }}}}
            prop_assert_eq!(energy::energy(&ctx.gamma_set()), BigUint::from(quads));
        }
    }

    #[test]
    fn families_are_reproducible(n in 2usize..40, seed in any::<u64>(), q in 2i64..5) {
        let spec = FamilySpec::random(n, seed, 10_000);
        prop_assert_eq!(generate(&spec).unwrap().to_text(), generate(&spec).unwrap().to_text());
        let AnySet::Rational(geo) = generate(&FamilySpec::geometric(q, n)).unwrap() else { unreachable!() };
        prop_assert_eq!(combine_support(&geo, &geo, Op::Mul).unwrap().len(), 2 * n - 1);
    }

    #[test]
    fn rectangle_structure(a in rational_set(24)) {
        prop_assume!(a.len() >= 4);
        let cover = rect_decompose(&a, RectProfile::default()).unwrap();
        prop_assert!(verify_rect(&a, &cover).is_ok());
        prop_assert!(sum_construction_stats(&a, Some(&cover)).unwrap().all_hold());
    }

    #[test]
    fn report_round_trip(
        rows in prop::collection::vec(
            ("[a-z_0-9]{1,12}", "[ -~]{0,20}", "-?[0-9]{1,30}(/[1-9][0-9]{0,5})?", any::<f64>(), any::<bool>(), 0u64..100_000),
            0..12,
        ),
        csv in any::<bool>(),
    ) {
        let results: Vec<_> = rows
            .into_iter()
            .map(|(id, input, lhs, ratio, exact, ms)| {
                // NaN never compares equal; keep it out of the equality test.
                let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
                Ok(CheckResult { check_id: id, input, lhs: lhs.clone(), rhs: lhs, ratio, pass: if exact { Pass::ProvedExact } else { Pass::RatioOnly }, elapsed_ms: ms })
            })
            .collect();
        let report = Report::new("prop", &["a", "b"], results, false);
        let back = if csv { parse_csv(&report.to_csv().unwrap()) } else { parse_json(&report.to_json().unwrap()) }.unwrap();
        prop_assert_eq!(back, report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_checks_on_random_sets(a in rational_set(9)) {
        exact_checks_hold(&Input::from_set("prop", AnySet::Rational(a)))?;
    }

    #[test]
    fn exact_checks_on_residue_sets(a in residue_set(8)) {
        exact_checks_hold(&Input::from_set("prop", AnySet::Residue(a)))?;
    }

    #[test]
    fn exact_checks_on_subgroups((p, t) in subgroup_pair()) {
        exact_checks_hold(&Input::subgroup(subgroup_context(p, t).unwrap()))?;
    }
}
