//! Library values against naive enumeration.

use num_bigint::BigUint;
use num_complex::Complex64;
use rustc_hash::FxHashSet;
use sumprod::energy;
use sumprod::incidence::{collinear_triples_with, subgroup_collinear_triples, TripleConvention, GRID_GUARD};
use sumprod::subgroups::{char_sums, gap_h, parseval_sum, subgroup_context, window_counts};
use sumprod::{GSet, ModP, Rational, Universe};

mod common;
use common::*;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn worked_values_for_one_two_three() {
    let a = GSet::from_integers(&[1, 2, 3]).unwrap();
    assert_eq!(energy::energy(&a), big(19));
    assert_eq!(energy::e3(&a), big(45));
    assert_eq!(energy::t_k(&a, 3).unwrap(), big(141));
    assert_eq!(energy::sigma_sum(&a).unwrap(), big(319));
    assert_eq!(collinear_triples_with(&a, TripleConvention::Distinct, GRID_GUARD).unwrap(), 48);
    assert_eq!(naive_triples(a.elements()).0, 48);
}

#[test]
fn rational_sets_up_to_five() {
    let pool: Vec<Rational> = [(1, 1), (2, 1), (3, 1), (5, 1), (-1, 1), (1, 2), (-7, 3)]
        .iter()
        .map(|&(n, d)| Rational::normalize(n, d).unwrap())
        .collect();
    for s in subsets(&pool, 5) {
        oracle_check(&GSet::new(Universe::Rational, s).unwrap()).unwrap();
    }
}

#[test]
fn residue_sets_up_to_five() {
    for p in [5u64, 7] {
        let pool: Vec<ModP> = (1..p as i64).map(|x| ModP::new(x, p).unwrap()).collect();
        for s in subsets(&pool, 5) {
            oracle_check(&GSet::new(Universe::Residue { modulus: p }, s).unwrap()).unwrap();
        }
    }
}

#[test]
fn subgroups_up_to_five() {
    for (p, t) in [(7, 2), (7, 3), (11, 5), (13, 4), (31, 5), (101, 5), (41, 4)] {
        let ctx = subgroup_context(p, t).unwrap();
        let g = ctx.gamma_set();
        assert_eq!(g.len() as u64, t);
        oracle_check(&g).unwrap();
        for conv in [TripleConvention::Distinct, TripleConvention::WithRepeats] {
            let want = collinear_triples_with(&g, conv, GRID_GUARD).unwrap();
            assert_eq!(subgroup_collinear_triples(&ctx, conv).unwrap(), want);
        }
    }
}

fn centered(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

#[test]
fn window_count_against_congruences() {
    for (p, t) in [(7u64, 3u64), (11, 5), (13, 4), (13, 6), (31, 5), (101, 10)] {
        let ctx = subgroup_context(p, t).unwrap();
        for h in [1u64, 2, p / 10, p / 3] {
            if h < 1 || 2 * h >= p {
                continue;
            }
            let (pi, hi) = (p as i64, h as i64);
            let mut direct = 0u64;
            for &u in ctx.gamma() {
                for x in (-hi..=hi).filter(|&x| x != 0) {
                    let ux = centered(u as i64 * x, pi);
                    direct += (-hi..=hi).filter(|&y| y != 0 && centered(y, pi) == ux).count() as u64;
                }
            }
            let w = window_counts(&ctx, h).unwrap();
            assert_eq!(w.n_gamma_h, direct, "N(Γ,h) at p={p} t={t} h={h}");
            assert_eq!(w.per_coset.iter().map(|n| n * n).sum::<u64>(), direct);
        }
    }
    let w = window_counts(&subgroup_context(7, 3).unwrap(), 2).unwrap();
    assert_eq!(w.n_gamma_h, 8);
}

/// Longest run of residues `u+1, ..., u+H` (mod p, 0 included) missing a coset.
fn naive_gap(p: u64, t: u64) -> u64 {
    let ctx = subgroup_context(p, t).unwrap();
    let mut best = 0;
    for j in 0..ctx.n() as usize {
        let coset: FxHashSet<u64> = ctx.coset(j).iter().map(|x| x.value()).collect();
        for u in 0..p {
            let mut run = 0;
            while run < p && !coset.contains(&((u + run + 1) % p)) {
                run += 1;
            }
            best = best.max(run);
        }
    }
    best
}

#[test]
fn gaps_against_full_search() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        for t in (1..p).filter(|t| (p - 1) % t == 0) {
            let ctx = subgroup_context(p, t).unwrap();
            assert_eq!(gap_h(&ctx, true).unwrap().h, naive_gap(p, t), "H at p={p} t={t}");
        }
    }
    assert_eq!(gap_h(&subgroup_context(7, 3).unwrap(), true).unwrap().h, 3);
}

#[test]
fn character_sums_against_direct_exponentials() {
    for (p, t) in [(7u64, 3u64), (13, 4), (31, 6), (61, 10)] {
        let ctx = subgroup_context(p, t).unwrap();
        let sums = char_sums(&ctx).unwrap();
        let mut c = 1u64;
        for j in 0..ctx.n() as usize {
            let z: Complex64 = ctx
                .gamma()
                .iter()
                .map(|&x| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((c * x) % p) as f64 / p as f64))
                .sum();
            assert!((z.norm() - sums.abs[j]).abs() < 1e-9);
            c = c * ctx.g() % p;
        }
        let parseval = parseval_sum(&ctx).unwrap();
        assert!((parseval - (t * (p - t)) as f64).abs() < 1e-6 * (t * (p - t)) as f64);
    }
    let s = char_sums(&subgroup_context(7, 3).unwrap()).unwrap();
    assert!((s.fourth_moment - 8.0).abs() < 1e-9 && (s.bound - 35.0).abs() < 1e-9);
}

#[test]
fn difference_triples_against_enumeration() {
    for xs in [&[1i64, 2, 3][..], &[1, 2, 4, 8], &[1, 3, 4, 9, 10]] {
        let a = GSet::from_integers(xs).unwrap();
        let d: FxHashSet<i64> = xs.iter().flat_map(|x| xs.iter().map(move |y| x - y)).collect();
        let n = d.iter().flat_map(|x| d.iter().map(move |y| x - y)).filter(|z| d.contains(z)).count() as u64;
        assert_eq!(energy::difference_triple_count(&a, None).unwrap(), big(n));
    }
}
