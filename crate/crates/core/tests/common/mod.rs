//! Naive enumerators shared by the oracle and acceptance targets.

#![allow(dead_code)]

use num_bigint::BigUint;
use rustc_hash::FxHashSet;
use sumprod::energy;
use sumprod::incidence::{collinear_triples_with, Incidence, TripleConvention, GRID_GUARD};
use sumprod::{GSet, Ground};

pub fn naive_energy<T: Ground>(a: &[T]) -> u64 {
    let mut n = 0;
    for x in a {
        for y in a {
            for z in a {
                for w in a {
                    n += (x.minus(y) == z.minus(w)) as u64;
                }
            }
        }
    }
    n
}

pub fn naive_e3<T: Ground>(a: &[T]) -> u64 {
    let mut n = 0;
    for a1 in a {
        for b1 in a {
            let d = a1.minus(b1);
            for a2 in a {
                for b2 in a {
                    if a2.minus(b2) != d {
                        continue;
                    }
                    for a3 in a {
                        for b3 in a {
                            n += (a3.minus(b3) == d) as u64;
                        }
                    }
                }
            }
        }
    }
    n
}

pub fn naive_t3<T: Ground>(a: &[T]) -> u64 {
    let sums: Vec<T> = a.iter().flat_map(|x| a.iter().flat_map(move |y| a.iter().map(move |z| x.plus(y).plus(z)))).collect();
    let mut n = 0;
    for s in &sums {
        for t in &sums {
            n += (s == t) as u64;
        }
    }
    n
}

/// `#{(a1..a4, b, b', c, c') : b - b' = c - c' = (a1 - a2) - (a3 - a4)}`.
pub fn naive_sigma<T: Ground>(a: &[T]) -> u64 {
    let diffs: Vec<T> = a.iter().flat_map(|x| a.iter().map(move |y| x.minus(y))).collect();
    let mut n = 0;
    for d in &diffs {
        for e in &diffs {
            let target = d.minus(e);
            let hits = diffs.iter().filter(|x| **x == target).count() as u64;
            n += hits * hits;
        }
    }
    n
}

pub fn collinear<T: Ground>(p: &(T, T), q: &(T, T), r: &(T, T)) -> bool {
    let lhs = q.0.minus(&p.0).times(&r.1.minus(&p.1));
    let rhs = q.1.minus(&p.1).times(&r.0.minus(&p.0));
    lhs == rhs
}

/// Ordered triples of pairwise distinct collinear points of `A×A`, and the
/// with-repeats count `Σ_{L: k>=2} k^3`.
pub fn naive_triples<T: Ground>(a: &[T]) -> (u64, u64) {
    let pts: Vec<(T, T)> = a.iter().flat_map(|x| a.iter().map(move |y| (x.clone(), y.clone()))).collect();
    let (mut distinct, mut repeats) = (0u64, 0u64);
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            for (k, r) in pts.iter().enumerate() {
                let n_distinct = [i != j, j != k, i != k].iter().filter(|b| **b).count();
                if n_distinct == 3 && collinear(p, q, r) {
                    distinct += 1;
                }
                // Two distinct points fix one line.
                if n_distinct >= 2 && collinear(p, q, r) {
                    repeats += 1;
                }
            }
        }
        // (p, p, p) once per line through p and another point.
        let mut dirs: FxHashSet<Option<T>> = FxHashSet::default();
        for q in &pts {
            if q != p {
                let dx = q.0.minus(&p.0);
                let dy = q.1.minus(&p.1);
                dirs.insert(if dx.is_zero() { None } else { Some(dy.try_quotient(&dx).unwrap()) });
            }
        }
        repeats += dirs.len() as u64;
    }
    (distinct, repeats)
}

/// Compares every enumerated quantity with the library; the first mismatch
/// comes back as a message.
pub fn oracle_check<T: Incidence>(a: &GSet<T>) -> Result<(), String> {
    let el = a.elements();
    let label = a.to_text();
    let (d, r) = naive_triples(el);
    let pairs: [(&str, BigUint, u64); 6] = [
        ("E", energy::energy(a), naive_energy(el)),
        ("E3", energy::e3(a), naive_e3(el)),
        ("T3", energy::t_k(a, 3).map_err(|e| e.to_string())?, naive_t3(el)),
        ("Σ", energy::sigma_sum(a).map_err(|e| e.to_string())?, naive_sigma(el)),
        ("𝒯", collinear_triples_with(a, TripleConvention::Distinct, GRID_GUARD).map_err(|e| e.to_string())?.into(), d),
        (
            "𝒯 with repeats",
            collinear_triples_with(a, TripleConvention::WithRepeats, GRID_GUARD).map_err(|e| e.to_string())?.into(),
            r,
        ),
    ];
    for (what, got, want) in pairs {
        if got != BigUint::from(want) {
            return Err(format!("{what} on {label}: library {got}, enumeration {want}"));
        }
    }
    Ok(())
}

pub fn subsets<T: Clone>(pool: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << pool.len()) {
        if mask.count_ones() as usize <= max {
            out.push((0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect());
        }
    }
    out
}
