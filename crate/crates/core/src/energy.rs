//! Energies and moment sums of the difference representation function.
//!
//! All integer functionals are returned as `BigUint`. Inner loops accumulate
//! in `u128` and spill into a big integer on overflow.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::ground::{Ground, Rational};
use crate::setops::{combine, iterated_sum_counts, translate_intersect, CountTable, GSet, Op};
use crate::{guard, Error, Result};

/// Largest `|A-A|` for the `|D|^2` double sums.
pub const SIGMA_GUARD: usize = 100_000;

/// Exact accumulator: `u128` fast path with a big-integer overflow.
#[derive(Default, Clone, Debug)]
pub struct BigAcc {
    lo: u128,
    hi: BigUint,
}

impl BigAcc {
    #[inline]
    pub fn add(&mut self, x: u128) {
        match self.lo.checked_add(x) {
            Some(s) => self.lo = s,
            None => {
                self.hi += self.lo;
                self.lo = x;
            }
        }
    }

    pub fn add_big(&mut self, x: &BigUint) {
        self.hi += x;
    }

    pub fn finish(self) -> BigUint {
        self.hi + self.lo
    }
}

/// `r_{A-A}` as a table.
pub fn difference_table<T: Ground>(a: &GSet<T>) -> CountTable<T> {
    combine(a, a, Op::Sub).expect("same universe")
}

/// Histogram `value of r -> number of x with that value` for a table.
pub fn value_histogram<T: Ground>(t: &CountTable<T>) -> BTreeMap<u64, u64> {
    let mut h = BTreeMap::new();
    for (_, c) in t.iter() {
        *h.entry(c).or_insert(0u64) += 1;
    }
    h
}

fn power_sum(hist: &BTreeMap<u64, u64>, q: u32) -> BigUint {
    let mut acc = BigAcc::default();
    for (&v, &m) in hist {
        match (v as u128).checked_pow(q).and_then(|p| p.checked_mul(m as u128)) {
            Some(x) => acc.add(x),
            None => acc.add_big(&(num_traits::pow(BigUint::from(v), q as usize) * m)),
        }
    }
    acc.finish()
}

/// `E(A, B) = Σ_d |A ∩ (B + d)|^2`.
pub fn energy_pair<T: Ground>(a: &GSet<T>, b: &GSet<T>) -> Result<BigUint> {
    let t = combine(a, b, Op::Sub)?;
    Ok(power_sum(&value_histogram(&t), 2))
}

/// Additive energy `E(A)`.
pub fn energy<T: Ground>(a: &GSet<T>) -> BigUint {
    power_sum(&value_histogram(&difference_table(a)), 2)
}

/// Value of `E_q`: exact for integral `q`, double precision otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentValue {
    Exact(BigUint),
    Approx(f64),
}

impl MomentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(n) => n.to_f64().unwrap_or(f64::INFINITY),
            MomentValue::Approx(x) => *x,
        }
    }
}

/// `E_q(A) = Σ_d r_{A-A}(d)^q` for rational `q >= 0`.
pub fn moment_energy<T: Ground>(a: &GSet<T>, q: &Rational) -> MomentValue {
    let hist = value_histogram(&difference_table(a));
    match q.as_i64() {
        Some(k) if (0..=u32::MAX as i64).contains(&k) => MomentValue::Exact(power_sum(&hist, k as u32)),
        _ => MomentValue::Approx(fractional_moment(&hist, q.to_f64())),
    }
}

// Summing over distinct values of r keeps the number of rounded terms at most |A|.
fn fractional_moment(hist: &BTreeMap<u64, u64>, q: f64) -> f64 {
    hist.iter().map(|(&v, &m)| m as f64 * (v as f64).powf(q)).sum()
}

/// `E_3(A)`.
pub fn e3<T: Ground>(a: &GSet<T>) -> BigUint {
    power_sum(&value_histogram(&difference_table(a)), 3)
}

/// `E_{3/2}(A)`, with each `r^{3/2}` taken as `r·sqrt(r)`.
pub fn e32<T: Ground>(a: &GSet<T>) -> f64 {
    value_histogram(&difference_table(a))
        .iter()
        .map(|(&v, &m)| m as f64 * (v as f64 * (v as f64).sqrt()))
        .sum()
}

/// `T_k(A) = Σ_s r_{kA}(s)^2`.
pub fn t_k<T: Ground>(a: &GSet<T>, k: u32) -> Result<BigUint> {
    if k < 1 {
        return Err(Error::DegenerateInput("k must be at least 1".into()));
    }
    let t = iterated_sum_counts(a, k)?;
    Ok(power_sum(&value_histogram(&t), 2))
}

/// `Σ = Σ_{d,d'} r(d) r(d') r(d-d')^2` over the support of `r = r_{A-A}`.
pub fn sigma_sum<T: Ground>(a: &GSet<T>) -> Result<BigUint> {
    let t = difference_table(a);
    sigma_from_table(&t)
}

pub(crate) fn sigma_from_table<T: Ground>(t: &CountTable<T>) -> Result<BigUint> {
    guard("|A-A| for Σ", t.len() as u128, SIGMA_GUARD as u128)?;
    let entries: Vec<(&T, u64)> = t.iter().collect();
    let mut acc = BigAcc::default();
    for (d, rd) in &entries {
        let mut row: u128 = 0;
        for (e, re) in &entries {
            let r = t.get(&d.minus(e)) as u128;
            if r != 0 {
                row += *re as u128 * r * r;
            }
        }
        // row <= |A|^4 * |A-A|, times r(d) <= |A|: well inside u128 at any feasible size.
        acc.add(row * *rd as u128);
    }
    Ok(acc.finish())
}

/// Number of pairs `(d, d')` in `D × R` with `d - d' ∈ D`, where `D = A - A`
/// and `R` is `restrict` (or `D` itself).
pub fn difference_triple_count<T: Ground>(a: &GSet<T>, restrict: Option<&[T]>) -> Result<BigUint> {
    let t = difference_table(a);
    difference_triple_from_table(&t, restrict)
}

pub(crate) fn difference_triple_from_table<T: Ground>(t: &CountTable<T>, restrict: Option<&[T]>) -> Result<BigUint> {
    let d: Vec<&T> = t.iter().map(|(x, _)| x).collect();
    let r: Vec<&T> = match restrict {
        Some(rs) => {
            if rs.iter().any(|x| t.get(x) == 0) {
                return Err(Error::RestrictNotSubset);
            }
            rs.iter().collect()
        }
        None => d.clone(),
    };
    guard("|A-A| for difference triples", (d.len() as u128) * (r.len() as u128), (SIGMA_GUARD as u128).pow(2))?;
    let mut n: u128 = 0;
    for x in &d {
        for y in &r {
            if t.get(&x.minus(y)) != 0 {
                n += 1;
            }
        }
    }
    Ok(BigUint::from(n))
}

/// Popular differences `{d : r_{A-A}(d) >= |A|^2 / (2|A-A|)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularSet<T: Ground> {
    pub delta: Rational,
    /// Sorted; contains 0 whenever `A` is nonempty.
    pub members: Vec<T>,
    /// `Σ_{d∈P} r(d)`.
    pub mass: u64,
}

pub fn popular_differences<T: Ground>(a: &GSet<T>) -> PopularSet<T> {
    let t = difference_table(a);
    let n2 = (a.len() * a.len()) as i64;
    let dsize = t.len() as i64;
    let delta = Rational::normalize(n2, (2 * dsize).max(1)).expect("positive denominator");
    let mut members = Vec::new();
    let mut mass = 0u64;
    for (x, r) in t.iter() {
        // r >= |A|^2 / (2|D|)  <=>  2|D| r >= |A|^2
        if 2 * dsize as u128 * r as u128 >= n2 as u128 {
            members.push(x.clone());
            mass += r;
        }
    }
    members.sort_unstable();
    PopularSet { delta, members, mass }
}

/// The dyadic class `{x : r(x) ∈ [Δ, 2Δ)}` carrying the most energy.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicLevel<T: Ground> {
    /// Lower end `Δ = 2^i` of the class.
    pub delta: u64,
    pub members: Vec<T>,
    /// `Σ_{x∈P} r(x)^2`.
    pub energy: BigUint,
    /// `Σ_{x∈P} r(x)`, the number of pairs `(a, a')` with `a - a' ∈ P`.
    pub pairs: u64,
}

pub fn dyadic_energy_level<T: Ground>(a: &GSet<T>) -> Result<DyadicLevel<T>> {
    if a.len() < 2 {
        return Err(Error::DegenerateInput("dyadic level needs |A| >= 2".into()));
    }
    Ok(dyadic_level_from_table(&difference_table(a)))
}

pub(crate) fn dyadic_level_from_table<T: Ground>(t: &CountTable<T>) -> DyadicLevel<T> {
    let mut classes: BTreeMap<u32, (u128, u64, Vec<T>)> = BTreeMap::new();
    for (x, r) in t.iter() {
        let i = 63 - r.leading_zeros();
        let e = classes.entry(i).or_insert_with(|| (0, 0, Vec::new()));
        e.0 += (r as u128) * (r as u128);
        e.1 += r;
        e.2.push(x.clone());
    }
    // Maximal energy, ties toward the smaller exponent.
    let (i, (e, pairs, mut members)) = classes
        .into_iter()
        .fold(None::<(u32, (u128, u64, Vec<T>))>, |best, (i, c)| match best {
            Some(b) if b.1 .0 >= c.0 => Some(b),
            _ => Some((i, c)),
        })
        .expect("nonempty table");
    members.sort_unstable();
    DyadicLevel { delta: 1u64 << i, members, energy: BigUint::from(e), pairs }
}

/// `E = E' + E''` split at `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailSplit {
    /// `Σ_{r <= Δ} r^2`.
    pub e_prime: BigUint,
    /// `Σ_{r > Δ} r^2`.
    pub e_dprime: BigUint,
    /// `|{x : r(x) > Δ}|`.
    pub tail_support: u64,
}

pub fn tail_decompose<T: Ground>(a: &GSet<T>, delta: u64) -> Result<TailSplit> {
    if delta < 1 {
        return Err(Error::DegenerateInput("Δ must be at least 1".into()));
    }
    let hist = value_histogram(&difference_table(a));
    let (mut lo, mut hi, mut support) = (0u128, 0u128, 0u64);
    for (&v, &m) in &hist {
        let sq = (v as u128) * (v as u128) * m as u128;
        if v <= delta {
            lo += sq;
        } else {
            hi += sq;
            support += m;
        }
    }
    Ok(TailSplit { e_prime: lo.into(), e_dprime: hi.into(), tail_support: support })
}

/// `E_3(A)` three ways: `Σ r^3`; `Σ_{d,d'} |A ∩ (A+d) ∩ (A+d')|^2`; `Σ_d E(A, A_d)`.
pub fn e3_routes<T: Ground>(a: &GSet<T>) -> Result<[BigUint; 3]> {
    let t = difference_table(a);
    guard("|A-A| for the E3 routes", t.len() as u128, SIGMA_GUARD as u128)?;
    let moment = power_sum(&value_histogram(&t), 3);

    let ds: Vec<T> = t.support();
    // For each a, the set of d with a - d ∈ A, i.e. a ∈ A + d.
    let mut hits: FxHashMap<(usize, usize), u64> = FxHashMap::default();
    let index: FxHashMap<&T, usize> = ds.iter().enumerate().map(|(i, d)| (d, i)).collect();
    for x in a {
        let row: Vec<usize> = a.iter().map(|y| index[&x.minus(y)]).collect();
        for &i in &row {
            for &j in &row {
                *hits.entry((i, j)).or_insert(0) += 1;
            }
        }
    }
    let mut triple = BigAcc::default();
    for c in hits.values() {
        triple.add(*c as u128 * *c as u128);
    }

    let mut pair = BigUint::zero();
    for d in &ds {
        let ad = translate_intersect(a, d);
        pair += energy_pair(a, &ad)?;
    }
    Ok([moment, triple.finish(), pair])
}

/// The integer functionals of one set, ready for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    #[serde(with = "crate::decimal")]
    pub e: BigUint,
    #[serde(with = "crate::decimal")]
    pub e3: BigUint,
    pub e32: f64,
    #[serde(with = "decimal_map")]
    pub tk: BTreeMap<u32, BigUint>,
    #[serde(with = "crate::decimal")]
    pub sigma: BigUint,
}

mod decimal_map {
    use std::collections::BTreeMap;

    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, BigUint>, s: S) -> Result<S::Ok, S::Error> {
        let v: BTreeMap<String, String> = m.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, BigUint>, D::Error> {
        let v = BTreeMap::<String, String>::deserialize(d)?;
        v.into_iter()
            .map(|(k, x)| Ok((k.parse().map_err(serde::de::Error::custom)?, x.parse().map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

pub fn energy_profile<T: Ground>(a: &GSet<T>, ks: &[u32]) -> Result<EnergyProfile> {
    let t = difference_table(a);
    let hist = value_histogram(&t);
    let mut tk = BTreeMap::new();
    for &k in ks {
        tk.insert(k, t_k(a, k)?);
    }
    Ok(EnergyProfile {
        e: power_sum(&hist, 2),
        e3: power_sum(&hist, 3),
        e32: fractional_moment(&hist, 1.5),
        tk,
        sigma: sigma_from_table(&t)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ModP;

    fn s(xs: &[i64]) -> GSet<Rational> {
        GSet::from_integers(xs).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&s(&[1, 2, 3])), big(19));
        let gamma = GSet::<ModP>::from_residues(7, &[1, 2, 4]).unwrap();
        assert_eq!(energy(&gamma), big(15));
        let a = s(&[1, 5, 9, 20]);
        assert_eq!(energy_pair(&a, &s(&[3])).unwrap(), big(4));
    }

    #[test]
    fn moments() {
        let a = s(&[1, 2, 3]);
        assert_eq!(moment_energy(&a, &Rational::from_integer(3)), MomentValue::Exact(big(45)));
        assert_eq!(moment_energy(&a, &Rational::from_integer(1)), MomentValue::Exact(big(9)));
        let half = moment_energy(&a, &Rational::normalize(3, 2).unwrap()).to_f64();
        assert!((half - 12.853006672199012).abs() < 1e-9);
        assert!((e32(&a) - half).abs() < 1e-12);
    }

    #[test]
    fn t_k_examples() {
        assert_eq!(t_k(&s(&[1, 2, 3]), 3).unwrap(), big(141));
        assert_eq!(t_k(&s(&[1, 2, 3]), 2).unwrap(), big(19));
        assert_eq!(t_k(&s(&[1, 2]), 2).unwrap(), big(6));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_sum(&s(&[1, 2, 3])).unwrap(), big(319));
        assert_eq!(sigma_sum(&s(&[1, 2])).unwrap(), big(32));
        let a = s(&[1, 4, 6, 13]);
        assert!(sigma_sum(&a).unwrap() >= big(4u64.pow(4)));
    }

    #[test]
    fn triple_counts() {
        let a = s(&[1, 2, 3]);
        assert_eq!(difference_triple_count(&a, None).unwrap(), big(19));
        let zero = [Rational::from_integer(0)];
        assert_eq!(difference_triple_count(&a, Some(&zero)).unwrap(), big(5));
        let bad = [Rational::from_integer(9)];
        assert!(matches!(difference_triple_count(&a, Some(&bad)), Err(Error::RestrictNotSubset)));
    }

    #[test]
    fn popular_and_dyadic() {
        let p = popular_differences(&s(&[1, 2, 3]));
        assert_eq!(p.delta, Rational::normalize(9, 10).unwrap());
        assert_eq!(p.members.len(), 5);
        assert_eq!(p.mass, 9);

        let lvl = dyadic_energy_level(&s(&[1, 2, 3])).unwrap();
        assert_eq!((lvl.delta, lvl.energy.clone(), lvl.members.len()), (2, big(17), 3));
        let lvl = dyadic_energy_level(&s(&[1, 2])).unwrap();
        assert_eq!((lvl.delta, lvl.energy), (2, big(4)));
    }

    #[test]
    fn tails() {
        let a = s(&[1, 2, 3]);
        let t = tail_decompose(&a, 3).unwrap();
        assert_eq!((t.e_prime, t.e_dprime, t.tail_support), (big(19), big(0), 0));
        let t = tail_decompose(&a, 2).unwrap();
        assert_eq!((t.e_prime, t.e_dprime, t.tail_support), (big(10), big(9), 1));
    }

    #[test]
    fn e3_three_routes_agree() {
        let r = e3_routes(&s(&[1, 2, 3])).unwrap();
        assert_eq!(r, [big(45), big(45), big(45)]);
    }

    #[test]
    fn profile_serializes_decimal_strings() {
        let p = energy_profile(&s(&[1, 2, 3]), &[3]).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert!(j.contains("\"e\":\"19\"") && j.contains("\"3\":\"141\"") && j.contains("\"sigma\":\"319\""));
        let back: EnergyProfile = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
    }
}
