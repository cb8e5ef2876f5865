//! Rectangle regularization of the popular-difference point set, and the
//! sum-set construction built on top of it.
//!
//! `𝒫(A) = {(a, a') ∈ A × A : a - a' ∈ P}` for the dyadic energy level `P`.
//! Abscissae are classed by their number of points (`[2^{i-1}, 2^i)`), and
//! within each class the ordinates are classed the same way; the resulting
//! rectangles partition `𝒫`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Serialize, Serializer};

use crate::energy::{self, difference_table};
use crate::ground::Ground;
use crate::setops::{product_set, GSet, Op};
use crate::{guard, Error, Result};

/// Thresholds of the case split: a rich rectangle is wide when its base has
/// at least `c1 |A| / L^c2` elements, `L = ⌊log2 |A|⌋ + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RectProfile {
    /// `c1 = 1`, `c2 = 10`.
    Paper,
    Desk { c1: f64, c2: f64 },
}

impl Default for RectProfile {
    fn default() -> Self {
        RectProfile::Desk { c1: 0.25, c2: 2.0 }
    }
}

impl RectProfile {
    pub fn constants(self) -> (f64, f64) {
        match self {
            RectProfile::Paper => (1.0, 10.0),
            RectProfile::Desk { c1, c2 } => (c1, c2),
        }
    }
}

impl fmt::Display for RectProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RectProfile::Paper => f.write_str("paper"),
            RectProfile::Desk { c1, c2 } => write!(f, "desk(c1={c1},c2={c2})"),
        }
    }
}

impl FromStr for RectProfile {
    type Err = Error;

    /// `paper`, `desk`, or `desk(c1=0.5,c2=1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "paper" => return Ok(RectProfile::Paper),
            "desk" => return Ok(RectProfile::default()),
            _ => {}
        }
        let bad = || Error::Parse(format!("bad profile {s:?}"));
        let inner = s.strip_prefix("desk(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (mut c1, mut c2) = RectProfile::default().constants();
        for kv in inner.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "c1" => c1 = v,
                "c2" => c2 = v,
                _ => return Err(bad()),
            }
        }
        Ok(RectProfile::Desk { c1, c2 })
    }
}

/// How the decomposition ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RectCase {
    /// A wide rich rectangle on the input itself.
    #[serde(rename = "case1")]
    Case1,
    /// A wide rich rectangle after one or more deletion rounds.
    #[serde(rename = "case2-iterated")]
    Case2Iterated,
    /// Deletions ran out of elements before a wide rectangle appeared.
    #[serde(rename = "exhausted")]
    Exhausted,
}

fn display_vec<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `A_i × A_i^j` with its number of points of `𝒫`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Rectangle<T: Ground> {
    pub i: u32,
    pub j: u32,
    #[serde(serialize_with = "display_vec")]
    pub base: Vec<T>,
    #[serde(serialize_with = "display_vec")]
    pub height: Vec<T>,
    pub points: u64,
    pub rich: bool,
}

/// One deletion round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Round {
    /// Size of the set before the round.
    pub size: usize,
    #[serde(with = "crate::decimal")]
    pub energy: BigUint,
    pub points: u64,
    pub removed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct RectCover<T: Ground> {
    pub profile: String,
    /// `L = ⌊log2 |A|⌋ + 1`.
    pub log_len: u32,
    /// Lower end of the dyadic level of `Ã`.
    pub delta: u64,
    #[serde(serialize_with = "display_vec")]
    pub p_members: Vec<T>,
    /// `|𝒫(Ã)|`.
    pub points: u64,
    pub rectangles: Vec<Rectangle<T>>,
    pub case: RectCase,
    /// The set the final cover was built on.
    #[serde(serialize_with = "display_vec")]
    pub a_tilde: Vec<T>,
    #[serde(serialize_with = "display_vec")]
    pub a_prime: Vec<T>,
    #[serde(serialize_with = "display_vec")]
    pub a_dprime: Vec<T>,
    pub q: u64,
    /// Index of the chosen rectangle in case 1.
    pub chosen: Option<usize>,
    pub rounds: Vec<Round>,
}

impl<T: Ground> RectCover<T> {
    /// Points of `𝒫` inside rich rectangles.
    pub fn covered_mass(&self) -> u64 {
        self.rectangles.iter().filter(|r| r.rich).map(|r| r.points).sum()
    }

    pub fn found(&self) -> bool {
        self.case != RectCase::Exhausted
    }
}

/// `𝒫` of one set, with the cover and the per-abscissa class data.
struct Cover<T: Ground> {
    delta: u64,
    p_members: Vec<T>,
    points: Vec<(usize, usize)>,
    rectangles: Vec<Rectangle<T>>,
    /// Rectangle index of each point.
    owner: Vec<usize>,
}

fn class_of(deg: u64) -> u32 {
    deg.ilog2() + 1
}

fn build_cover<T: Ground>(el: &[T], log_len: u32) -> Cover<T> {
    let set = GSet::from_elements(el.iter().cloned()).expect("subset of a valid set");
    let level = energy::dyadic_level_from_table(&difference_table(&set));
    let pset: FxHashSet<&T> = level.members.iter().collect();
    let m = el.len();
    let mut points = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if pset.contains(&el[i].minus(&el[j])) {
                points.push((i, j));
            }
        }
    }
    let mut deg = vec![0u64; m];
    for &(i, _) in &points {
        deg[i] += 1;
    }
    // Ordinate degrees within each abscissa class.
    let mut inner: FxHashMap<(u32, usize), u64> = FxHashMap::default();
    for &(i, j) in &points {
        *inner.entry((class_of(deg[i]), j)).or_insert(0) += 1;
    }
    let mut index: FxHashMap<(u32, u32), usize> = FxHashMap::default();
    let mut keys: Vec<(u32, u32)> = points
        .iter()
        .map(|&(i, j)| {
            let c = class_of(deg[i]);
            (c, class_of(inner[&(c, j)]))
        })
        .collect();
    let owner_keys = keys.clone();
    keys.sort_unstable();
    keys.dedup();
    let mut rectangles: Vec<Rectangle<T>> = Vec::new();
    for &(c, k) in &keys {
        index.insert((c, k), rectangles.len());
        let base = (0..m).filter(|&i| deg[i] > 0 && class_of(deg[i]) == c).map(|i| el[i].clone()).collect();
        let height = (0..m)
            .filter(|&j| inner.get(&(c, j)).is_some_and(|&d| class_of(d) == k))
            .map(|j| el[j].clone())
            .collect();
        rectangles.push(Rectangle { i: c, j: k, base, height, points: 0, rich: false });
    }
    let owner: Vec<usize> = owner_keys.iter().map(|k| index[k]).collect();
    for &o in &owner {
        rectangles[o].points += 1;
    }
    let total = points.len() as u128;
    let l2 = (log_len as u128).pow(2);
    for r in &mut rectangles {
        r.rich = 2 * l2 * r.points as u128 >= total;
    }
    Cover { delta: level.delta, p_members: level.members, points, rectangles, owner }
}

/// Runs the case analysis: look for a wide rich rectangle; if there is
/// none, delete the index sets of all rich rectangles and repeat, at most
/// `L^5` times.
pub fn rect_decompose<T: Ground>(a: &GSet<T>, profile: RectProfile) -> Result<RectCover<T>> {
    let n = a.len();
    if n < 4 {
        return Err(Error::DegenerateInput(format!("rectangle decomposition needs |A| >= 4, got {n}")));
    }
    guard("|A|^2 points for the rectangle cover", (n as u128).pow(2), 4_000_000)?;
    let log_len = n.ilog2() + 1;
    let (c1, c2) = profile.constants();
    let width = c1 * n as f64 / (log_len as f64).powf(c2);
    let max_rounds = (log_len as u64).pow(5);
    let mut cur: Vec<T> = a.elements().to_vec();
    let mut rounds = Vec::new();
    loop {
        let cover = build_cover(&cur, log_len);
        let total = cover.points.len() as u64;
        let chosen = cover
            .rectangles
            .iter()
            .enumerate()
            .filter(|(_, r)| r.rich && r.base.len() as f64 >= width)
            .fold(None::<(usize, &Rectangle<T>)>, |best, (k, r)| match best {
                Some((_, b)) if (b.base.len(), b.points) >= (r.base.len(), r.points) => best,
                _ => Some((k, r)),
            })
            .map(|(k, _)| k);
        if let Some(k) = chosen {
            let r = &cover.rectangles[k];
            let l2 = (log_len as u64).pow(2);
            let q = (total / (16 * r.base.len() as u64 * l2)).max(1);
            let pos: FxHashMap<&T, usize> = cur.iter().enumerate().map(|(i, x)| (x, i)).collect();
            let mut per: FxHashMap<usize, u64> = FxHashMap::default();
            for (pt, &o) in cover.points.iter().zip(&cover.owner) {
                if o == k {
                    *per.entry(pt.0).or_insert(0) += 1;
                }
            }
            let a_prime: Vec<T> =
                r.base.iter().filter(|x| per.get(&pos[x]).copied().unwrap_or(0) >= q).cloned().collect();
            let case = if rounds.is_empty() { RectCase::Case1 } else { RectCase::Case2Iterated };
            return Ok(RectCover {
                profile: profile.to_string(),
                log_len,
                delta: cover.delta,
                p_members: cover.p_members,
                points: total,
                a_dprime: r.height.clone(),
                rectangles: cover.rectangles,
                case,
                a_tilde: cur,
                a_prime,
                q,
                chosen: Some(k),
                rounds,
            });
        }
        let remove: FxHashSet<T> = cover
            .rectangles
            .iter()
            .filter(|r| r.rich)
            .flat_map(|r| r.base.iter().chain(r.height.iter()).cloned())
            .collect();
        let set = GSet::from_elements(cur.iter().cloned())?;
        rounds.push(Round { size: cur.len(), energy: energy::energy(&set), points: total, removed: remove.len() });
        let next: Vec<T> = cur.iter().filter(|x| !remove.contains(*x)).cloned().collect();
        if next.len() < 2 || rounds.len() as u64 >= max_rounds {
            return Ok(RectCover {
                profile: profile.to_string(),
                log_len,
                delta: cover.delta,
                p_members: cover.p_members,
                points: total,
                rectangles: cover.rectangles,
                case: RectCase::Exhausted,
                a_tilde: cur,
                a_prime: Vec::new(),
                a_dprime: Vec::new(),
                q: 0,
                chosen: None,
                rounds,
            });
        }
        cur = next;
    }
}

fn mismatch(what: &'static str, left: impl ToString, right: impl ToString) -> Error {
    Error::CrossCheckMismatch { what, left: left.to_string(), right: right.to_string() }
}

/// Re-derives `𝒫(Ã)` and re-checks every structural claim of `cover`:
/// the rectangles partition `𝒫`, rich ones hold at least half of it,
/// `2^i |A_i| <= 2|𝒫|` for every class, and in case 1 each `a ∈ A'` has at
/// least `q` points in `A' × A''` with `q |A_i| <= 2|𝒫|`.
pub fn verify_rect<T: Ground>(a: &GSet<T>, cover: &RectCover<T>) -> Result<()> {
    let lookup = a.lookup();
    if !cover.a_tilde.iter().all(|x| lookup.contains(x)) {
        return Err(mismatch("Ã ⊆ A", "Ã", "not a subset"));
    }
    let tilde = GSet::from_elements(cover.a_tilde.iter().cloned())?;
    let level = energy::dyadic_level_from_table(&difference_table(&tilde));
    if level.members != cover.p_members || level.delta != cover.delta {
        return Err(mismatch("dyadic level", cover.delta, level.delta));
    }
    let pset: FxHashSet<&T> = level.members.iter().collect();
    let in_p = |x: &T, y: &T| pset.contains(&x.minus(y));
    let mut total = 0u64;
    for x in tilde.iter() {
        for y in tilde.iter() {
            total += in_p(x, y) as u64;
        }
    }
    if total != cover.points {
        return Err(mismatch("|𝒫|", cover.points, total));
    }
    // Partition: recount each rectangle and require disjointness.
    let mut seen_base: FxHashMap<&T, u32> = FxHashMap::default();
    let mut sum = 0u64;
    for r in &cover.rectangles {
        let mut count = 0u64;
        for x in &r.base {
            for y in &r.height {
                count += in_p(x, y) as u64;
            }
        }
        if count != r.points {
            return Err(mismatch("rectangle points", r.points, count));
        }
        for x in &r.base {
            if *seen_base.entry(x).or_insert(r.i) != r.i {
                return Err(mismatch("disjoint abscissa classes", r.i, x.to_string()));
            }
        }
        sum += count;
    }
    for (i, r) in cover.rectangles.iter().enumerate() {
        for s in &cover.rectangles[i + 1..] {
            if s.i == r.i && s.j == r.j {
                return Err(mismatch("distinct rectangle indices", r.i, r.j));
            }
            if s.i == r.i && s.height.iter().any(|y| r.height.contains(y)) {
                return Err(mismatch("disjoint ordinate classes", r.j, s.j));
            }
        }
    }
    if sum != total {
        return Err(mismatch("rectangles partition 𝒫", sum, total));
    }
    if 2 * cover.covered_mass() < total {
        return Err(mismatch("rich mass >= |𝒫|/2", cover.covered_mass(), total));
    }
    let mut classes: FxHashMap<u32, usize> = FxHashMap::default();
    for r in &cover.rectangles {
        classes.insert(r.i, r.base.len());
    }
    for (&i, &size) in &classes {
        if (1u128 << i) * size as u128 > 2 * total as u128 {
            return Err(mismatch("q_i |A_i| <= 2|𝒫|", (1u128 << i) * size as u128, 2 * total));
        }
    }
    if let Some(k) = cover.chosen {
        let r = &cover.rectangles[k];
        if cover.a_prime.is_empty() || !cover.a_prime.iter().all(|x| r.base.contains(x)) || cover.a_dprime != r.height {
            return Err(mismatch("A' ⊆ A_i, A'' = A_i^j", cover.a_prime.len(), r.base.len()));
        }
        for x in &cover.a_prime {
            let c = cover.a_dprime.iter().filter(|y| in_p(x, y)).count() as u64;
            if c < cover.q {
                return Err(mismatch("points per a ∈ A'", c, cover.q));
            }
        }
        if cover.q as u128 * r.base.len() as u128 > 2 * total as u128 {
            return Err(mismatch("q |A_i| <= 2|𝒫|", cover.q as u128 * r.base.len() as u128, 2 * total));
        }
    }
    Ok(())
}

/// Quantities of the sum-set construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SumStats<T: Ground> {
    /// `E^× = Σ_λ |A'_λ|^2`.
    #[serde(with = "crate::decimal")]
    pub e_times: BigUint,
    /// `λ ↦ |A'_λ|` over `λ ∈ A/A` with `A'_λ` nonempty.
    #[serde(serialize_with = "display_pairs")]
    pub lambda_profile: Vec<(T, u64)>,
    /// `λ ↦ |Q_λ|`.
    #[serde(serialize_with = "display_pairs")]
    pub q_sizes: Vec<(T, u64)>,
    pub base_len: usize,
    pub a_prime_len: usize,
    pub quotient_len: usize,
    pub p_len: usize,
    /// `Σ_λ |Q_λ|^3`.
    #[serde(with = "crate::decimal")]
    pub q_cubes: BigUint,
    /// `Σ_λ |A_λ| = |A|^2`.
    pub ener1_full: bool,
    /// `Σ_λ |A'_λ| = |A||A'|`.
    pub ener1_prime: bool,
    /// `E^× |A/A| >= (|A||A'|)^2`.
    pub cs_holds: bool,
    /// Every point of `Q_λ` satisfies `y - λx ∈ P`, so `Q_λ` meets at most `|P|` lines.
    pub lines_hold: bool,
    /// `|P|^2 Σ_c k_c^3 >= |Q_λ|^3` for every `λ`.
    pub holder_holds: bool,
}

fn display_pairs<T: fmt::Display, S: Serializer>(v: &[(T, u64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(x, c)| (x.to_string(), *c)))
}

impl<T: Ground> SumStats<T> {
    pub fn all_hold(&self) -> bool {
        self.ener1_full && self.ener1_prime && self.cs_holds && self.lines_hold && self.holder_holds
    }
}

/// Builds `A'_λ`, `E^×` and the point sets
/// `Q_λ = {(a' + b, a + λb) : a ∈ A'', a', b ∈ A'_λ, a - λa' ∈ P}`
/// from a case-1 cover, or from `A' = A'' = A` when there is none.
pub fn sum_construction_stats<T: Ground>(a: &GSet<T>, cover: Option<&RectCover<T>>) -> Result<SumStats<T>> {
    let (base, a_prime, a_dprime, p_members) = match cover {
        Some(c) if c.found() => (c.a_tilde.clone(), c.a_prime.clone(), c.a_dprime.clone(), c.p_members.clone()),
        _ => {
            let level = energy::dyadic_energy_level(a)?;
            (a.elements().to_vec(), a.elements().to_vec(), a.elements().to_vec(), level.members)
        }
    };
    let base = GSet::from_elements(base)?;
    let quotients = product_set(&base, &base, Op::Div)?;
    guard("|A/A| for the sum construction", quotients.len() as u128, 10_000)?;
    let in_base = base.lookup();
    let in_prime: FxHashSet<&T> = a_prime.iter().collect();
    let pset: FxHashSet<&T> = p_members.iter().collect();

    let mut full_sum = 0u64;
    let mut prime_sum = 0u64;
    let mut e_times = 0u128;
    let mut slices: Vec<(T, Vec<T>)> = Vec::new();
    for lam in quotients.iter() {
        let mut slice = Vec::new();
        for x in base.iter() {
            let y = lam.times(x);
            full_sum += in_base.contains(&y) as u64;
            if in_prime.contains(&y) {
                slice.push(x.clone());
            }
        }
        prime_sum += slice.len() as u64;
        e_times += (slice.len() as u128).pow(2);
        if !slice.is_empty() {
            slices.push((lam.clone(), slice));
        }
    }
    let work: u128 = slices.iter().map(|(_, s)| (s.len() as u128).pow(2) * a_dprime.len() as u128).sum();
    guard("points generated for Q_λ", work, 50_000_000)?;

    let (n, np) = (base.len() as u128, a_prime.len() as u128);
    let mut lines_hold = true;
    let mut holder_holds = true;
    let mut q_sizes = Vec::with_capacity(slices.len());
    let mut q_cubes = BigUint::default();
    for (lam, slice) in &slices {
        let mut q: FxHashSet<(T, T)> = FxHashSet::default();
        for a1 in slice {
            let la1 = lam.times(a1);
            for a in &a_dprime {
                if !pset.contains(&a.minus(&la1)) {
                    continue;
                }
                for b in slice {
                    q.insert((a1.plus(b), a.plus(&lam.times(b))));
                }
            }
        }
        let mut per_line: FxHashMap<T, u64> = FxHashMap::default();
        for (x, y) in &q {
            let c = y.minus(&lam.times(x));
            lines_hold &= pset.contains(&c);
            *per_line.entry(c).or_insert(0) += 1;
        }
        lines_hold &= per_line.len() <= p_members.len();
        let cubes: u128 = per_line.values().map(|&k| (k as u128).pow(3)).sum();
        let size = q.len() as u128;
        holder_holds &= BigUint::from(cubes) * BigUint::from(p_members.len()).pow(2) >= BigUint::from(size).pow(3);
        q_cubes += BigUint::from(size).pow(3);
        q_sizes.push((lam.clone(), q.len() as u64));
    }
    Ok(SumStats {
        e_times: BigUint::from(e_times),
        lambda_profile: slices.iter().map(|(l, s)| (l.clone(), s.len() as u64)).collect(),
        q_sizes,
        base_len: base.len(),
        a_prime_len: a_prime.len(),
        quotient_len: quotients.len(),
        p_len: p_members.len(),
        q_cubes,
        ener1_full: full_sum as u128 == n * n,
        ener1_prime: prime_sum as u128 == n * np,
        cs_holds: BigUint::from(e_times) * BigUint::from(quotients.len()) >= BigUint::from(n * np).pow(2),
        lines_hold,
        holder_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> GSet<crate::Rational> {
        GSet::from_integers(xs).unwrap()
    }

    #[test]
    fn profiles_parse() {
        assert_eq!("paper".parse::<RectProfile>().unwrap().constants(), (1.0, 10.0));
        assert_eq!("desk".parse::<RectProfile>().unwrap(), RectProfile::default());
        assert_eq!("desk(c1=0.5, c2=1)".parse::<RectProfile>().unwrap().constants(), (0.5, 1.0));
        assert!("desk(c3=1)".parse::<RectProfile>().is_err());
    }

    #[test]
    fn too_small() {
        assert!(matches!(rect_decompose(&ints(&[1, 2, 3]), RectProfile::default()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn interval_cover() {
        let a = ints(&(1..=64).collect::<Vec<_>>());
        let c = rect_decompose(&a, RectProfile::default()).unwrap();
        assert_eq!(c.case, RectCase::Case1);
        assert!(2 * c.covered_mass() >= c.points);
        assert!(!c.a_prime.is_empty());
        verify_rect(&a, &c).unwrap();
        let base = c.rectangles[c.chosen.unwrap()].base.len() as u64;
        assert!(c.q * base <= 2 * c.points);
    }

    #[test]
    fn deletion_exhausts() {
        let a = ints(&[1, 2, 4, 8, 16, 32, 64, 128]);
        let c = rect_decompose(&a, RectProfile::Desk { c1: 2.0, c2: 0.0 }).unwrap();
        assert_eq!(c.case, RectCase::Exhausted);
        assert!(!c.rounds.is_empty());
        verify_rect(&a, &c).unwrap();
    }

    #[test]
    fn tampered_cover_rejected() {
        let a = ints(&[1, 2, 3, 5, 8, 13, 21]);
        let mut c = rect_decompose(&a, RectProfile::default()).unwrap();
        c.q += 1000;
        assert!(verify_rect(&a, &c).is_err());
        let mut c = rect_decompose(&a, RectProfile::default()).unwrap();
        c.rectangles[0].points += 1;
        assert!(verify_rect(&a, &c).is_err());
    }

    #[test]
    fn fallback_identities() {
        let a = ints(&[1, 2, 4]);
        let s = sum_construction_stats(&a, None).unwrap();
        assert_eq!(s.lambda_profile.iter().map(|(_, c)| c).sum::<u64>(), 9);
        assert!(s.all_hold());
        // A' = A: E^× is the multiplicative energy of {1,2,4}.
        assert_eq!(s.e_times, BigUint::from(19u32));
    }

    #[test]
    fn geometric_points_on_lines() {
        let a = ints(&[1, 2, 4, 8, 16, 32, 64, 128]);
        let c = rect_decompose(&a, RectProfile::default()).unwrap();
        let s = sum_construction_stats(&a, Some(&c)).unwrap();
        assert!(s.lines_hold && s.holder_holds && s.cs_holds && s.ener1_prime);
        assert_eq!(s.base_len, 8);
    }
}
