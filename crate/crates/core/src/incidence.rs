//! Lines through points of Cartesian grids `X × Y`.
//!
//! Points are grouped by direction around each anchor. Rational coordinates
//! are scaled by the lcm of their denominators first, so direction keys are
//! reduced integer pairs; residues use `dy / dx` looked up in an inverse table.

use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::ground::{inv_mod, Ground, ModP, Rational};
use crate::setops::GSet;
use crate::subgroups::SubgroupCtx;
use crate::{guard, Error, Result};

/// Default bound on the number of grid points.
pub const GRID_GUARD: usize = 100_000;

/// Cap on `N^2` for [`line_profile`], which keeps every line in memory.
pub const PROFILE_GUARD: u128 = 9_000_000;

/// Which degenerate triples `𝒯` counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TripleConvention {
    /// Ordered triples of pairwise-distinct collinear points: `Σ_L k(k-1)(k-2)`.
    #[default]
    Distinct,
    /// Ordered triples from one line, repeats allowed, over lines with at
    /// least two points: `Σ_{L: k>=2} k^3`.
    WithRepeats,
}

/// The line `ax + by = c`: integer coefficients with `gcd(a,b,c) = 1` and
/// first nonzero coefficient positive for rational grids; residues with the
/// first nonzero of `(a, b)` equal to 1 for grids mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// Embedded coordinates of the union of the axes of a grid.
#[derive(Debug, Clone)]
pub enum Coords {
    /// Rationals times `scale`, all fitting comfortably in `i64`.
    Ints { vals: Vec<i64>, scale: BigInt },
    /// Rationals times `scale` that do not fit the fast path.
    Big { vals: Vec<BigInt>, scale: BigInt },
    Mod { vals: Vec<u64>, p: u64 },
}

/// Ground types whose grids can be scanned for collinear points.
pub trait Incidence: Ground {
    fn embed(xs: &[Self]) -> Coords;
}

impl Incidence for Rational {
    fn embed(xs: &[Self]) -> Coords {
        let scale = xs.iter().fold(BigInt::one(), |l, x| l.lcm(&x.denom()));
        let vals: Vec<BigInt> = xs.iter().map(|x| x.numer() * (&scale / x.denom())).collect();
        let limit = BigInt::from(1i64 << 61);
        if vals.iter().all(|v| v.abs() < limit) {
            Coords::Ints { vals: vals.iter().map(|v| v.to_i64().expect("checked range")).collect(), scale }
        } else {
            Coords::Big { vals, scale }
        }
    }
}

impl Incidence for ModP {
    fn embed(xs: &[Self]) -> Coords {
        let p = xs.first().map(|x| x.modulus()).unwrap_or(2);
        Coords::Mod { vals: xs.iter().map(|x| x.value()).collect(), p }
    }
}

/// A grid with its axes embedded in a common coordinate system.
struct Grid {
    coords: Coords,
    nx: usize,
    ny: usize,
}

impl Grid {
    fn new<T: Incidence>(x: &GSet<T>, y: &GSet<T>) -> Result<Self> {
        x.check_same(y)?;
        let mut all: Vec<T> = x.elements().to_vec();
        all.extend_from_slice(y.elements());
        Ok(Grid { coords: T::embed(&all), nx: x.len(), ny: y.len() })
    }

    fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    fn split(&self, i: usize) -> (usize, usize) {
        (i / self.ny, self.nx + i % self.ny)
    }
}

#[inline]
fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[inline]
fn int_direction(dx: i64, dy: i64) -> (i64, i64) {
    let g = gcd_u64(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
    let (dx, dy) = (dx / g, dy / g);
    if dx < 0 || (dx == 0 && dy < 0) {
        (-dx, -dy)
    } else {
        (dx, dy)
    }
}

fn big_direction(dx: BigInt, dy: BigInt) -> (BigInt, BigInt) {
    let g = dx.gcd(&dy);
    let (dx, dy) = (dx / &g, dy / &g);
    if dx.is_negative() || (dx.is_zero() && dy.is_negative()) {
        (-dx, -dy)
    } else {
        (dx, dy)
    }
}

/// Per-anchor group of other points sharing a direction: size and the
/// smallest index seen.
#[derive(Clone, Copy)]
struct Group {
    count: u64,
    min_other: usize,
}

/// Calls `visit(anchor, groups)` for each grid point, where `groups` lists
/// the direction classes of all other points.
fn scan_anchors<K: Hash + Eq>(grid: &Grid, key: impl Fn(usize, usize) -> K, mut visit: impl FnMut(usize, &mut dyn Iterator<Item = Group>)) {
    let n = grid.len();
    let mut groups: FxHashMap<K, Group> = FxHashMap::default();
    for i in 0..n {
        groups.clear();
        for j in 0..n {
            if j == i {
                continue;
            }
            groups
                .entry(key(i, j))
                .and_modify(|g| g.count += 1)
                .or_insert(Group { count: 1, min_other: j });
        }
        visit(i, &mut groups.values().copied());
    }
}

/// Runs `visit` over anchors using the cheapest key type for the embedding.
fn scan_grid(grid: &Grid, mut visit: impl FnMut(usize, &mut dyn Iterator<Item = Group>)) {
    match &grid.coords {
        Coords::Ints { vals, .. } => {
            let key = |i: usize, j: usize| {
                let (xi, yi) = grid.split(i);
                let (xj, yj) = grid.split(j);
                int_direction(vals[xj] - vals[xi], vals[yj] - vals[yi])
            };
            scan_anchors(grid, key, &mut visit);
        }
        Coords::Big { vals, .. } => {
            let key = |i: usize, j: usize| {
                let (xi, yi) = grid.split(i);
                let (xj, yj) = grid.split(j);
                big_direction(&vals[xj] - &vals[xi], &vals[yj] - &vals[yi])
            };
            scan_anchors(grid, key, &mut visit);
        }
        Coords::Mod { vals, p } => scan_mod(grid, vals, *p, &mut visit),
    }
}

/// Slope buckets in a flat array indexed by `dy/dx ∈ F_p`, with `p` for vertical.
fn scan_mod(grid: &Grid, vals: &[u64], p: u64, visit: &mut dyn FnMut(usize, &mut dyn Iterator<Item = Group>)) {
    let inv: Vec<u64> = (0..p).map(|x| if x == 0 { 0 } else { inv_mod(x, p).expect("prime modulus") }).collect();
    let n = grid.len();
    let mut buckets: Vec<Group> = vec![Group { count: 0, min_other: 0 }; p as usize + 1];
    let mut touched: Vec<usize> = Vec::new();
    for i in 0..n {
        let (xi, yi) = grid.split(i);
        for j in 0..n {
            if j == i {
                continue;
            }
            let (xj, yj) = grid.split(j);
            let dx = (vals[xj] + p - vals[xi]) % p;
            let dy = (vals[yj] + p - vals[yi]) % p;
            let s = if dx == 0 { p as usize } else { (dy as u128 * inv[dx as usize] as u128 % p as u128) as usize };
            let g = &mut buckets[s];
            if g.count == 0 {
                touched.push(s);
                g.min_other = j;
            }
            g.count += 1;
        }
        visit(i, &mut touched.iter().map(|&s| buckets[s]));
        for &s in &touched {
            buckets[s].count = 0;
        }
        touched.clear();
    }
}

/// `(Σ_L k(k-1)(k-2), Σ_{L: k>=2} k^3)` over lines of the grid `X × Y`.
pub fn triple_sums<T: Incidence>(x: &GSet<T>, y: &GSet<T>, max_grid: usize) -> Result<(u128, u128)> {
    let grid = Grid::new(x, y)?;
    guard("grid points", grid.len() as u128, max_grid as u128)?;
    let (mut distinct, mut repeats) = (0u128, 0u128);
    scan_grid(&grid, |_, groups| {
        for g in groups {
            let c = g.count as u128;
            distinct += c * (c - 1);
            repeats += (c + 1) * (c + 1);
        }
    });
    Ok((distinct, repeats))
}

/// `𝒯(X)` for the grid `X × X`.
pub fn collinear_triples<T: Incidence>(x: &GSet<T>) -> Result<u128> {
    collinear_triples_with(x, TripleConvention::Distinct, GRID_GUARD)
}

pub fn collinear_triples_with<T: Incidence>(x: &GSet<T>, conv: TripleConvention, max_grid: usize) -> Result<u128> {
    let (d, r) = triple_sums(x, x, max_grid)?;
    Ok(match conv {
        TripleConvention::Distinct => d,
        TripleConvention::WithRepeats => r,
    })
}

/// Lines through at least two points of a grid, with their point counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineProfile {
    /// Sorted by key.
    pub lines: Vec<(LineKey, u64)>,
    /// Number of grid points.
    pub points: u64,
}

impl LineProfile {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// `Σ_L k(k-1)`, which must equal `N(N-1)`.
    pub fn pair_count(&self) -> u128 {
        self.lines.iter().map(|(_, k)| *k as u128 * (*k as u128 - 1)).sum()
    }

    pub fn triples(&self, conv: TripleConvention) -> u128 {
        self.lines
            .iter()
            .map(|(_, k)| {
                let k = *k as u128;
                match conv {
                    TripleConvention::Distinct => k * (k - 1) * (k - 2),
                    TripleConvention::WithRepeats => k * k * k,
                }
            })
            .sum()
    }

    /// CSV with columns `a,b,c,k`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["a", "b", "c", "k"]).expect("in-memory write");
        for (l, k) in &self.lines {
            w.write_record([l.a.to_string(), l.b.to_string(), l.c.to_string(), k.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

fn line_key(grid: &Grid, i: usize, j: usize) -> LineKey {
    let (xi, yi) = grid.split(i);
    let (xj, yj) = grid.split(j);
    match &grid.coords {
        Coords::Ints { vals, scale } => {
            let v = |k: usize| BigInt::from(vals[k]);
            int_line(v(xi), v(yi), v(xj), v(yj), scale)
        }
        Coords::Big { vals, scale } => int_line(vals[xi].clone(), vals[yi].clone(), vals[xj].clone(), vals[yj].clone(), scale),
        Coords::Mod { vals, p } => {
            let p = *p;
            let a = (vals[yj] + p - vals[yi]) % p;
            let b = (vals[xi] + p - vals[xj]) % p;
            let c = ((a as u128 * vals[xi] as u128 + b as u128 * vals[yi] as u128) % p as u128) as u64;
            let lead = if a != 0 { a } else { b };
            let s = inv_mod(lead, p).expect("distinct points");
            let m = |v: u64| BigInt::from((v as u128 * s as u128 % p as u128) as u64);
            LineKey { a: m(a), b: m(b), c: m(c) }
        }
    }
}

// Points are in scaled coordinates X = scale·x; the key is in the original ones.
fn int_line(x0: BigInt, y0: BigInt, x1: BigInt, y1: BigInt, scale: &BigInt) -> LineKey {
    let a = &y1 - &y0;
    let b = &x0 - &x1;
    let c = &a * &x0 + &b * &y0;
    let (a, b) = (a * scale, b * scale);
    let g = a.gcd(&b).gcd(&c);
    let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
        c = -c;
    }
    LineKey { a, b, c }
}

/// Every line through at least two points of `X × Y`.
pub fn line_profile<T: Incidence>(x: &GSet<T>, y: &GSet<T>, max_grid: usize) -> Result<LineProfile> {
    let grid = Grid::new(x, y)?;
    guard("grid points", grid.len() as u128, max_grid as u128)?;
    // Up to N^2/2 stored lines.
    guard("point pairs for a stored line profile", (grid.len() as u128).pow(2), PROFILE_GUARD)?;
    let mut lines = Vec::new();
    scan_grid(&grid, |i, groups| {
        for g in groups {
            // Record each line once, from its smallest point.
            if g.min_other > i {
                lines.push((line_key(&grid, i, g.min_other), g.count + 1));
            }
        }
    });
    lines.sort_unstable();
    Ok(LineProfile { lines, points: grid.len() as u64 })
}

/// `Σ_d k_d^3` over the unit-slope lines `y = x + d` meeting `A × A`,
/// read off the line profile. Lines through a single point are the grid
/// points not covered by richer unit-slope lines.
pub fn unit_slope_cubes<T: Incidence>(a: &GSet<T>, max_grid: usize) -> Result<u128> {
    let prof = line_profile(a, a, max_grid)?;
    let unit = |l: &LineKey| match a.universe().modulus() {
        None => l.a == -l.b.clone() && !l.a.is_zero(),
        Some(p) => !l.a.is_zero() && ((&l.a + &l.b) % BigInt::from(p)).is_zero(),
    };
    let (mut cubes, mut covered) = (0u128, 0u128);
    for (l, k) in &prof.lines {
        if unit(l) {
            cubes += (*k as u128).pow(3);
            covered += *k as u128;
        }
    }
    Ok(cubes + (prof.points as u128 - covered))
}

/// `l_{u,v} = |{(x, y) ∈ Γ × Γ : ux + vy = 1}|`.
pub fn subgroup_line_count(ctx: &SubgroupCtx, u: u64, v: u64) -> Result<u64> {
    let p = ctx.p();
    let (u, v) = (u % p, v % p);
    if u == 0 || v == 0 {
        return Err(Error::ZeroCoefficient);
    }
    let vinv = inv_mod(v, p).expect("prime modulus");
    Ok(ctx
        .gamma()
        .iter()
        .filter(|&&x| {
            let y = ((1 + p - (u as u128 * x as u128 % p as u128) as u64) % p) as u128 * vinv as u128 % p as u128;
            ctx.contains(y as u64)
        })
        .count() as u64)
}

/// `Σ_{(u,v)} l_{u,v}^exponent` over the given pairs.
pub fn subgroup_line_counts(ctx: &SubgroupCtx, pairs: &[(u64, u64)], exponent: u32) -> Result<num_bigint::BigUint> {
    let mut acc = crate::energy::BigAcc::default();
    for &(u, v) in pairs {
        let l = subgroup_line_count(ctx, u, v)? as u128;
        acc.add(l.pow(exponent));
    }
    Ok(acc.finish())
}

/// `𝒯(Γ)` for a subgroup, using that `(x, y) ↦ (γx, γy)` permutes the lines of
/// `Γ × Γ`: only anchors `(1, y)` are scanned and the total is scaled by `t`.
pub fn subgroup_collinear_triples(ctx: &SubgroupCtx, conv: TripleConvention) -> Result<u128> {
    let (p, t) = (ctx.p(), ctx.t());
    guard("t^3 for subgroup triples", (t as u128).pow(3), 8_000_000_000)?;
    guard("p for the inverse table", p as u128, crate::subgroups::COSET_TABLE_LIMIT as u128)?;
    let mut inv = vec![0u64; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for i in 2..p {
        inv[i as usize] = (p - (p / i) * inv[(p % i) as usize] % p) % p;
    }
    let gamma = ctx.gamma();
    let mut buckets = vec![0u64; p as usize + 1];
    let mut touched: Vec<usize> = Vec::new();
    let mut per_orbit = 0u128;
    for &y in gamma {
        for &x2 in gamma {
            for &y2 in gamma {
                if x2 == 1 && y2 == y {
                    continue;
                }
                let dx = (x2 + p - 1) % p;
                let dy = (y2 + p - y) % p;
                let key = if dx == 0 { p as usize } else { (dy as u128 * inv[dx as usize] as u128 % p as u128) as usize };
                if buckets[key] == 0 {
                    touched.push(key);
                }
                buckets[key] += 1;
            }
        }
        for &k in &touched {
            let c = buckets[k] as u128;
            per_orbit += match conv {
                TripleConvention::Distinct => c * (c - 1),
                TripleConvention::WithRepeats => (c + 1) * (c + 1),
            };
            buckets[k] = 0;
        }
        touched.clear();
    }
    Ok(per_orbit * t as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[i64]) -> GSet<Rational> {
        GSet::from_integers(xs).unwrap()
    }

    #[test]
    fn small_grids() {
        let p = line_profile(&s(&[1, 2]), &s(&[1, 2]), GRID_GUARD).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.lines.iter().all(|(_, k)| *k == 2));
        let p = line_profile(&s(&[1, 2, 3]), &s(&[1, 2, 3]), GRID_GUARD).unwrap();
        assert_eq!(p.lines.iter().filter(|(_, k)| *k == 3).count(), 8);
        assert_eq!(p.pair_count(), 72);
    }

    #[test]
    fn triple_examples() {
        assert_eq!(collinear_triples(&s(&[1, 2])).unwrap(), 0);
        assert_eq!(collinear_triples(&s(&[1, 2, 3])).unwrap(), 48);
        let p = line_profile(&s(&[1, 2, 3]), &s(&[1, 2, 3]), GRID_GUARD).unwrap();
        for conv in [TripleConvention::Distinct, TripleConvention::WithRepeats] {
            assert_eq!(p.triples(conv), collinear_triples_with(&s(&[1, 2, 3]), conv, GRID_GUARD).unwrap());
        }
    }

    #[test]
    fn rational_and_residue_keys() {
        let half = GSet::new(
            crate::Universe::Rational,
            [1, 2, 3].iter().map(|&n| Rational::normalize(n, 2).unwrap()),
        )
        .unwrap();
        // Scaling both axes does not change collinearity.
        assert_eq!(collinear_triples(&half).unwrap(), 48);
        let p = line_profile(&half, &half, GRID_GUARD).unwrap();
        let diag = LineKey { a: 1.into(), b: (-1).into(), c: 0.into() };
        assert!(p.lines.iter().any(|(l, k)| *l == diag && *k == 3));

        let r = GSet::from_residues(5, &[1, 2, 3, 4]).unwrap();
        let prof = line_profile(&r, &r, GRID_GUARD).unwrap();
        assert_eq!(prof.pair_count(), 16 * 15);
        assert!(prof.lines.iter().all(|(l, _)| l.a == BigInt::one() || (l.a.is_zero() && l.b == BigInt::one())));
    }

    #[test]
    fn guard_trips() {
        let a = s(&(1..=20).collect::<Vec<_>>());
        assert!(matches!(line_profile(&a, &a, 100), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn csv_export() {
        let p = line_profile(&s(&[1, 2]), &s(&[1, 2]), GRID_GUARD).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("a,b,c,k\n"));
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn subgroup_orbit_route() {
        for (p, t) in [(7, 3), (13, 4), (31, 5), (37, 6), (101, 10)] {
            let ctx = crate::subgroups::subgroup_context(p, t).unwrap();
            for conv in [TripleConvention::Distinct, TripleConvention::WithRepeats] {
                let direct = collinear_triples_with(&ctx.gamma_set(), conv, GRID_GUARD).unwrap();
                assert_eq!(subgroup_collinear_triples(&ctx, conv).unwrap(), direct, "p={p} t={t}");
            }
        }
    }
}
