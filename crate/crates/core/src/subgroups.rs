//! Multiplicative subgroups `Γ ≤ F_p^*` and their cosets `Γ_j = g^j Γ`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::ground::{inv_mod, is_prime, mul_mod, pow_mod, primitive_root, Ground, GroundError, ModP, Universe};
use crate::setops::GSet;
use crate::{guard, Error, Result};

/// Largest `p` for which a full discrete-log coset table is built.
pub const COSET_TABLE_LIMIT: u64 = 1 << 25;
/// Largest `t·n` for a full character-sum sweep.
pub const CHAR_GUARD: u64 = 10_000_000;

/// A subgroup of order `t` in `F_p^*` with its coset structure.
#[derive(Clone)]
pub struct SubgroupCtx {
    p: u64,
    g: u64,
    t: u64,
    n: u64,
    gamma: Vec<u64>,
    /// `coset[x]` is `j` with `x ∈ g^j Γ`, or `u32::MAX` for `x = 0`.
    coset: Option<Vec<u32>>,
}

impl fmt::Debug for SubgroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupCtx(p={}, t={}, g={})", self.p, self.t, self.g)
    }
}

impl SubgroupCtx {
    pub fn p(&self) -> u64 {
        self.p
    }
    /// The smallest primitive root mod `p`.
    pub fn g(&self) -> u64 {
        self.g
    }
    pub fn t(&self) -> u64 {
        self.t
    }
    /// Index `(p-1)/t`.
    pub fn n(&self) -> u64 {
        self.n
    }
    /// Elements of `Γ`, sorted.
    pub fn gamma(&self) -> &[u64] {
        &self.gamma
    }

    pub fn label(&self) -> String {
        format!("subgroup(p={},t={})", self.p, self.t)
    }

    pub fn contains(&self, x: u64) -> bool {
        let x = x % self.p;
        match &self.coset {
            Some(c) => c[x as usize] == 0,
            None => x != 0 && pow_mod(x, self.t, self.p) == 1,
        }
    }

    /// `j ∈ [0, n)` with `x ∈ g^j Γ`; `None` for 0.
    pub fn coset_index(&self, x: u64) -> Option<usize> {
        let x = x % self.p;
        if x == 0 {
            return None;
        }
        match &self.coset {
            Some(c) => Some(c[x as usize] as usize),
            None => {
                // Walk g^{-j} x until it lands in Γ.
                let ginv = inv_mod(self.g, self.p).expect("prime modulus");
                let mut y = x;
                for j in 0..self.n {
                    if pow_mod(y, self.t, self.p) == 1 {
                        return Some(j as usize);
                    }
                    y = mul_mod(y, ginv, self.p);
                }
                unreachable!("every nonzero residue lies in some coset")
            }
        }
    }

    /// `g^j Γ` as residues.
    pub fn coset(&self, j: usize) -> Vec<ModP> {
        let gj = pow_mod(self.g, j as u64, self.p);
        let mut v: Vec<u64> = self.gamma.iter().map(|&x| mul_mod(x, gj, self.p)).collect();
        v.sort_unstable();
        v.into_iter().map(|x| ModP::from_canonical(x, self.p)).collect()
    }

    pub fn gamma_set(&self) -> GSet<ModP> {
        GSet::new(
            Universe::Residue { modulus: self.p },
            self.gamma.iter().map(|&x| ModP::from_canonical(x, self.p)),
        )
        .expect("Γ is a valid residue set")
    }
}

/// Builds `Γ = {g^{nj}}` for the smallest primitive root `g`.
pub fn subgroup_context(p: u64, t: u64) -> Result<SubgroupCtx> {
    if !is_prime(p) {
        return Err(GroundError::NotPrime(p).into());
    }
    if t == 0 || (p - 1) % t != 0 {
        return Err(Error::OrderDoesNotDivide { t, modulus_minus_one: p - 1 });
    }
    let g = primitive_root(p)?;
    let n = (p - 1) / t;
    let step = pow_mod(g, n, p);
    let mut gamma = Vec::with_capacity(t as usize);
    let mut x = 1u64;
    for _ in 0..t {
        gamma.push(x);
        x = mul_mod(x, step, p);
    }
    gamma.sort_unstable();
    let coset = (p <= COSET_TABLE_LIMIT).then(|| {
        let mut c = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            c[x as usize] = (k % n) as u32;
            x = mul_mod(x, g, p);
        }
        c
    });
    Ok(SubgroupCtx { p, g, t, n, gamma, coset })
}

/// Parses `"p=<prime>,t=<order>"`.
pub fn parse_subgroup_spec(s: &str) -> Result<(u64, u64)> {
    let mut p = None;
    let mut t = None;
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad subgroup spec {s:?}")))?;
        let v: u64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in {s:?}")))?;
        match k.trim() {
            "p" => p = Some(v),
            "t" => t = Some(v),
            other => return Err(Error::Parse(format!("unknown key {other:?} in {s:?}"))),
        }
    }
    match (p, t) {
        (Some(p), Some(t)) => Ok((p, t)),
        _ => Err(Error::Parse(format!("subgroup spec needs p and t: {s:?}"))),
    }
}

/// Longest run of consecutive residues avoiding one coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub h: u64,
    pub witness_coset: usize,
    /// The run is `u+1, ..., u+H` (mod `p`).
    pub witness_start: u64,
    pub circular: bool,
}

/// `H_p(t)`, maximised over all cosets. Circular runs may pass through 0;
/// the linear variant cuts the circle between `p-1` and `0`.
pub fn gap_h(ctx: &SubgroupCtx, circular: bool) -> Result<GapReport> {
    let (p, n) = (ctx.p, ctx.n as usize);
    guard("p for a full gap scan", p as u128, COSET_TABLE_LIMIT as u128)?;
    let table = ctx.coset.as_ref().expect("table present below the limit");
    // last[j]: last position of coset j seen; first[j]: first position.
    let mut last = vec![u64::MAX; n];
    let mut first = vec![u64::MAX; n];
    let mut best = vec![(0u64, 0u64); n]; // (run length, u)
    for x in 1..p {
        let j = table[x as usize] as usize;
        if first[j] == u64::MAX {
            first[j] = x;
            if !circular {
                // Run 0..x-1 starts right after u = -1.
                best[j] = (x, p - 1);
            }
        } else {
            let run = x - last[j] - 1;
            if run > best[j].0 {
                best[j] = (run, last[j]);
            }
        }
        last[j] = x;
    }
    for j in 0..n {
        let run = if circular { p - last[j] + first[j] - 1 } else { p - 1 - last[j] };
        if run > best[j].0 {
            best[j] = (run, last[j]);
        }
    }
    let (witness_coset, &(h, u)) = best
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &(u64, u64))>, (j, b)| match acc {
            Some((_, a)) if a.0 >= b.0 => acc,
            _ => Some((j, b)),
        })
        .expect("at least one coset");
    let report = GapReport { h, witness_coset, witness_start: u, circular };
    verify_gap(ctx, &report)?;
    Ok(report)
}

/// Re-checks a claimed run by membership queries.
pub fn verify_gap(ctx: &SubgroupCtx, r: &GapReport) -> Result<()> {
    let p = ctx.p;
    for i in 1..=r.h {
        let x = (r.witness_start + i) % p;
        if ctx.coset_index(x) == Some(r.witness_coset) {
            return Err(Error::CrossCheckMismatch {
                what: "gap witness",
                left: format!("{x} in coset {}", r.witness_coset),
                right: "outside".into(),
            });
        }
    }
    // Maximality at this coset: both ends are coset members (or the cut).
    let before = r.witness_start % p;
    let after = (r.witness_start + r.h + 1) % p;
    let ends_ok = |x: u64, cut: bool| cut || ctx.coset_index(x) == Some(r.witness_coset);
    let linear_cut_before = !r.circular && before == p - 1;
    let linear_cut_after = !r.circular && r.witness_start.wrapping_add(r.h + 1) % p == 0;
    if r.h < p - 1 && !(ends_ok(before, linear_cut_before) && ends_ok(after, linear_cut_after)) {
        return Err(Error::CrossCheckMismatch { what: "gap maximality", left: format!("{r:?}"), right: "bounded run".into() });
    }
    Ok(())
}

/// Window counts `N_{j,t}(h)` and `N(Γ, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowCounts {
    pub per_coset: Vec<u64>,
    pub n_gamma_h: u64,
}

/// Counts `1 <= |u| <= h` in each coset; `N(Γ, h)` both as `Σ_j N_j^2` and as
/// the number of `(x, y)` with `0 < |x|, |y| <= h` and `y/x ∈ Γ`.
pub fn window_counts(ctx: &SubgroupCtx, h: u64) -> Result<WindowCounts> {
    let p = ctx.p;
    if h < 1 || 2 * h >= p {
        return Err(Error::DegenerateInput(format!("need 1 <= h < p/2, got h={h}, p={p}")));
    }
    let window: Vec<u64> = (1..=h).flat_map(|u| [u, p - u]).collect();
    let mut per_coset = vec![0u64; ctx.n as usize];
    for &u in &window {
        per_coset[ctx.coset_index(u).expect("nonzero")] += 1;
    }
    let squares: u64 = per_coset.iter().map(|c| c * c).sum();

    let mut direct = 0u64;
    for &x in &window {
        let xinv = inv_mod(x, p).expect("prime modulus");
        for &y in &window {
            if ctx.contains(mul_mod(y, xinv, p)) {
                direct += 1;
            }
        }
    }
    if squares != direct {
        return Err(Error::CrossCheckMismatch { what: "N(Γ,h)", left: squares.to_string(), right: direct.to_string() });
    }
    Ok(WindowCounts { per_coset, n_gamma_h: squares })
}

fn ep_table(p: u64) -> Vec<Complex64> {
    let w = 2.0 * std::f64::consts::PI / p as f64;
    (0..p).map(|k| Complex64::from_polar(1.0, w * k as f64)).collect()
}

/// Gauss periods `S_j = Σ_{x∈Γ} e_p(g^j x)` and their fourth moment.
#[derive(Debug, Clone, Serialize)]
pub struct CharSums {
    #[serde(skip)]
    pub s: Vec<Complex64>,
    pub abs: Vec<f64>,
    pub fourth_moment: f64,
    /// `(p/t) E(Γ)`.
    pub bound: f64,
    pub holds: bool,
}

pub fn char_sums(ctx: &SubgroupCtx) -> Result<CharSums> {
    guard("t·n for character sums", (ctx.t * ctx.n) as u128, CHAR_GUARD as u128)?;
    let p = ctx.p;
    let ep = ep_table(p);
    let mut s = Vec::with_capacity(ctx.n as usize);
    let mut gj = 1u64;
    for _ in 0..ctx.n {
        let sum: Complex64 = ctx.gamma.iter().map(|&x| ep[mul_mod(gj, x, p) as usize]).sum();
        s.push(sum);
        gj = mul_mod(gj, ctx.g, p);
    }
    let fourth_moment: f64 = s.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum();
    let e = crate::energy::energy(&ctx.gamma_set());
    let e = num_traits::ToPrimitive::to_f64(&e).unwrap_or(f64::INFINITY);
    let bound = p as f64 / ctx.t as f64 * e;
    let holds = fourth_moment < bound + 1e-6 * bound;
    Ok(CharSums { abs: s.iter().map(|z| z.norm()).collect(), s, fourth_moment, bound, holds })
}

/// `Σ_{c ∈ F_p^*} |Σ_{x∈Γ} e_p(cx)|^2` by a direct double sum.
pub fn parseval_sum(ctx: &SubgroupCtx) -> Result<f64> {
    guard("p·t for the Parseval sum", (ctx.p as u128) * ctx.t as u128, CHAR_GUARD as u128)?;
    let p = ctx.p;
    let ep = ep_table(p);
    Ok((1..p)
        .map(|c| ctx.gamma.iter().map(|&x| ep[mul_mod(c, x, p) as usize]).sum::<Complex64>().norm_sqr())
        .sum())
}

/// Outcome of the `0.5t` criterion over all shifts `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsOutcome {
    pub holds: bool,
    pub margin: f64,
    pub max_sum: f64,
}

/// `max_k Σ_j N_{j,t}(h) |S_{j+k}|` against `0.5t`, indices mod `n`.
pub fn ks_criterion(ctx: &SubgroupCtx, h: u64) -> Result<KsOutcome> {
    let sums = char_sums(ctx)?;
    let w = window_counts(ctx, h)?;
    let n = ctx.n as usize;
    let max_sum = (1..=n)
        .map(|k| (0..n).map(|j| w.per_coset[j] as f64 * sums.abs[(j + k) % n]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let half = 0.5 * ctx.t as f64;
    Ok(KsOutcome { holds: max_sum <= half, margin: half - max_sum, max_sum })
}

/// Residue modulo `p^2`, used only for subgroups of `(Z/p^2)^*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModP2 {
    value: u64,
    m: u64,
}

impl ModP2 {
    pub fn value(&self) -> u64 {
        self.value
    }
}

impl fmt::Display for ModP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.m)
    }
}

impl fmt::Debug for ModP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ground for ModP2 {
    fn plus(&self, rhs: &Self) -> Self {
        ModP2 { value: (self.value + rhs.value) % self.m, m: self.m }
    }
    fn minus(&self, rhs: &Self) -> Self {
        ModP2 { value: (self.value + self.m - rhs.value) % self.m, m: self.m }
    }
    fn times(&self, rhs: &Self) -> Self {
        ModP2 { value: mul_mod(self.value, rhs.value, self.m), m: self.m }
    }
    fn negated(&self) -> Self {
        ModP2 { value: (self.m - self.value) % self.m, m: self.m }
    }
    fn try_quotient(&self, rhs: &Self) -> std::result::Result<Self, GroundError> {
        let inv = inv_mod(rhs.value, self.m).ok_or_else(|| GroundError::NotInvertible(rhs.to_string()))?;
        Ok(ModP2 { value: mul_mod(self.value, inv, self.m), m: self.m })
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn zero_like(&self) -> Self {
        ModP2 { value: 0, m: self.m }
    }
    fn universe(&self) -> Universe {
        Universe::Residue { modulus: self.m }
    }
}

/// The order-`t` subgroup of `(Z/p^2)^*` and its reduction mod `p`.
#[derive(Debug, Clone)]
pub struct ModP2Subgroup {
    pub gamma2: GSet<ModP2>,
    pub reduced: GSet<ModP>,
}

pub fn mod_p2_subgroup(p: u64, t: u64) -> Result<ModP2Subgroup> {
    if !is_prime(p) {
        return Err(GroundError::NotPrime(p).into());
    }
    if t == 0 || (p - 1) % t != 0 {
        return Err(Error::OrderDoesNotDivide { t, modulus_minus_one: p - 1 });
    }
    let m = p.checked_mul(p).ok_or(Error::TooLarge { what: "p^2", size: p as u128 * p as u128, limit: u64::MAX as u128 })?;
    let g = primitive_root(p)?;
    // g generates (Z/p^2)^* unless g^{p-1} ≡ 1 mod p^2, in which case g + p does.
    let g2 = if pow_mod(g, p - 1, m) == 1 { g + p } else { g };
    let step = pow_mod(g2, p * (p - 1) / t, m);
    let mut elems = Vec::with_capacity(t as usize);
    let mut x = 1u64;
    for _ in 0..t {
        elems.push(ModP2 { value: x, m });
        x = mul_mod(x, step, m);
    }
    let gamma2 = GSet::new(Universe::Residue { modulus: m }, elems)?;
    let reduced = GSet::new(
        Universe::Residue { modulus: p },
        gamma2.iter().map(|x| ModP::from_canonical(x.value % p, p)),
    )?;
    if gamma2.len() as u64 != t || reduced.len() as u64 != t {
        return Err(Error::CrossCheckMismatch {
            what: "|Γ mod p|",
            left: reduced.len().to_string(),
            right: t.to_string(),
        });
    }
    Ok(ModP2Subgroup { gamma2, reduced })
}

/// Bound expression for `t` in a scan spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TBound {
    Const(u64),
    SqrtP,
    PMinusOne,
}

impl TBound {
    fn eval(self, p: u64) -> f64 {
        match self {
            TBound::Const(c) => c as f64,
            TBound::SqrtP => (p as f64).sqrt(),
            TBound::PMinusOne => (p - 1) as f64,
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('\u{2212}', "-");
        match s.as_str() {
            "sqrt(p)" | "√p" => Ok(TBound::SqrtP),
            "p-1" => Ok(TBound::PMinusOne),
            _ => s.parse().map(TBound::Const).map_err(|_| Error::Parse(format!("bad bound {s:?}"))),
        }
    }
}

/// `"p in [a,b], t | p-1, t in [c,d]"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub p_lo: u64,
    pub p_hi: u64,
    pub t_lo: TBound,
    pub t_hi: TBound,
}

impl ScanSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad scan spec {s:?}"));
        let interval = |part: &str, var: &str| -> Result<(String, String)> {
            let rest = part.trim().strip_prefix(var).ok_or_else(bad)?.trim();
            let rest = rest.strip_prefix("in").ok_or_else(bad)?.trim();
            let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
            Ok((lo.trim().to_string(), hi.trim().to_string()))
        };
        // Split on the commas between clauses, not inside brackets.
        let mut parts = Vec::new();
        let (mut depth, mut cur) = (0, String::new());
        for c in s.chars() {
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(std::mem::take(&mut cur));
                    continue;
                }
                _ => {}
            }
            cur.push(c);
        }
        parts.push(cur);
        let mut spec = ScanSpec { p_lo: 2, p_hi: 2, t_lo: TBound::Const(1), t_hi: TBound::PMinusOne };
        let mut saw_p = false;
        for part in &parts {
            let part = part.trim();
            if part.starts_with("p ") || part.starts_with("p\t") || part.starts_with("p[") {
                let (lo, hi) = interval(part, "p")?;
                spec.p_lo = lo.parse().map_err(|_| bad())?;
                spec.p_hi = hi.parse().map_err(|_| bad())?;
                saw_p = true;
            } else if part.starts_with('t') && part.contains('|') {
                // Divisibility is implied by construction.
            } else if part.starts_with('t') {
                let (lo, hi) = interval(part, "t")?;
                spec.t_lo = TBound::parse(&lo)?;
                spec.t_hi = TBound::parse(&hi)?;
            } else if !part.is_empty() {
                return Err(bad());
            }
        }
        if !saw_p {
            return Err(bad());
        }
        Ok(spec)
    }

    /// All `(p, t)` in the range, ordered by `p` then `t`.
    pub fn cases(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for p in self.p_lo.max(2)..=self.p_hi {
            if !is_prime(p) {
                continue;
            }
            let (lo, hi) = (self.t_lo.eval(p), self.t_hi.eval(p));
            for t in 1..p {
                if (p - 1) % t == 0 && t as f64 >= lo && t as f64 <= hi {
                    out.push((p, t));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contexts() {
        let c = subgroup_context(7, 3).unwrap();
        assert_eq!((c.g(), c.gamma()), (3, &[1u64, 2, 4][..]));
        assert_eq!(subgroup_context(13, 1).unwrap().gamma(), &[1]);
        assert_eq!(subgroup_context(13, 12).unwrap().gamma(), &(1..13).collect::<Vec<_>>()[..]);
        assert!(subgroup_context(9, 2).is_err());
        assert!(matches!(subgroup_context(7, 4), Err(Error::OrderDoesNotDivide { .. })));
    }

    #[test]
    fn gaps() {
        let c = subgroup_context(7, 3).unwrap();
        assert_eq!(gap_h(&c, true).unwrap().h, 3);
        assert_eq!(gap_h(&subgroup_context(11, 10).unwrap(), true).unwrap().h, 1);
        assert_eq!(gap_h(&subgroup_context(11, 1).unwrap(), true).unwrap().h, 10);
        // The coset {10} leaves 0..9 free even without wrapping.
        let lin = gap_h(&subgroup_context(11, 1).unwrap(), false).unwrap();
        assert_eq!((lin.h, lin.witness_start), (10, 10));
        let lin = gap_h(&subgroup_context(11, 10).unwrap(), false).unwrap();
        assert_eq!((lin.h, lin.witness_start), (1, 10));
    }

    #[test]
    fn windows() {
        let c = subgroup_context(7, 3).unwrap();
        let w = window_counts(&c, 2).unwrap();
        assert_eq!((w.per_coset.clone(), w.n_gamma_h), (vec![2, 2], 8));
        let full = window_counts(&subgroup_context(11, 2).unwrap(), 5).unwrap();
        assert_eq!(full.per_coset.iter().sum::<u64>(), 10);
        assert!(window_counts(&c, 4).is_err());
    }

    #[test]
    fn character_sums() {
        let c = subgroup_context(7, 3).unwrap();
        let s = char_sums(&c).unwrap();
        for z in &s.s {
            assert!((z.norm_sqr().powi(2) - 4.0).abs() < 1e-9);
        }
        assert!((s.fourth_moment - 8.0).abs() < 1e-9 && (s.bound - 35.0).abs() < 1e-9 && s.holds);
        let full = char_sums(&subgroup_context(7, 6).unwrap()).unwrap();
        assert!((full.s[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((parseval_sum(&c).unwrap() - 12.0).abs() < 1e-9);
    }

    #[test]
    fn ks_examples() {
        let k = ks_criterion(&subgroup_context(7, 3).unwrap(), 1).unwrap();
        assert!(!k.holds && (k.max_sum - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        let k = ks_criterion(&subgroup_context(7, 6).unwrap(), 1).unwrap();
        assert!(k.holds && (k.max_sum - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mod_p2() {
        let s = mod_p2_subgroup(3, 2).unwrap();
        let vals: Vec<u64> = s.gamma2.iter().map(|x| x.value()).collect();
        assert_eq!(vals, vec![1, 8]);
        assert_eq!(s.reduced, GSet::from_residues(3, &[1, 2]).unwrap());
        for (p, t) in [(5, 4), (7, 3), (11, 5)] {
            assert_eq!(mod_p2_subgroup(p, t).unwrap().reduced.len() as u64, t);
        }
        assert_eq!(mod_p2_subgroup(13, 1).unwrap().gamma2.len(), 1);
    }

    #[test]
    fn scan_specs() {
        let s = ScanSpec::parse("p in [7,13], t | p−1, t in [2, sqrt(p)]").unwrap();
        assert_eq!(s.cases(), vec![(7, 2), (11, 2), (13, 2), (13, 3)]);
        assert_eq!(parse_subgroup_spec("p=1009,t=28").unwrap(), (1009, 28));
        assert!(ScanSpec::parse("q in [1,2]").is_err());
    }
}
