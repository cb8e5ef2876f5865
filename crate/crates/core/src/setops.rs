//! Finite sets and their sums, differences, products and ratios.
//!
//! Representation counts are always over ordered pairs (and ordered tuples
//! for iterated sums), so `Σ_x r_{A∘B}(x) = |A||B|`.

use std::fmt;

use num_rational::Ratio;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::ground::{Ground, ModP, Rational, Universe};
use crate::subgroups::SubgroupCtx;
use crate::{Error, Result};

/// Sorted, deduplicated finite set of nonzero ground elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GSet<T: Ground> {
    elements: Vec<T>,
    universe: Universe,
}

impl<T: Ground> GSet<T> {
    /// Sorts and deduplicates; rejects `0` and elements from another universe.
    pub fn new(universe: Universe, items: impl IntoIterator<Item = T>) -> Result<Self> {
        let mut elements: Vec<T> = items.into_iter().collect();
        for x in &elements {
            if x.universe() != universe {
                return Err(Error::MixedKinds(universe, x.universe()));
            }
            if x.is_zero() {
                return Err(Error::ContainsZero);
            }
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(GSet { elements, universe })
    }

    /// Like [`GSet::new`], taking the universe from the first element.
    pub fn from_elements(items: impl IntoIterator<Item = T>) -> Result<Self> {
        let items: Vec<T> = items.into_iter().collect();
        let universe = items
            .first()
            .map(|x| x.universe())
            .ok_or_else(|| Error::DegenerateInput("cannot infer the kind of an empty set".into()))?;
        Self::new(universe, items)
    }

    pub fn empty(universe: Universe) -> Self {
        GSet { elements: Vec::new(), universe }
    }

    /// Drops zero (if present) from an arbitrary collection; used for supports.
    pub fn nonzero_part(universe: Universe, items: impl IntoIterator<Item = T>) -> Self {
        let mut elements: Vec<T> = items.into_iter().filter(|x| !x.is_zero()).collect();
        elements.sort_unstable();
        elements.dedup();
        GSet { elements, universe }
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &GSet<T>) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// Hash-based membership for inner loops.
    pub fn lookup(&self) -> FxHashSet<T> {
        self.elements.iter().cloned().collect()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.elements
    }

    pub(crate) fn check_same(&self, other: &GSet<T>) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::MixedKinds(self.universe, other.universe))
        }
    }

    /// Serializes in the set-file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("kind: {}\n", self.universe);
        for x in &self.elements {
            out.push_str(&x.to_string());
            out.push('\n');
        }
        out
    }
}

impl<T: Ground> fmt::Debug for GSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}

impl<T: Ground> fmt::Display for GSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match self.universe {
                Universe::Rational => write!(f, "{x}")?,
                // Residues print without the repeated modulus.
                Universe::Residue { .. } => write!(f, "{}", x.to_string().split(' ').next().unwrap_or(""))?,
            }
        }
        write!(f, "}}")
    }
}

impl<'a, T: Ground> IntoIterator for &'a GSet<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl GSet<Rational> {
    pub fn from_integers(xs: &[i64]) -> Result<Self> {
        Self::new(Universe::Rational, xs.iter().map(|&x| Rational::from_integer(x)))
    }
}

impl GSet<ModP> {
    pub fn from_residues(p: u64, xs: &[i64]) -> Result<Self> {
        let items = xs.iter().map(|&x| ModP::new(x, p)).collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(Universe::Residue { modulus: p }, items)
    }
}

/// A set whose kind is only known at run time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnySet {
    Rational(GSet<Rational>),
    Residue(GSet<ModP>),
}

impl AnySet {
    pub fn len(&self) -> usize {
        match self {
            AnySet::Rational(s) => s.len(),
            AnySet::Residue(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> Universe {
        match self {
            AnySet::Rational(s) => s.universe(),
            AnySet::Residue(s) => s.universe(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnySet::Rational(s) => s.to_text(),
            AnySet::Residue(s) => s.to_text(),
        }
    }
}

impl fmt::Display for AnySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnySet::Rational(s) => s.fmt(f),
            AnySet::Residue(s) => write!(f, "{s} mod {}", s.universe().modulus().unwrap_or(0)),
        }
    }
}

/// Parses the set-file format: optional `kind:` header, one element per
/// line, `#` comments.
pub fn parse_set_text(text: &str) -> Result<AnySet> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let mut modulus = None;
    if let Some(head) = lines.peek().copied() {
        if let Some(kind) = head.strip_prefix("kind:") {
            lines.next();
            let kind = kind.trim();
            if kind == "rational" {
            } else if let Some(rest) = kind.strip_prefix("modp") {
                let p = rest
                    .trim()
                    .strip_prefix("p=")
                    .and_then(|v| v.trim().parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad kind header {head:?}")))?;
                modulus = Some(p);
            } else {
                return Err(Error::Parse(format!("unknown kind {kind:?}")));
            }
        }
    }
    match modulus {
        None => {
            let xs = lines.map(|l| l.parse::<Rational>()).collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(AnySet::Rational(GSet::new(Universe::Rational, xs)?))
        }
        Some(p) => {
            let mut xs = Vec::new();
            for l in lines {
                let x = if l.contains("mod") {
                    let x: ModP = l.parse()?;
                    if x.modulus() != p {
                        return Err(Error::MixedKinds(Universe::Residue { modulus: p }, x.universe()));
                    }
                    x
                } else {
                    let v: i64 = l.parse().map_err(|_| Error::Parse(format!("bad residue {l:?}")))?;
                    ModP::new(v, p)?
                };
                xs.push(x);
            }
            if xs.is_empty() {
                // Still validate the modulus.
                ModP::new(0, p)?;
            }
            Ok(AnySet::Residue(GSet::new(Universe::Residue { modulus: p }, xs)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    #[inline]
    fn apply<T: Ground>(self, a: &T, b: &T) -> T {
        match self {
            Op::Add => a.plus(b),
            Op::Sub => a.minus(b),
            Op::Mul => a.times(b),
            // Set elements are nonzero, so the quotient always exists.
            Op::Div => a.try_quotient(b).expect("nonzero divisor"),
        }
    }
}

/// Multiplicities of the values of a representation function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable<T: Ground> {
    entries: FxHashMap<T, u64>,
    total: u64,
}

impl<T: Ground> CountTable<T> {
    pub fn from_map(entries: FxHashMap<T, u64>) -> Self {
        let total = entries.values().sum();
        CountTable { entries, total }
    }

    pub fn get(&self, x: &T) -> u64 {
        self.entries.get(x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Size of the support.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn max_count(&self) -> u64 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// Entries ordered by key.
    pub fn sorted(&self) -> Vec<(T, u64)> {
        let mut v: Vec<(T, u64)> = self.entries.iter().map(|(k, &c)| (k.clone(), c)).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// The support, sorted.
    pub fn support(&self) -> Vec<T> {
        let mut v: Vec<T> = self.entries.keys().cloned().collect();
        v.sort_unstable();
        v
    }

    pub fn map(&self) -> &FxHashMap<T, u64> {
        &self.entries
    }
}

/// Table of `a∘b` over all ordered pairs in `A × B`.
pub fn combine<T: Ground>(a: &GSet<T>, b: &GSet<T>, op: Op) -> Result<CountTable<T>> {
    a.check_same(b)?;
    let mut m: FxHashMap<T, u64> = FxHashMap::default();
    m.reserve(a.len() * b.len() / 2 + 1);
    for x in a {
        for y in b {
            *m.entry(op.apply(x, y)).or_insert(0) += 1;
        }
    }
    Ok(CountTable { entries: m, total: (a.len() * b.len()) as u64 })
}

/// The set `A∘B` without multiplicities, sorted.
pub fn combine_support<T: Ground>(a: &GSet<T>, b: &GSet<T>, op: Op) -> Result<Vec<T>> {
    a.check_same(b)?;
    let mut s: FxHashSet<T> = FxHashSet::default();
    for x in a {
        for y in b {
            s.insert(op.apply(x, y));
        }
    }
    let mut v: Vec<T> = s.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// `A∘B` as a set. Only valid for `×` and `÷`, which cannot produce zero.
pub fn product_set<T: Ground>(a: &GSet<T>, b: &GSet<T>, op: Op) -> Result<GSet<T>> {
    assert!(matches!(op, Op::Mul | Op::Div), "sums and differences may contain 0");
    let v = combine_support(a, b, op)?;
    Ok(GSet { elements: v, universe: a.universe })
}

/// `(|AA|/|A|, |A/A|/|A|, |A+A|/|A|)`.
pub fn doubling_stats<T: Ground>(a: &GSet<T>) -> Result<(Ratio<u64>, Ratio<u64>, Ratio<u64>)> {
    if a.len() < 2 {
        return Err(Error::DegenerateInput("doubling needs |A| >= 2".into()));
    }
    let n = a.len() as u64;
    let mul = combine_support(a, a, Op::Mul)?.len() as u64;
    let div = combine_support(a, a, Op::Div)?.len() as u64;
    let add = combine_support(a, a, Op::Add)?.len() as u64;
    Ok((Ratio::new(mul, n), Ratio::new(div, n), Ratio::new(add, n)))
}

/// Table of `r_{kA}(s)`, the number of ordered `k`-tuples from `A` summing to `s`.
pub fn iterated_sum_counts<T: Ground>(a: &GSet<T>, k: u32) -> Result<CountTable<T>> {
    if k == 0 {
        return Err(Error::DegenerateInput("k must be at least 1".into()));
    }
    crate::guard("|A|^k", (a.len() as u128).saturating_pow(k), u64::MAX as u128)?;
    let mut cur: FxHashMap<T, u64> = a.iter().map(|x| (x.clone(), 1)).collect();
    for _ in 1..k {
        let mut next: FxHashMap<T, u64> = FxHashMap::default();
        next.reserve(cur.len() * 2);
        for (s, &c) in &cur {
            for x in a {
                *next.entry(s.plus(x)).or_insert(0) += c;
            }
        }
        cur = next;
    }
    Ok(CountTable::from_map(cur))
}

/// `A_d = A ∩ (A + d)`.
pub fn translate_intersect<T: Ground>(a: &GSet<T>, d: &T) -> GSet<T> {
    let elements = a.iter().filter(|x| a.contains(&x.minus(d))).cloned().collect();
    GSet { elements, universe: a.universe }
}

/// Union of the cosets `g^j Γ` for the given `j`.
pub fn invariant_union(ctx: &SubgroupCtx, coset_indices: &[usize]) -> Result<GSet<ModP>> {
    let mut out = Vec::new();
    for &j in coset_indices {
        if j >= ctx.n() as usize {
            return Err(Error::IndexOutOfRange { index: j, limit: ctx.n() as usize });
        }
        out.extend(ctx.coset(j));
    }
    GSet::new(Universe::Residue { modulus: ctx.p() }, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[i64]) -> GSet<Rational> {
        GSet::from_integers(xs).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn difference_table_of_1_2_3() {
        let t = combine(&s(&[1, 2, 3]), &s(&[1, 2, 3]), Op::Sub).unwrap();
        let got: Vec<(Rational, u64)> = t.sorted();
        let want: Vec<(Rational, u64)> = vec![(q(-2), 1), (q(-1), 2), (q(0), 3), (q(1), 2), (q(2), 1)];
        assert_eq!(got, want);
        assert_eq!(t.total(), 9);
    }

    #[test]
    fn product_table_support() {
        let a = s(&[1, 2, 3]);
        let t = combine(&a, &a, Op::Mul).unwrap();
        assert_eq!(t.support(), vec![q(1), q(2), q(3), q(4), q(6), q(9)]);
        let single = combine(&s(&[5]), &s(&[7]), Op::Div).unwrap();
        assert_eq!(single.sorted(), vec![(Rational::normalize(5, 7).unwrap(), 1)]);
    }

    #[test]
    fn doubling_examples() {
        let (m, _, _) = doubling_stats(&s(&[1, 2, 4, 8])).unwrap();
        assert_eq!(m, Ratio::new(7, 4));
        let (m, _, _) = doubling_stats(&s(&[1, 2, 3])).unwrap();
        assert_eq!(m, Ratio::new(2, 1));
        for n in 2..10u32 {
            let g: Vec<i64> = (0..n).map(|i| 1i64 << i).collect();
            let (m, _, _) = doubling_stats(&s(&g)).unwrap();
            assert_eq!(m, Ratio::new(2 * n as u64 - 1, n as u64));
        }
    }

    #[test]
    fn iterated_sums() {
        let a = s(&[1, 2, 3]);
        let t1 = iterated_sum_counts(&a, 1).unwrap();
        assert_eq!(t1.sorted(), vec![(q(1), 1), (q(2), 1), (q(3), 1)]);
        let t3 = iterated_sum_counts(&a, 3).unwrap();
        let counts: Vec<u64> = t3.sorted().into_iter().map(|(_, c)| c).collect();
        assert_eq!(counts, vec![1, 3, 6, 7, 6, 3, 1]);
        assert_eq!(t3.support().first(), Some(&q(3)));
        assert_eq!(t3.total(), 27);
    }

    #[test]
    fn translates() {
        let a = s(&[1, 2, 3]);
        assert_eq!(translate_intersect(&a, &q(1)), s(&[2, 3]));
        assert_eq!(translate_intersect(&a, &q(0)), a);
        assert!(translate_intersect(&a, &q(7)).is_empty());
    }

    #[test]
    fn construction_rules() {
        assert!(matches!(GSet::from_integers(&[1, 0]), Err(Error::ContainsZero)));
        assert_eq!(s(&[3, 1, 3, 2]).elements(), &[q(1), q(2), q(3)]);
        let a = s(&[1]);
        let b = GSet::from_residues(7, &[1]).unwrap();
        assert_eq!(format!("{b}"), "{1}");
        assert!(a.len() == b.len());
    }

    #[test]
    fn set_text_round_trip() {
        let text = "# demo\nkind: rational\n1/2\n3\n-4/6\n";
        let set = parse_set_text(text).unwrap();
        assert_eq!(parse_set_text(&set.to_text()).unwrap(), set);
        let r = parse_set_text("kind: modp p=7\n3\n10 mod 7\n5 mod 7\n").unwrap();
        assert_eq!(r.len(), 2);
        assert!(parse_set_text("kind: modp p=8\n1\n").is_err());
        assert!(parse_set_text("kind: modp p=7\n1 mod 11\n").is_err());
        assert!(parse_set_text("0\n").is_err());
    }
}
