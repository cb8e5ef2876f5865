//! Reproducible test families: geometric and arithmetic progressions, seeded
//! random integer sets, subgroups as residue sets, and unions.
//!
//! The random generator is the 64-bit LCG
//! `s <- s * 6364136223846793005 + 1442695040888963407 (mod 2^64)`
//! seeded with `s = seed`. One draw takes the high 32 bits of two successive
//! states, first one high. Values in `[1, max]` come from rejection sampling
//! against the largest multiple of `max` below `2^64`, and duplicates are
//! redrawn until `n` distinct values are collected.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::ground::{Rational, Universe};
use crate::setops::{AnySet, GSet};
use crate::subgroups::subgroup_context;
use crate::{Error, Result};

pub const LCG_MUL: u64 = 6364136223846793005;
pub const LCG_INC: u64 = 1442695040888963407;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    fn step(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(LCG_MUL).wrapping_add(LCG_INC);
        self.state >> 32
    }

    pub fn next_u64(&mut self) -> u64 {
        let hi = self.step();
        (hi << 32) | self.step()
    }

    /// Uniform in `[1, max]`.
    pub fn below_inclusive(&mut self, max: u64) -> u64 {
        assert!(max >= 1);
        let limit = u64::MAX - u64::MAX % max;
        loop {
            let x = self.next_u64();
            if x < limit {
                return 1 + x % max;
            }
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    Geometric { q: Rational, n: usize, start: Rational },
    Arithmetic { n: usize, start: Rational, step: Rational },
    RandomInteger { n: usize, seed: u64, max: u64 },
    Subgroup { p: u64, t: u64 },
    Union(Box<FamilySpec>, Box<FamilySpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
}

impl FamilySpec {
    pub fn geometric(q: i64, n: usize) -> Self {
        FamilySpec { kind: FamilyKind::Geometric { q: q.into(), n, start: Rational::one() } }
    }

    pub fn arithmetic(n: usize) -> Self {
        FamilySpec { kind: FamilyKind::Arithmetic { n, start: Rational::one(), step: Rational::one() } }
    }

    pub fn random(n: usize, seed: u64, max: u64) -> Self {
        FamilySpec { kind: FamilyKind::RandomInteger { n, seed, max } }
    }

    pub fn subgroup(p: u64, t: u64) -> Self {
        FamilySpec { kind: FamilyKind::Subgroup { p, t } }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::Geometric { q, n, start } => write!(f, "geo(q={q},n={n},start={start})"),
            FamilyKind::Arithmetic { n, start, step } => write!(f, "ap(n={n},start={start},step={step})"),
            FamilyKind::RandomInteger { n, seed, max } => write!(f, "rand(n={n},seed={seed},max={max})"),
            FamilyKind::Subgroup { p, t } => write!(f, "subgroup(p={p},t={t})"),
            FamilyKind::Union(a, b) => write!(f, "union({a},{b})"),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadSpec(msg.into())
}

/// Builds the set described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<AnySet> {
    match &spec.kind {
        FamilyKind::Geometric { q, n, start } => {
            if q.is_zero() || *q == Rational::one() || *q == -Rational::one() {
                return Err(bad(format!("ratio {q} gives no progression")));
            }
            if start.is_zero() {
                return Err(bad("geometric progression from 0"));
            }
            let mut xs = Vec::with_capacity(*n);
            let mut x = start.clone();
            for _ in 0..*n {
                xs.push(x.clone());
                x = &x * q;
            }
            Ok(AnySet::Rational(GSet::new(Universe::Rational, xs)?))
        }
        FamilyKind::Arithmetic { n, start, step } => {
            if step.is_zero() {
                return Err(bad("zero step"));
            }
            let xs: Vec<Rational> = (0..*n as i64).map(|i| start + &(step * &Rational::from_integer(i))).collect();
            if xs.iter().any(Zero::is_zero) {
                return Err(bad(format!("{spec} contains 0")));
            }
            Ok(AnySet::Rational(GSet::new(Universe::Rational, xs)?))
        }
        FamilyKind::RandomInteger { n, seed, max } => {
            if (*max as u128) < *n as u128 || *max == 0 {
                return Err(bad(format!("cannot draw {n} distinct values from [1, {max}]")));
            }
            let mut rng = Lcg::new(*seed);
            let mut seen = std::collections::BTreeSet::new();
            while seen.len() < *n {
                seen.insert(rng.below_inclusive(*max));
            }
            let xs = seen.into_iter().map(|v| Rational::from_integer(v as i64));
            Ok(AnySet::Rational(GSet::new(Universe::Rational, xs)?))
        }
        FamilyKind::Subgroup { p, t } => Ok(AnySet::Residue(subgroup_context(*p, *t)?.gamma_set())),
        FamilyKind::Union(a, b) => match (generate(a)?, generate(b)?) {
            (AnySet::Rational(x), AnySet::Rational(y)) => Ok(AnySet::Rational(GSet::new(
                Universe::Rational,
                x.into_vec().into_iter().chain(y.into_vec()),
            )?)),
            (AnySet::Residue(x), AnySet::Residue(y)) => {
                x.check_same(&y)?;
                let u = x.universe();
                Ok(AnySet::Residue(GSet::new(u, x.into_vec().into_iter().chain(y.into_vec()))?))
            }
            (x, y) => Err(Error::MixedKinds(x.universe(), y.universe())),
        },
    }
}

/// Splits on commas that are not nested inside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|x| !x.is_empty());
    out
}

fn parse_u64(v: &str) -> Result<u64> {
    let v = v.trim();
    if let Some((b, e)) = v.split_once('^') {
        let b: u64 = b.trim().parse().map_err(|_| bad(format!("bad number {v:?}")))?;
        let e: u32 = e.trim().parse().map_err(|_| bad(format!("bad exponent {v:?}")))?;
        return b.checked_pow(e).ok_or_else(|| bad(format!("{v} overflows")));
    }
    v.parse().map_err(|_| bad(format!("bad number {v:?}")))
}

fn parse_rational(v: &str) -> Result<Rational> {
    if v.contains('^') {
        return Ok(Rational::from_integer(parse_u64(v)? as i64));
    }
    v.parse().map_err(|_| bad(format!("bad rational {v:?}")))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| bad(format!("expected name(args): {s:?}")))?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| bad(format!("unbalanced parentheses: {s:?}")))?;
        let name = s[..open].trim();
        let args = split_top(inner);
        if name == "union" {
            if args.len() != 2 {
                return Err(bad("union takes two families"));
            }
            let (a, b) = (args[0].parse()?, args[1].parse()?);
            return Ok(FamilySpec { kind: FamilyKind::Union(Box::new(a), Box::new(b)) });
        }
        let mut kv = std::collections::BTreeMap::new();
        for a in &args {
            let (k, v) = a.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {a:?}")))?;
            if kv.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(bad(format!("repeated key {k:?}")));
            }
        }
        let allowed: &[&str] = match name {
            "geo" => &["q", "n", "start"],
            "ap" => &["n", "start", "step"],
            "rand" => &["n", "seed", "max"],
            "subgroup" => &["p", "t"],
            other => return Err(bad(format!("unknown family {other:?}"))),
        };
        if let Some(k) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(bad(format!("unknown parameter {k:?} for {name}")));
        }
        let need = |k: &str| kv.get(k).ok_or_else(|| bad(format!("{name} needs {k}")));
        let n = || -> Result<usize> { Ok(parse_u64(need("n")?)? as usize) };
        let rat_or = |k: &str, d: i64| -> Result<Rational> {
            kv.get(k).map(|v| parse_rational(v)).unwrap_or(Ok(Rational::from_integer(d)))
        };
        let kind = match name {
            "geo" => FamilyKind::Geometric { q: rat_or("q", 2)?, n: n()?, start: rat_or("start", 1)? },
            "ap" => FamilyKind::Arithmetic { n: n()?, start: rat_or("start", 1)?, step: rat_or("step", 1)? },
            "rand" => FamilyKind::RandomInteger {
                n: n()?,
                seed: kv.get("seed").map(|v| parse_u64(v)).unwrap_or(Ok(1))?,
                max: kv.get("max").map(|v| parse_u64(v)).unwrap_or(Ok(1_000_000))?,
            },
            _ => FamilyKind::Subgroup { p: parse_u64(need("p")?)?, t: parse_u64(need("t")?)? },
        };
        Ok(FamilySpec { kind })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setops::{combine_support, Op};

    fn rset(s: &str) -> GSet<Rational> {
        match generate(&s.parse().unwrap()).unwrap() {
            AnySet::Rational(x) => x,
            _ => panic!("expected rationals"),
        }
    }

    #[test]
    fn geometric() {
        let a = rset("geo(q=2,n=8,start=1)");
        assert_eq!(a, GSet::from_integers(&[1, 2, 4, 8, 16, 32, 64, 128]).unwrap());
        let (m, _, _) = crate::setops::doubling_stats(&a).unwrap();
        assert_eq!(m, num_rational::Ratio::new(15, 8));
        assert!(generate(&"geo(q=1,n=4)".parse().unwrap()).is_err());
        assert!(generate(&"geo(q=-1,n=4)".parse().unwrap()).is_err());
        assert_eq!(rset("geo(q=1/2,n=3,start=4)"), GSet::from_integers(&[1, 2, 4]).unwrap());
    }

    #[test]
    fn arithmetic() {
        let a = rset("ap(n=10,start=1,step=1)");
        assert_eq!(a.len(), 10);
        assert_eq!(combine_support(&a, &a, Op::Add).unwrap().len(), 19);
        assert!(generate(&"ap(n=5,start=-2)".parse().unwrap()).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = rset("rand(n=10,seed=1,max=10^6)");
        assert_eq!(a.len(), 10);
        assert_eq!(a, rset("rand(n=10,seed=1,max=1000000)"));
        assert_ne!(a, rset("rand(n=10,seed=2,max=10^6)"));
        assert!(a.iter().all(|x| x.as_i64().is_some_and(|v| (1..=1_000_000).contains(&v))));
        assert_eq!(rset("rand(n=5,seed=3,max=5)"), GSet::from_integers(&[1, 2, 3, 4, 5]).unwrap());
        assert!(generate(&"rand(n=6,seed=3,max=5)".parse().unwrap()).is_err());
    }

    #[test]
    fn lcg_stream_is_fixed() {
        let mut r = Lcg::new(0);
        let first = r.next_u64();
        let s1 = LCG_INC;
        let s2 = s1.wrapping_mul(LCG_MUL).wrapping_add(LCG_INC);
        assert_eq!(first, ((s1 >> 32) << 32) | (s2 >> 32));
    }

    #[test]
    fn dsl() {
        let s: FamilySpec = "union(geo(q=2,n=3),ap(n=3,start=10))".parse().unwrap();
        assert_eq!(generate(&s).unwrap().len(), 6);
        assert_eq!(s.to_string(), "union(geo(q=2,n=3,start=1),ap(n=3,start=10,step=1))");
        assert_eq!(s.to_string().parse::<FamilySpec>().unwrap(), s);
        let g = generate(&"subgroup(p=1009,t=28)".parse().unwrap()).unwrap();
        assert_eq!(g.len(), 28);
        assert!("geo(q=2,m=3)".parse::<FamilySpec>().is_err());
        assert!("cube(n=3)".parse::<FamilySpec>().is_err());
        assert!(matches!(
            generate(&"union(geo(q=2,n=3),subgroup(p=7,t=3))".parse().unwrap()),
            Err(Error::MixedKinds(..))
        ));
    }
}
