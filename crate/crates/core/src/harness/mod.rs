//! Verification harness: one check per inequality, run over finite sets and
//! subgroups, with exact left and right sides wherever the quantities are
//! integers.
//!
//! A check either holds exactly (`proved-exact`), fails, or only reports a
//! ratio against an asymptotic bound whose constants are unknown
//! (`ratio-only`).

mod checks;
pub mod rect;
pub mod report;

use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::families::{generate, FamilyKind, FamilySpec};
use crate::ground::{is_prime, ModP, Rational};
use crate::incidence::{TripleConvention, GRID_GUARD};
use crate::setops::{AnySet, GSet};
use crate::subgroups::{gap_h, subgroup_context, ScanSpec, SubgroupCtx, TBound};
use crate::{Error, Result};

pub use rect::{rect_decompose, sum_construction_stats, verify_rect, RectCase, RectCover, RectProfile, Rectangle, SumStats};
pub use report::{emit_report, parse_csv, parse_json, ErrorRow, Format, Report, Totals};

/// What a check runs on.
#[derive(Debug, Clone)]
pub enum Subject {
    Rational(GSet<Rational>),
    Residue(GSet<ModP>),
    Subgroup(SubgroupCtx),
}

/// A labelled check input.
#[derive(Debug, Clone)]
pub struct Input {
    pub label: String,
    pub subject: Subject,
}

impl Input {
    pub fn from_set(label: impl Into<String>, set: AnySet) -> Self {
        let subject = match set {
            AnySet::Rational(s) => Subject::Rational(s),
            AnySet::Residue(s) => Subject::Residue(s),
        };
        Input { label: label.into(), subject }
    }

    pub fn from_family(spec: &FamilySpec) -> Result<Self> {
        if let FamilyKind::Subgroup { p, t } = spec.kind {
            return Ok(Input::subgroup(subgroup_context(p, t)?));
        }
        Ok(Input::from_set(spec.label(), generate(spec)?))
    }

    pub fn subgroup(ctx: SubgroupCtx) -> Self {
        Input { label: ctx.label(), subject: Subject::Subgroup(ctx) }
    }

    /// `|A|`, or `t` for a subgroup.
    pub fn size(&self) -> usize {
        match &self.subject {
            Subject::Rational(s) => s.len(),
            Subject::Residue(s) => s.len(),
            Subject::Subgroup(c) => c.t() as usize,
        }
    }

    pub fn is_subgroup(&self) -> bool {
        matches!(self.subject, Subject::Subgroup(_))
    }
}

/// Tunable parts of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Grid guard for collinear-triple counts.
    pub max_grid: usize,
    pub profile: RectProfile,
    /// Convention for the ratio checks that report `𝒯`.
    pub triple: TripleConvention,
    /// Circular gaps (runs may wrap through 0).
    pub circular: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_grid: GRID_GUARD, profile: RectProfile::default(), triple: TripleConvention::Distinct, circular: true }
    }
}

/// Outcome class of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pass {
    #[serde(rename = "proved-exact")]
    ProvedExact,
    #[serde(rename = "ratio-only")]
    RatioOnly,
    #[serde(rename = "failed")]
    Failed,
}

impl Pass {
    pub fn as_str(self) -> &'static str {
        match self {
            Pass::ProvedExact => "proved-exact",
            Pass::RatioOnly => "ratio-only",
            Pass::Failed => "failed",
        }
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Pass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proved-exact" => Ok(Pass::ProvedExact),
            "ratio-only" => Ok(Pass::RatioOnly),
            "failed" => Ok(Pass::Failed),
            _ => Err(Error::Parse(format!("unknown pass value {s:?}"))),
        }
    }
}

/// One row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub input: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(with = "ratio_serde")]
    pub ratio: f64,
    pub pass: Pass,
    pub elapsed_ms: u64,
}

/// Non-finite ratios travel as strings so that JSON round-trips.
mod ratio_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One side of an inequality.
#[derive(Debug, Clone, PartialEq)]
pub enum Side {
    Exact(BigRational),
    Approx(f64),
}

impl Side {
    pub fn int(x: impl Into<BigInt>) -> Self {
        Side::Exact(BigRational::from_integer(x.into()))
    }

    pub fn nat(x: &BigUint) -> Self {
        Side::int(BigInt::from(x.clone()))
    }

    pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Side::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Side::Exact(r) => ratio_to_f64(r),
            Side::Approx(x) => *x,
        }
    }

    /// `log2 |x|`, accurate for huge exact values.
    pub fn log2_abs(&self) -> f64 {
        match self {
            Side::Exact(r) => log2_int(r.numer()) - log2_int(r.denom()),
            Side::Approx(x) => x.abs().log2(),
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Side::Exact(r) => r.is_positive(),
            Side::Approx(x) => *x > 0.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Exact(r) => write!(f, "{r}"),
            Side::Approx(x) if x.is_finite() && *x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e16) => write!(f, "{x:e}"),
            Side::Approx(x) => write!(f, "{x}"),
        }
    }
}

fn log2_int(x: &BigInt) -> f64 {
    let m = x.magnitude();
    let bits = m.bits();
    if bits <= 1000 {
        return m.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    (m >> shift).to_f64().expect("64 bits").log2() + shift as f64
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (n, d) = (r.numer(), r.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let v = (log2_int(n) - log2_int(d)).exp2();
            if n.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

/// `lhs / rhs` as a float, through logarithms when both sides are positive.
pub fn ratio_of(lhs: &Side, rhs: &Side) -> f64 {
    if lhs.is_positive() && rhs.is_positive() {
        (lhs.log2_abs() - rhs.log2_abs()).exp2()
    } else {
        lhs.to_f64() / rhs.to_f64()
    }
}

/// Which kind of input a check takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Any finite set; subgroups are used through their element set.
    Set,
    Subgroup,
}

/// A registered check.
#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub id: &'static str,
    pub kind: InputKind,
    /// True for finite statements that are asserted.
    pub exact: bool,
    /// Smallest `|A|` (or `t`) the check is meaningful for.
    pub min_size: usize,
    pub statement: &'static str,
}

macro_rules! checks {
    ($( $id:literal, $kind:ident, $exact:literal, $min:literal, $stmt:literal; )*) => {
        /// All checks, in report order.
        pub const CHECKS: &[CheckInfo] = &[
            $( CheckInfo { id: $id, kind: InputKind::$kind, exact: $exact, min_size: $min, statement: $stmt }, )*
        ];
    };
}

checks! {
    "e3_identity", Set, true, 1, "Σ r³ = Σ_{d,d'} |A∩(A+d)∩(A+d')|² = Σ_d E(A, A_d)";
    "unit_slope_e3", Set, true, 1, "E₃(A) = Σ k³ over unit-slope lines of A×A";
    "cs_difference", Set, true, 1, "|A-A| ≥ |A|⁴/E(A)";
    "cs_sum", Set, true, 1, "|A+A| ≥ |A|⁴/E(A)";
    "cor1_lower", Set, true, 1, "#{d''=d-d'} ≥ |A|⁶/E₃(A)";
    "pigeonhole", Set, true, 1, "Σ_{d∈P} r(d) ≥ |A|²/2";
    "lemma_key", Set, true, 1, "|A|⁶/4 ≤ E₃(A)·#{(d,d',d'') ∈ D×P×D : d''=d-d'}";
    "sset", Set, true, 2, "|S| ≤ |AA|²/Δ and xP ⊆ S for x ∈ A";
    "prop7", Set, true, 2, "|A|·#{D×P×D} ≤ #{(d,s,d'',x) : d''=d-s/x}";
    "lemma10_a", Set, true, 2, "(T₃|A|²)² ≤ |AA/A|²|AA|²𝒯(A/AA)𝒯(AA), 𝒯 with repeats";
    "lemma10_b", Set, true, 2, "(T₃|A|²)² ≤ |AA/A|²|A/A|²𝒯(AA/A)𝒯(A/A), 𝒯 with repeats";
    "lemma14_delta_one", Set, true, 1, "E'⁶ ≤ |A|⁶E₃Δ²Σ at Δ = 1";
    "lemma14_delta_half", Set, true, 1, "E'⁶ ≤ |A|⁶E₃Δ²Σ at Δ = ⌈max r/2⌉";
    "lemma14_delta_max", Set, true, 1, "E'⁶ ≤ |A|⁶E₃Δ²Σ at Δ = max r";
    "spectral_chain", Set, true, 1, "μ₁(M') ≥ Δ^{-1/2}E'/|A| and v₁ᵀRv₁ ≥ Δ^{1/2}μ₁, tolerance 1e-6";
    "psd_witness", Set, true, 1, "vᵀRv ≥ -1e-9 on 1000 random vectors";
    "trace_routes", Set, true, 1, "tr(M²R) by matrices = by difference triples, tolerance 1e-6";
    "holder_remark4", Set, true, 1, "E³ ≤ E₃³·E_{3/2}², tolerance 1e-6";
    "sigma_split", Set, true, 1, "Σ = Σ' + Σ'' and Σ' ≤ τ·T₃(A)";
    "rect_structure", Set, true, 4, "rich rectangles hold half of 𝒫; case 1 refinement re-verified";
    "sum_construction", Set, true, 4, "Σ_λ|A'_λ| = |A||A'|, E^× ≥ (|A||A'|)²/|A/A|, Q_λ on ≤ |P| lines, Hölder per λ";
    "elekes", Set, false, 1, "|A+A|²|AA|² ≫ |A|⁵";
    "shkredov_sh", Set, false, 1, "|A-A|⁶|AA|¹³ ≳ |A|²³";
    "thm2_main", Set, false, 2, "|A-A|³|AA|⁵ ≫ |A|¹⁰/log^{1/2}|A|";
    "thm3_energy", Set, false, 2, "E(A) ≪ M^{8/5}|A|^{49/20}log^{1/5}|A|";
    "cor11", Set, false, 2, "T₃(A) ≪ M¹²|A|⁴log|A|";
    "trip", Set, false, 3, "𝒯(A) ≪ |A|⁴log|A|";
    "sig", Set, false, 1, "Σ ≲ |A|^{23/5}";
    "thm21_sum", Set, false, 1, "|A+A|¹⁰|AA|¹⁷ ≳ |A|³³";
    "lemma5_b1", Set, false, 2, "E₃(A) ≪ M²|A|³log|A|";
    "lemma5_b3", Set, false, 2, "Σ_{r>Δ} r² ≪ M²|A|³/Δ at Δ = ⌈|A|^{11/20}⌉";
    "cor6", Set, false, 2, "#{d''=d-d'} ≫ |A|³/(M²log|A|)";
    "prop7_st", Set, false, 2, "incidences of d''=d-s/x ≪ (mn)^{2/3}+m+n";
    "pej", Set, false, 2, "max_j |P''_j|τ_j³ ≪ M²|A|³";
    "int_lower", Set, false, 4, "|A+A|⁴|P|² ≳ Σ_λ|Q_λ|³";
    "dual_route_n", Subgroup, true, 1, "Σ_j N_{j,t}(h)² = #{ux ≡ y : 0<|x|,|y|≤h, u∈Γ}";
    "orthogonality", Subgroup, true, 1, "Σ_j |S_j|⁴ < (p/t)E(Γ)";
    "parseval", Subgroup, true, 1, "Σ_{c≠0} |S(c,Γ)|² = t(p-t), tolerance 1e-6";
    "subgr_1_exact", Subgroup, true, 2, "T₃(Γ) ≤ 𝒯(Γ), 𝒯 with repeats";
    "mod_p2", Subgroup, true, 1, "T₃(Γ ⊂ (Z/p²)^*) ≤ T₃(Γ mod p)";
    "gap_witness", Subgroup, true, 1, "H_p(t) from the scan equals a direct search and its witness re-verifies";
    "subgr_2", Subgroup, false, 3, "E(Γ) ≪ t^{49/20}log^{1/5}t";
    "b2", Subgroup, false, 3, "E₃(Γ) ≪ t³log t";
    "thm17", Subgroup, false, 3, "𝒯(Γ) ≤ t⁶/p + range bound";
    "lemma12", Subgroup, false, 3, "T₃(Γ mod p²) ≲ t⁴ (t ≤ √p) or t^{4+6δ}";
    "lemma18", Subgroup, false, 3, "E(Q,Γ) ≪ t²|Q|²/p + t|Q|^{3/2}";
    "thm19", Subgroup, false, 3, "E(Γ) ≪ log^{1/4}t·max((t¹⁰⁴/p³)^{1/40}, (t⁶⁸/p⁵)^{1/24})";
    "thm20", Subgroup, false, 3, "H_p(t) ≤ p^{437/480}";
    "subgr_int", Subgroup, false, 3, "N(Γ,h) ≤ h t^{(2ν+1)/(2ν(ν+1))}p^{-1/(2(ν+1))} + h²t^{1/ν}p^{-1/ν}, ν = 6";
    "ks_criterion", Subgroup, false, 3, "max_k Σ_j N_{j,t}(h)|S_{j+k}| against 0.5t";
}

pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

/// Largest `|A|` a check is run on. The incidence count of Proposition 7
/// makes `|A||AA|^2` hash lookups when `Δ < 1`.
pub fn size_cap(id: &str) -> usize {
    match id {
        "prop7" | "prop7_st" => 48,
        _ => usize::MAX,
    }
}

/// Whether `info` can run on `input`.
pub fn applies(info: &CheckInfo, input: &Input) -> bool {
    (info.kind == InputKind::Set || input.is_subgroup())
        && input.size() >= info.min_size
        && input.size() <= size_cap(info.id)
}

/// Expands a comma-separated list that may contain `all` or `all-exact`.
pub fn expand_checks(list: &str) -> Result<Vec<&'static str>> {
    let mut out: Vec<&'static str> = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let add: Vec<&'static str> = match item {
            "all" => CHECKS.iter().map(|c| c.id).collect(),
            "all-exact" => CHECKS.iter().filter(|c| c.exact).map(|c| c.id).collect(),
            "all-ratio" => CHECKS.iter().filter(|c| !c.exact).map(|c| c.id).collect(),
            id => vec![check_info(id).ok_or_else(|| Error::UnknownCheck(id.to_string()))?.id],
        };
        for id in add {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    Ok(out)
}

/// Evaluated sides plus the verdict of an exact check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub lhs: Side,
    pub rhs: Side,
    /// `None` for ratio-only checks.
    pub holds: Option<bool>,
}

impl Outcome {
    fn ratio(lhs: Side, rhs: Side) -> Self {
        Outcome { lhs, rhs, holds: None }
    }

    fn exact(lhs: Side, rhs: Side, holds: bool) -> Self {
        Outcome { lhs, rhs, holds: Some(holds) }
    }
}

/// Runs one check on one input.
pub fn run_check(check_id: &str, input: &Input, opts: &Options) -> Result<CheckResult> {
    let info = check_info(check_id).ok_or_else(|| Error::UnknownCheck(check_id.to_string()))?;
    if !applies(info, input) {
        return Err(Error::BadSpec(format!("check {check_id} needs a subgroup input, got {}", input.label)));
    }
    let start = Instant::now();
    let out = match &input.subject {
        Subject::Rational(a) => checks::set_check(info.id, a, opts)?,
        Subject::Residue(a) => checks::set_check(info.id, a, opts)?,
        Subject::Subgroup(ctx) => match info.kind {
            InputKind::Set => checks::set_check(info.id, &ctx.gamma_set(), opts)?,
            InputKind::Subgroup => checks::subgroup_check(info.id, ctx, opts)?,
        },
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let pass = match (info.exact, out.holds) {
        (true, Some(true)) => Pass::ProvedExact,
        (true, _) => Pass::Failed,
        (false, _) => Pass::RatioOnly,
    };
    Ok(CheckResult {
        check_id: info.id.to_string(),
        input: input.label.clone(),
        ratio: ratio_of(&out.lhs, &out.rhs),
        lhs: out.lhs.to_string(),
        rhs: out.rhs.to_string(),
        pass,
        elapsed_ms,
    })
}

/// A `(check, input)` pair that could not be evaluated.
#[derive(Debug)]
pub struct SuiteError {
    pub check_id: String,
    pub input: String,
    pub error: Error,
}

/// Runs every applicable `(check, input)` pair on a pool of `jobs` workers.
/// Results come back check-major in the requested order, independent of
/// scheduling.
pub fn run_suite(
    check_ids: &[&str],
    inputs: &[Input],
    opts: &Options,
    jobs: usize,
) -> Result<Vec<std::result::Result<CheckResult, SuiteError>>> {
    let mut pairs = Vec::new();
    for id in check_ids {
        let info = check_info(id).ok_or_else(|| Error::UnknownCheck(id.to_string()))?;
        for input in inputs {
            if applies(info, input) {
                pairs.push((info.id, input));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::BadSpec(format!("worker pool: {e}")))?;
    Ok(pool.install(|| {
        pairs
            .par_iter()
            .map(|(id, input)| {
                run_check(id, input, opts).map_err(|error| SuiteError {
                    check_id: id.to_string(),
                    input: input.label.clone(),
                    error,
                })
            })
            .collect()
    }))
}

/// Subgroups `(p, t)` with `p <= p_max`, `t | p-1` and `t <= sqrt(p)`.
pub fn small_subgroups(p_max: u64, t_min: u64) -> Vec<(u64, u64)> {
    ScanSpec { p_lo: 3, p_hi: p_max, t_lo: TBound::Const(t_min), t_hi: TBound::SqrtP }.cases()
}

/// The exact-check corpus: geometric `n = 4..16`, arithmetic `n = 4..32`,
/// random `n = 4..32` in `[1, 1000]`, and subgroups with `p <= 1009`,
/// `t <= sqrt(p)`.
pub fn standard_corpus() -> Result<Vec<Input>> {
    let mut specs: Vec<FamilySpec> = Vec::new();
    specs.extend((4..=16).map(|n| FamilySpec::geometric(2, n)));
    specs.extend((4..=32).map(|n| FamilySpec::arithmetic(n)));
    specs.extend((4..=32).map(|n| FamilySpec::random(n, n as u64, 1000)));
    let mut out: Vec<Input> = specs.iter().map(Input::from_family).collect::<Result<_>>()?;
    for (p, t) in small_subgroups(1009, 1) {
        out.push(Input::subgroup(subgroup_context(p, t)?));
    }
    Ok(out)
}

/// Primes spread roughly geometrically up to `p_max`, each paired with the
/// largest `t | p-1` with `3 <= t <= sqrt(p)`.
pub fn subgroup_scan(p_max: u64, samples: usize) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    let lo = 50f64.ln();
    let hi = (p_max as f64).ln();
    for k in 0..samples {
        let target = (lo + (hi - lo) * k as f64 / (samples.max(2) - 1) as f64).exp() as u64;
        let mut p = target.min(p_max);
        while p > 2 {
            let best = (3..=(p as f64).sqrt() as u64).rev().find(|t| (p - 1) % t == 0);
            if is_prime(p) && best.is_some() {
                if !out.iter().any(|&(q, _)| q == p) {
                    out.push((p, best.expect("checked")));
                }
                break;
            }
            p -= 1;
        }
    }
    out
}

/// Sets of the ratio corpus: geometric and arithmetic progressions and
/// random sets for `n = 8, 16, ..., 64`.
pub fn ratio_sets() -> Result<Vec<Input>> {
    let mut specs: Vec<FamilySpec> = Vec::new();
    for n in (8..=64).step_by(8) {
        specs.push(FamilySpec::geometric(2, n));
        specs.push(FamilySpec::arithmetic(n));
        specs.push(FamilySpec::random(n, n as u64, 100_000));
    }
    specs.iter().map(Input::from_family).collect()
}

/// Subgroups of the ratio corpus: a scan up to `10^5`.
pub fn ratio_subgroups() -> Result<Vec<Input>> {
    subgroup_scan(100_000, 24).into_iter().map(|(p, t)| Ok(Input::subgroup(subgroup_context(p, t)?))).collect()
}

/// Both halves of the ratio corpus.
pub fn ratio_corpus() -> Result<Vec<Input>> {
    let mut out = ratio_sets()?;
    out.extend(ratio_subgroups()?);
    Ok(out)
}

/// Every ratio-only check on its half of the ratio corpus: set checks on
/// the sets, subgroup checks on the subgroups. Results are check-major.
pub fn run_ratio_suite(
    opts: &Options,
    jobs: usize,
) -> Result<(Vec<Input>, Vec<std::result::Result<CheckResult, SuiteError>>)> {
    let sets = ratio_sets()?;
    let subgroups = ratio_subgroups()?;
    let mut out = Vec::new();
    for info in CHECKS.iter().filter(|c| !c.exact) {
        let inputs = if info.kind == InputKind::Set { &sets } else { &subgroups };
        out.extend(run_suite(&[info.id], inputs, opts, jobs)?);
    }
    let mut inputs = sets;
    inputs.extend(subgroups);
    Ok((inputs, out))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

/// Log-log slopes of one check across one family, against `|A|` (or `t`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub check_id: String,
    pub family: String,
    pub points: usize,
    pub slope_lhs: Option<f64>,
    pub slope_rhs: Option<f64>,
    pub slope_ratio: Option<f64>,
}

fn family_of(label: &str) -> &str {
    label.split('(').next().unwrap_or(label)
}

/// Groups results by check and family and fits slopes against input size.
pub fn trends(results: &[CheckResult], inputs: &[Input]) -> Vec<Trend> {
    let size = |label: &str| inputs.iter().find(|i| i.label == label).map(|i| i.size() as f64);
    let mut groups: Vec<((String, String), Vec<&CheckResult>)> = Vec::new();
    for r in results {
        let key = (r.check_id.clone(), family_of(&r.input).to_string());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|((check_id, family), rs)| {
            let series = |f: &dyn Fn(&CheckResult) -> Option<f64>| -> Vec<(f64, f64)> {
                rs.iter().filter_map(|r| Some((size(&r.input)?, f(r)?))).collect()
            };
            let parse = |s: &str| -> Option<f64> { s.parse::<BigRational>().ok().map(|r| ratio_to_f64(&r)).or_else(|| s.parse().ok()) };
            Trend {
                points: rs.len(),
                slope_lhs: loglog_slope(&series(&|r| parse(&r.lhs))),
                slope_rhs: loglog_slope(&series(&|r| parse(&r.rhs))),
                slope_ratio: loglog_slope(&series(&|r| Some(r.ratio))),
                check_id,
                family,
            }
        })
        .collect()
}

/// One row of a gap scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub p: u64,
    pub t: u64,
    pub h: u64,
    /// `log H / log p`.
    pub exponent: f64,
}

/// `H_p(t)` for every case of `spec`, on `jobs` workers.
pub fn gap_scan(spec: &ScanSpec, circular: bool, jobs: usize) -> Result<Vec<GapRow>> {
    gap_rows(&spec.cases(), circular, jobs)
}

/// `H_p(t)` for the given `(p, t)` pairs, in input order.
pub fn gap_rows(cases: &[(u64, u64)], circular: bool, jobs: usize) -> Result<Vec<GapRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::BadSpec(format!("worker pool: {e}")))?;
    pool.install(|| {
        cases
            .par_iter()
            .map(|&(p, t)| {
                let ctx = subgroup_context(p, t)?;
                let h = gap_h(&ctx, circular)?.h;
                Ok(GapRow { p, t, h, exponent: (h as f64).ln() / (p as f64).ln() })
            })
            .collect()
    })
}

/// The reference exponent of the gap theorem.
pub const GAP_EXPONENT: f64 = 437.0 / 480.0;

#[cfg(test)]
mod tests {
    use super::*;

    fn ap3() -> Input {
        Input::from_set("ap3", AnySet::Rational(GSet::from_integers(&[1, 2, 3]).unwrap()))
    }

    #[test]
    fn elekes_worked_values() {
        let r = run_check("elekes", &ap3(), &Options::default()).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("900", "243"));
        assert!((r.ratio - 900.0 / 243.0).abs() < 1e-12);
        assert_eq!(r.pass, Pass::RatioOnly);
    }

    #[test]
    fn lemma_key_worked_values() {
        let r = run_check("lemma_key", &ap3(), &Options::default()).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("729/4", "855"));
        assert_eq!(r.pass, Pass::ProvedExact);
    }

    #[test]
    fn registry() {
        assert!(matches!(expand_checks("nope"), Err(Error::UnknownCheck(_))));
        let exact = expand_checks("all-exact").unwrap();
        assert!(exact.iter().all(|id| check_info(id).unwrap().exact));
        assert_eq!(expand_checks("all").unwrap().len(), CHECKS.len());
        assert_eq!(expand_checks("elekes, elekes,trip").unwrap(), vec!["elekes", "trip"]);
        let set_input = ap3();
        assert!(matches!(run_check("parseval", &set_input, &Options::default()), Err(Error::BadSpec(_))));
    }

    #[test]
    fn suite_order_and_totals() {
        let inputs = vec![ap3(), Input::subgroup(subgroup_context(7, 3).unwrap())];
        let ids = ["e3_identity", "dual_route_n", "elekes"];
        let one = run_suite(&ids, &inputs, &Options::default(), 1).unwrap();
        let many = run_suite(&ids, &inputs, &Options::default(), 3).unwrap();
        let key = |v: &[std::result::Result<CheckResult, SuiteError>]| -> Vec<(String, String, String)> {
            v.iter().map(|r| r.as_ref().map(|c| (c.check_id.clone(), c.input.clone(), c.lhs.clone())).unwrap()).collect()
        };
        assert_eq!(key(&one), key(&many));
        // Set checks run on both inputs, the subgroup check on one.
        assert_eq!(one.len(), 5);
        assert_eq!(key(&one)[2].0, "dual_route_n");
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 3.0 * (k as f64).powf(2.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.5).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn gap_rows_match_scan() {
        let spec = ScanSpec { p_lo: 3, p_hi: 60, t_lo: TBound::SqrtP, t_hi: TBound::PMinusOne };
        let rows = gap_scan(&spec, true, 2).unwrap();
        assert_eq!(rows.len(), spec.cases().len());
        let r = rows.iter().find(|r| (r.p, r.t) == (7, 3)).unwrap();
        assert_eq!(r.h, 3);
    }
}
