//! Versioned JSON reports and the human-readable tables rendered from them.
//!
//! Tables are produced only from the deserialized report, so a report read
//! back from JSON renders to exactly the same text.

use std::fmt::{self, Display, Formatter};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sosdiag_core::hermitian::SosVerdict;
use sosdiag_core::verify::{SweepMode, VerificationReport, Verdict};
use sosdiag_core::MultiIndex;

use crate::format::{FormJson, PolynomialJson};

pub const SCHEMA: &str = "sosdiag.report/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: String,
    #[serde(flatten)]
    pub report: Report,
}

impl Envelope {
    pub fn new(report: Report) -> Self {
        Self { schema: SCHEMA.to_string(), report }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let env: Envelope = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if env.schema != SCHEMA {
            return Err(format!("unsupported schema {:?}, expected {SCHEMA:?}", env.schema));
        }
        Ok(env)
    }
}

impl Display for Envelope {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.report {
            Report::Analyze(r) => r.fmt(f),
            Report::Configuration(r) => r.fmt(f),
            Report::Verify(r) => r.fmt(f),
            Report::Ballmap(r) => r.fmt(f),
            Report::Fixtures(r) => r.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Analyze(AnalyzeReport),
    Configuration(ConfigurationReport),
    Verify(VerifyReport),
    Ballmap(BallmapReport),
    Fixtures(FixturesReport),
}

impl Report {
    /// 0 pass, 1 violation, 3 incomplete.
    pub fn exit_code(&self) -> u8 {
        match self {
            Report::Analyze(r) => match &r.min_rank {
                Some(MinRankField::Incomplete { .. }) => 3,
                Some(MinRankField::Found { window: Some(w), .. }) if !w.is_consistent() => 1,
                _ if r.product.window.is_some_and(|w| !w.is_consistent()) => 1,
                _ => 0,
            },
            Report::Configuration(_) => 0,
            Report::Verify(r) => verdict_code(r.verdict),
            Report::Ballmap(r) => match &r.outcome {
                BallmapOutcome::Found { checks, .. } if checks.all() => 0,
                BallmapOutcome::Found { .. } => 1,
                BallmapOutcome::Unresolved { .. } => 3,
            },
            Report::Fixtures(r) => verdict_code(r.verdict),
        }
    }
}

pub fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Violation => 1,
        Verdict::Incomplete => 3,
    }
}

/// Worst of several verdicts: any violation, else any incomplete, else pass.
pub fn combine_verdicts(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
        (Verdict::Violation, _) | (_, Verdict::Violation) => Verdict::Violation,
        (Verdict::Incomplete, _) | (_, Verdict::Incomplete) => Verdict::Incomplete,
        _ => Verdict::Pass,
    })
}

fn window_text(w: &SosVerdict) -> String {
    match w {
        SosVerdict::InWindow { k, low, high } => format!("in window k = {k}, [{low}, {high}]"),
        SosVerdict::AboveThreshold { threshold } => format!("at or above threshold {threshold}"),
        SosVerdict::Violation { below, above } => format!("VIOLATION, strictly between {below} and {above}"),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.join(", ")
    }
}

fn write_form_lines(f: &mut Formatter<'_>, indent: &str, terms: &[crate::format::TermJson]) -> fmt::Result {
    for t in terms {
        let c = if t.den == "1" { t.num.clone() } else { format!("{}/{}", t.num, t.den) };
        let sign = if c.starts_with('-') { "" } else { "+" };
        let a = MultiIndex::new(t.exponents.clone());
        if a.degree() == 0 {
            writeln!(f, "{indent}{sign}{c}")?;
        } else {
            writeln!(f, "{indent}{sign}{c} {a}")?;
        }
    }
    Ok(())
}

/// Values for the ideals `I_f`, `I_g`, `I_{f⊕g}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealTriple {
    pub f: u64,
    pub g: u64,
    pub fg: u64,
}

/// The given coefficients: rank of `s·q` and whether it is a squared norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRecord {
    pub rank: usize,
    pub squared_norm: bool,
    pub window: Option<SosVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MinRankField {
    Found { rank: usize, signed_rank: usize, witness: FormJson, window: Option<SosVerdict>, lp_count: usize },
    Infeasible { signed_rank: usize },
    Incomplete { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub form: FormJson,
    pub n: usize,
    pub d: u32,
    pub signature: (usize, usize),
    /// Hilbert function values at `d`.
    pub hilbert: IdealTriple,
    /// `β_{1,d}` as `(α, β, γ)`.
    pub betti: IdealTriple,
    pub node_count: u64,
    pub pi_degree: u32,
    pub components: usize,
    pub connected: bool,
    pub betti_rank_bound: i64,
    /// `M(P + N) - H_{I_g}(d)`.
    pub macaulay_floor: i64,
    pub product: ProductRecord,
    pub feasible: bool,
    pub feasibility_witness: Option<FormJson>,
    pub min_rank: Option<MinRankField>,
    pub diagram: Option<Vec<String>>,
}

impl Display for AnalyzeReport {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let (p, n) = self.signature;
        writeln!(f, "form: n = {}, degree {} (d = {})", self.n, self.form.degree, self.d)?;
        write_form_lines(f, "  ", &self.form.terms)?;
        writeln!(f, "signature pair (P, N):      ({p}, {n})")?;
        writeln!(f, "H_d for I_f, I_g, I_f+g:    {}, {}, {}", self.hilbert.f, self.hilbert.g, self.hilbert.fg)?;
        writeln!(f, "beta_1,d (alpha, beta, gamma): ({}, {}, {})", self.betti.f, self.betti.g, self.betti.fg)?;
        writeln!(f, "#(sq) node count:           {}", self.node_count)?;
        writeln!(f, "pi-degree:                  {}", self.pi_degree)?;
        writeln!(f, "Newton graph:               {} component(s), connected: {}", self.components, yes_no(self.connected))?;
        writeln!(f, "Betti rank bound:           {}", self.betti_rank_bound)?;
        writeln!(f, "Macaulay floor M(P+N) - H_g: {}", self.macaulay_floor)?;
        writeln!(f, "rank of s*q as given:       {}", self.product.rank)?;
        writeln!(f, "s*q is a squared norm:      {}", yes_no(self.product.squared_norm))?;
        if let Some(w) = &self.product.window {
            writeln!(f, "SOS window (given):         {}", window_text(w))?;
        }
        writeln!(f, "squared-norm feasible:      {}", yes_no(self.feasible))?;
        if let Some(w) = &self.feasibility_witness {
            writeln!(f, "feasibility witness:")?;
            write_form_lines(f, "  ", &w.terms)?;
        }
        match &self.min_rank {
            None => {}
            Some(MinRankField::Found { rank, signed_rank, witness, window, lp_count }) => {
                writeln!(f, "min rank (squared norm):    {rank}")?;
                writeln!(f, "min rank (signed):          {signed_rank}")?;
                if let Some(w) = window {
                    writeln!(f, "SOS window (min rank):      {}", window_text(w))?;
                }
                writeln!(f, "linear programs solved:     {lp_count}")?;
                writeln!(f, "min rank witness:")?;
                write_form_lines(f, "  ", &witness.terms)?;
            }
            Some(MinRankField::Infeasible { signed_rank }) => {
                writeln!(f, "min rank (squared norm):    infeasible")?;
                writeln!(f, "min rank (signed):          {signed_rank}")?;
            }
            Some(MinRankField::Incomplete { reason }) => writeln!(f, "min rank:                   INCOMPLETE ({reason})")?,
        }
        if let Some(rows) = &self.diagram {
            writeln!(f, "Newton diagram:")?;
            for row in rows {
                writeln!(f, "  {row}")?;
            }
        }
        Ok(())
    }
}

/// Analysis of a set of negative generators `I_g` in degree `d - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationReport {
    pub n: usize,
    pub d: u32,
    pub generators: Vec<String>,
    pub hilbert_g: u64,
    pub beta: u64,
    /// Positive generators forced by `(I_g)_d ⊆ (I_f)_d`.
    pub forced: Vec<String>,
    /// Fewest positive generators covering `(I_g)_d`; absent when the search is too large.
    pub min_positive: Option<usize>,
    /// `M(P + N) - H_{I_g}(d)` with `P` the cover size.
    pub floor: Option<i64>,
    /// Some monomial of `(I_g)_d` has no non-negative divisor.
    pub unreachable: bool,
}

impl Display for ConfigurationReport {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "not computed".to_string());
        writeln!(f, "negative generators (n = {}, d = {}):", self.n, self.d)?;
        for g in &self.generators {
            writeln!(f, "  {g}")?;
        }
        writeln!(f, "H_d(I_g):            {}", self.hilbert_g)?;
        writeln!(f, "beta_1,d(I_g):       {}", self.beta)?;
        writeln!(f, "forced positive:     {}", list(&self.forced))?;
        writeln!(f, "min positive cover:  {}", opt(self.min_positive.map(|p| p.to_string())))?;
        writeln!(f, "rank floor:          {}", opt(self.floor.map(|p| p.to_string())))?;
        writeln!(f, "unreachable monomial: {}", yes_no(self.unreachable))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub dm1: u32,
    pub mode: SweepMode,
    pub seed: u64,
    pub sweeps: Vec<VerificationReport>,
    pub verdict: Verdict,
    /// SHA-256 of the sweeps with wall-clock data and worker counts removed.
    pub digest: String,
}

impl VerifyReport {
    pub fn new(dm1: u32, mode: SweepMode, seed: u64, sweeps: Vec<VerificationReport>) -> Self {
        let verdict = combine_verdicts(sweeps.iter().map(VerificationReport::verdict));
        let digest = sweep_digest(&sweeps);
        Self { dm1, mode, seed, sweeps, verdict, digest }
    }
}

pub fn sweep_digest(sweeps: &[VerificationReport]) -> String {
    let normalized: Vec<VerificationReport> = sweeps
        .iter()
        .cloned()
        .map(|mut r| {
            r.timing = None;
            if let Some(c) = r.config.as_mut() {
                c.workers = 0;
            }
            r
        })
        .collect();
    let bytes = serde_json::to_vec(&normalized).expect("reports serialize");
    format!("{:x}", Sha256::digest(bytes))
}

fn write_sweep(f: &mut Formatter<'_>, r: &VerificationReport) -> fmt::Result {
    writeln!(f, "[{}] {}", r.kind, r.verdict())?;
    writeln!(f, "  range {}..{}, examined {}, applicable {}", r.range.0, r.range.1, r.examined, r.applicable)?;
    writeln!(f, "  pre-filtered {}, feasible {}", r.prefiltered, r.feasible)?;
    let a = &r.audit;
    writeln!(
        f,
        "  audit: pre-filter {}/{} confirmed, reversed order {}/{} agreed",
        a.prefilter_confirmed, a.prefilter_checked, a.reversed_agreed, a.reversed_checked
    )?;
    if !r.histogram.is_empty() {
        writeln!(f, "  {:>4} {:>4} {:>5} {:>10}", "P", "N", "rank", "count")?;
        for h in &r.histogram {
            writeln!(f, "  {:>4} {:>4} {:>5} {:>10}", h.p, h.n, h.rank, h.count)?;
        }
    }
    for v in &r.violations {
        writeln!(
            f,
            "  violation {} at pattern {}: {} (P: {}; N: {})",
            v.rule,
            v.pattern.index,
            v.detail,
            list(&v.pattern.positive),
            list(&v.pattern.negative)
        )?;
    }
    for u in &r.unresolved {
        writeln!(f, "  unresolved pattern {}: {}", u.pattern.index, u.reason)?;
    }
    if let Some(t) = &r.timing {
        writeln!(f, "  elapsed {} ms on {} worker(s)", t.elapsed_ms, t.workers)?;
    }
    Ok(())
}

impl Display for VerifyReport {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            SweepMode::Exhaustive => "exhaustive".to_string(),
            SweepMode::Random { samples } => format!("random, {samples} samples, seed {}", self.seed),
        };
        writeln!(f, "verify d-1 = {} ({mode})", self.dm1)?;
        for r in &self.sweeps {
            write_sweep(f, r)?;
        }
        writeln!(f, "digest {}", self.digest)?;
        writeln!(f, "verdict: {}", self.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallmapChecks {
    pub in_class_p: bool,
    pub degree_bound: bool,
    pub flip_rank: usize,
    pub flip_rank_bound: bool,
    /// Coefficient of the pure last-variable power in the flipped form.
    pub flip_last_pure: String,
}

impl BallmapChecks {
    pub fn all(&self) -> bool {
        self.in_class_p && self.degree_bound && self.flip_rank_bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BallmapOutcome {
    Found {
        k_min: usize,
        supports_tried: u64,
        witness: PolynomialJson,
        witness_text: Vec<String>,
        components: Vec<String>,
        checks: BallmapChecks,
    },
    Unresolved {
        lower_bound: usize,
        supports_tried: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallmapReport {
    pub n: usize,
    pub d: u32,
    pub budget: Option<u64>,
    pub outcome: BallmapOutcome,
}

impl Display for BallmapReport {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "ball maps: n = {}, d = {}", self.n, self.d)?;
        match &self.outcome {
            BallmapOutcome::Found { k_min, supports_tried, witness_text, components, checks, .. } => {
                writeln!(f, "k_min:              {k_min}")?;
                writeln!(f, "supports tried:     {supports_tried}")?;
                writeln!(f, "witness:")?;
                for line in witness_text {
                    writeln!(f, "  {line}")?;
                }
                writeln!(f, "map components:     {}", components.join(", "))?;
                writeln!(f, "in class P:         {}", yes_no(checks.in_class_p))?;
                writeln!(f, "degree bound holds: {}", yes_no(checks.degree_bound))?;
                writeln!(f, "flipped form rank:  {}", checks.flip_rank)?;
                writeln!(f, "flip rank bound:    {}", yes_no(checks.flip_rank_bound))?;
                writeln!(f, "last pure coeff:    {}", checks.flip_last_pure)?;
                writeln!(f, "verdict: {}", if checks.all() { "PASS" } else { "VIOLATION" })
            }
            BallmapOutcome::Unresolved { lower_bound, supports_tried } => {
                writeln!(f, "k_min:              >= {lower_bound}")?;
                writeln!(f, "supports tried:     {supports_tried}")?;
                writeln!(f, "verdict: INCOMPLETE (budget {})", self.budget.map_or("none".to_string(), |b| b.to_string()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixturesReport {
    pub report: VerificationReport,
    pub verdict: Verdict,
}

impl Display for FixturesReport {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4}  {:<34} {:>3} {:>4} {:>5} {:>5}  match", "case", "negative generators", "H", "beta", "min P", "floor")?;
        for r in &self.report.fixtures {
            writeln!(
                f,
                "{:>4}  {:<34} {:>3} {:>4} {:>5} {:>5}  {}",
                r.case,
                r.generators.join(", "),
                r.hilbert_g,
                r.beta,
                r.min_positive,
                r.floor,
                yes_no(r.matches)
            )?;
        }
        for v in &self.report.violations {
            writeln!(f, "violation {}: {}", v.rule, v.detail)?;
        }
        writeln!(f, "verdict: {}", self.verdict)
    }
}
