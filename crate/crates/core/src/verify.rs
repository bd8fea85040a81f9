//! Exhaustive and sampled sweeps over sign patterns in three variables.
//!
//! Pattern `i` assigns every degree-`(d-1)` monomial a state, read off the
//! base-3 digits of `i` in canonical monomial order (0 absent, 1 positive,
//! 2 negative). Sampled sweeps draw the digits from a ChaCha stream keyed by
//! the seed and the sample index, so any index range can be evaluated on its
//! own and the partial reports merged in range order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::macaulay_function;
use crate::grid::{self, Grid, Mask};
use crate::hermitian::{squared_norm_magnitudes, MinRankError, MinRankOptions, RankMode, RankProblem, SupportPattern};
use crate::ideal::MonomialIdeal;
use crate::multiindex::{enumerate_multiindices, MultiIndex};
use crate::newton::{betti_rank_bound, fill_to_full, node_count, te_partition, triple_rule_holds};

/// Largest `d - 1` accepted for exhaustive sweeps (`3^15` patterns).
pub const EXHAUSTIVE_CEILING_DM1: u32 = 4;

/// Largest `d - 1` accepted for sampled sweeps.
pub const RANDOM_CEILING_DM1: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Sos,
    Propositions,
    LpTheorem,
    Fixtures,
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sos => "sos",
            Self::Propositions => "propositions",
            Self::LpTheorem => "lp-theorem",
            Self::Fixtures => "fixtures",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum SweepMode {
    Exhaustive,
    Random { samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub dm1: u32,
    pub mode: SweepMode,
    /// Worker threads requested; has no effect on the result.
    pub workers: usize,
    pub ambiguous_cap: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn exhaustive(dm1: u32) -> Self {
        Self { n: 3, dm1, mode: SweepMode::Exhaustive, workers: 1, ambiguous_cap: 24, seed: 0 }
    }

    pub fn random(dm1: u32, samples: u64, seed: u64) -> Self {
        Self { n: 3, dm1, mode: SweepMode::Random { samples }, workers: 1, ambiguous_cap: 24, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepError {
    NotThreeVariables(usize),
    AboveCeiling { dm1: u32, ceiling: u32 },
    /// `Fixtures` has no pattern range.
    NotASweep,
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotThreeVariables(n) => write!(f, "sweeps need n = 3, got {n}"),
            Self::AboveCeiling { dm1, ceiling } => {
                write!(f, "degree d-1 = {dm1} is above the ceiling {ceiling} for this mode")
            }
            Self::NotASweep => f.write_str("fixture checks are not a pattern sweep"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Violation,
    Incomplete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::Violation => "VIOLATION",
            Self::Incomplete => "INCOMPLETE",
        })
    }
}

/// A pattern written out as monomial strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub index: u64,
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

impl PatternRecord {
    fn new(index: u64, pattern: &SupportPattern) -> Self {
        let show = |s: &alloc::collections::BTreeSet<MultiIndex>| s.iter().map(|a| format!("{a}")).collect();
        Self { index, positive: show(pattern.positive()), negative: show(pattern.negative()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub pattern: PatternRecord,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unresolved {
    pub pattern: PatternRecord,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    /// Pre-filtered patterns re-solved by the LP.
    pub prefilter_checked: u64,
    pub prefilter_confirmed: u64,
    /// Minimum ranks recomputed with the ambiguous set visited in reverse.
    pub reversed_checked: u64,
    pub reversed_agreed: u64,
}

/// Number of patterns with signature pair `(p, n)` and minimum rank `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HistogramRow {
    pub p: usize,
    pub n: usize,
    pub rank: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub workers: usize,
}

/// Fixture comparison for one case and one variable permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub case: u8,
    pub generators: Vec<String>,
    pub hilbert_g: u64,
    pub beta: u64,
    pub forced: Vec<String>,
    pub min_positive: usize,
    pub floor: u64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: SweepKind,
    pub config: Option<SweepConfig>,
    /// Half-open index range covered.
    pub range: (u64, u64),
    pub examined: u64,
    /// Patterns the check applies to (connected and primitive for the LP theorem).
    pub applicable: u64,
    /// Patterns rejected by the containment pre-filter.
    pub prefiltered: u64,
    pub feasible: u64,
    pub histogram: Vec<HistogramRow>,
    pub violations: Vec<Violation>,
    pub unresolved: Vec<Unresolved>,
    pub audit: Audit,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixtures: Vec<FixtureRecord>,
    /// Wall-clock data; the only field that varies between identical runs.
    #[serde(default)]
    pub timing: Option<Timing>,
}

impl VerificationReport {
    pub fn empty(kind: SweepKind, config: Option<SweepConfig>, start: u64) -> Self {
        Self {
            kind,
            config,
            range: (start, start),
            examined: 0,
            applicable: 0,
            prefiltered: 0,
            feasible: 0,
            histogram: Vec::new(),
            violations: Vec::new(),
            unresolved: Vec::new(),
            audit: Audit::default(),
            fixtures: Vec::new(),
            timing: None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if !self.violations.is_empty() {
            Verdict::Violation
        } else if !self.unresolved.is_empty() {
            Verdict::Incomplete
        } else {
            Verdict::Pass
        }
    }

    /// Appends a report covering the range immediately after this one.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        assert_eq!(self.kind, other.kind, "merging reports of different sweeps");
        assert_eq!(self.range.1, other.range.0, "merging non-adjacent ranges");
        self.range.1 = other.range.1;
        self.examined += other.examined;
        self.applicable += other.applicable;
        self.prefiltered += other.prefiltered;
        self.feasible += other.feasible;
        let mut hist: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
        for row in self.histogram.iter().chain(&other.histogram) {
            *hist.entry((row.p, row.n, row.rank)).or_default() += row.count;
        }
        self.histogram = hist.into_iter().map(|((p, n, rank), count)| HistogramRow { p, n, rank, count }).collect();
        self.violations.extend(other.violations);
        self.unresolved.extend(other.unresolved);
        self.audit.prefilter_checked += other.audit.prefilter_checked;
        self.audit.prefilter_confirmed += other.audit.prefilter_confirmed;
        self.audit.reversed_checked += other.audit.reversed_checked;
        self.audit.reversed_agreed += other.audit.reversed_agreed;
        self.fixtures.extend(other.fixtures);
        self.timing = None;
        self
    }

    /// Minimum ranks seen for each signature pair.
    pub fn ranks_by_pair(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for row in &self.histogram {
            out.entry((row.p, row.n)).or_default().push(row.rank);
        }
        out
    }

    fn record_rank(&mut self, p: usize, n: usize, rank: usize) {
        match self.histogram.binary_search_by(|r| (r.p, r.n, r.rank).cmp(&(p, n, rank))) {
            Ok(i) => self.histogram[i].count += 1,
            Err(i) => self.histogram.insert(i, HistogramRow { p, n, rank, count: 1 }),
        }
    }
}

/// Pattern source and per-pattern checks for one configuration.
pub struct Sweep {
    kind: SweepKind,
    config: SweepConfig,
    grid: Grid,
    total: u64,
    opts: MinRankOptions,
}

impl Sweep {
    pub fn new(kind: SweepKind, config: SweepConfig) -> Result<Self, SweepError> {
        if kind == SweepKind::Fixtures {
            return Err(SweepError::NotASweep);
        }
        if config.n != 3 {
            return Err(SweepError::NotThreeVariables(config.n));
        }
        let (ceiling, total) = match config.mode {
            SweepMode::Exhaustive => (EXHAUSTIVE_CEILING_DM1, None),
            SweepMode::Random { samples } => (RANDOM_CEILING_DM1, Some(samples)),
        };
        if config.dm1 > ceiling {
            return Err(SweepError::AboveCeiling { dm1: config.dm1, ceiling });
        }
        let grid = Grid::new(config.n, config.dm1).expect("below the ceiling");
        let total = total.unwrap_or_else(|| 3u64.pow(grid.lower().len() as u32));
        let opts = MinRankOptions { ambiguous_cap: config.ambiguous_cap, reversed: false, lp_budget: None };
        Ok(Self { kind, config, grid, total, opts })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Pattern `index` as masks, and whether it is in the audit subsample.
    pub fn pattern(&self, index: u64) -> (Mask, Mask, bool) {
        let m = self.grid.lower().len();
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index);
        let (mut pos, mut neg) = (0, 0);
        let mut code = index;
        for i in 0..m {
            let digit = match self.config.mode {
                SweepMode::Exhaustive => {
                    let d = code % 3;
                    code /= 3;
                    d
                }
                SweepMode::Random { .. } => rng.gen_range(0..3),
            };
            match digit {
                1 => pos |= 1 << i,
                2 => neg |= 1 << i,
                _ => {}
            }
        }
        let audit = rng.gen_range(0..100u32) == 0;
        (pos, neg, audit)
    }

    /// Evaluates patterns `start..end`.
    pub fn run_range(&self, start: u64, end: u64) -> VerificationReport {
        let end = end.min(self.total);
        let mut report = VerificationReport::empty(self.kind, Some(self.config.clone()), start);
        for index in start..end.max(start) {
            let (pos, neg, audit) = self.pattern(index);
            report.examined += 1;
            match self.kind {
                SweepKind::Sos | SweepKind::Propositions => self.check_sos(&mut report, index, pos, neg, audit),
                SweepKind::LpTheorem => self.check_lp(&mut report, index, pos, neg, audit),
                SweepKind::Fixtures => unreachable!("rejected in new"),
            }
        }
        report.range = (start, end.max(start));
        report
    }

    pub fn run(&self) -> VerificationReport {
        self.run_range(0, self.total)
    }

    fn record(&self, index: u64, pos: Mask, neg: Mask) -> PatternRecord {
        PatternRecord::new(index, &SupportPattern::from_masks(&self.grid, pos, neg))
    }

    fn violation(&self, report: &mut VerificationReport, rule: &str, index: u64, pos: Mask, neg: Mask, detail: String) {
        let pattern = self.record(index, pos, neg);
        report.violations.push(Violation { rule: rule.into(), pattern, detail });
    }

    fn unresolved(&self, report: &mut VerificationReport, index: u64, pos: Mask, neg: Mask, e: MinRankError) {
        let pattern = self.record(index, pos, neg);
        report.unresolved.push(Unresolved { pattern, reason: format!("{e}") });
    }

    fn reversed_audit(&self, report: &mut VerificationReport, mode: RankMode, pos: Mask, neg: Mask, rank: usize) {
        let opts = MinRankOptions { reversed: true, ..self.opts };
        report.audit.reversed_checked += 1;
        if let Ok(Some(r)) = RankProblem::new(&self.grid, pos, neg, true).min_rank(mode, &opts) {
            if r.rank == rank {
                report.audit.reversed_agreed += 1;
            }
        }
    }

    fn check_sos(&self, report: &mut VerificationReport, index: u64, pos: Mask, neg: Mask, audit: bool) {
        let f = self.grid.multiples(pos);
        let g = self.grid.multiples(neg);
        if g & !f != 0 {
            report.prefiltered += 1;
            if audit {
                report.audit.prefilter_checked += 1;
                if squared_norm_magnitudes(&self.grid, pos, neg).is_none() {
                    report.audit.prefilter_confirmed += 1;
                }
            }
            return;
        }
        report.applicable += 1;
        let problem = RankProblem::new(&self.grid, pos, neg, false);
        let rank = match problem.min_rank(RankMode::SquaredNorm, &self.opts) {
            Ok(Some(r)) => r.rank,
            Ok(None) => return,
            Err(e) => return self.unresolved(report, index, pos, neg, e),
        };
        report.feasible += 1;
        let (p, n) = (grid::count(pos), grid::count(neg));
        report.record_rank(p, n, rank);
        if audit {
            self.reversed_audit(report, RankMode::SquaredNorm, pos, neg, rank);
        }
        // the forced-positive floor holds for every sweep kind
        let floor = grid::count(f | g) - grid::count(g);
        if rank < floor {
            self.violation(report, "forced-positive-floor", index, pos, neg, format!("min rank {rank} < {floor}"));
        }
        match self.kind {
            SweepKind::Sos => {
                if n >= 1 && rank < 5 {
                    self.violation(report, "sos-rank-at-least-5", index, pos, neg, format!("N = {n}, min rank {rank}"));
                }
                if n == 0 && matches!(rank, 1 | 2 | 4) {
                    self.violation(report, "sos-window", index, pos, neg, format!("N = 0, min rank {rank}"));
                }
            }
            SweepKind::Propositions => self.check_propositions(report, index, pos, neg, p, n, rank),
            _ => unreachable!(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_propositions(&self, report: &mut VerificationReport, index: u64, pos: Mask, neg: Mask, p: usize, n: usize, rank: usize) {
        if n >= 1 && p < self.config.n {
            self.violation(report, "p-at-least-n", index, pos, neg, format!("P = {p} with N = {n}"));
        }
        if n == 1 && rank < 5 {
            self.violation(report, "signature-p-1", index, pos, neg, format!("min rank {rank}"));
        }
        if n == 2 {
            let pattern = SupportPattern::from_masks(&self.grid, pos, neg);
            let beta = pattern.negative_ideal().beta_1_d();
            let (p_min, r_min) = if beta == 0 { (5, 6) } else { (4, 5) };
            if p < p_min || rank < r_min {
                self.violation(
                    report,
                    if beta == 0 { "beta-0" } else { "beta-1" },
                    index,
                    pos,
                    neg,
                    format!("P = {p}, min rank {rank}, need P >= {p_min} and rank >= {r_min}"),
                );
            }
        }
    }

    fn check_lp(&self, report: &mut VerificationReport, index: u64, pos: Mask, neg: Mask, audit: bool) {
        let support = pos | neg;
        if !self.grid.is_connected(support) || !self.grid.is_primitive(support) {
            return;
        }
        report.applicable += 1;
        let problem = RankProblem::new(&self.grid, pos, neg, false);
        let rank = match problem.min_rank(RankMode::Signed, &self.opts) {
            Ok(Some(r)) => r.rank,
            Ok(None) => unreachable!("signed realizations always exist"),
            Err(e) => return self.unresolved(report, index, pos, neg, e),
        };
        report.record_rank(grid::count(pos), grid::count(neg), rank);
        if audit {
            self.reversed_audit(report, RankMode::Signed, pos, neg, rank);
        }
        let d = self.grid.d() as usize;
        let bound = (d + 6) / 2;
        if rank < bound {
            self.violation(report, "lp-theorem", index, pos, neg, format!("min rank {rank} < {bound}"));
        }
        let pattern = SupportPattern::from_masks(&self.grid, pos, neg);
        let betti = betti_rank_bound(&pattern);
        if (rank as i64) < betti {
            self.violation(report, "betti-rank-bound", index, pos, neg, format!("min rank {rank} < {betti}"));
        }
        let before = node_count(&pattern);
        let filled = match fill_to_full(&pattern) {
            Ok(q) => q,
            Err(e) => {
                return self.violation(report, "fill-lemma", index, pos, neg, format!("{e}"));
            }
        };
        let after = node_count(&filled);
        if after > before {
            self.violation(report, "fill-lemma", index, pos, neg, format!("#(sq') = {after} > #(sq) = {before}"));
        }
        let te = te_partition(&filled).expect("three variables");
        let d = d as u64;
        if te.mixed_relations() > d * d - d {
            self.violation(report, "mixed-relations", index, pos, neg, format!("|E0| + 2|T0| = {} > {}", te.mixed_relations(), d * d - d));
        }
        if te.weighted_total() != d * d - 1 {
            self.violation(report, "te-total", index, pos, neg, format!("weighted total {}", te.weighted_total()));
        }
        let ab = filled.positive_ideal().beta_1_d() + filled.negative_ideal().beta_1_d();
        if te.alpha_plus_beta() != ab {
            self.violation(report, "alpha-plus-beta", index, pos, neg, format!("{} != {ab}", te.alpha_plus_beta()));
        }
        if !triple_rule_holds(&filled).expect("three variables") {
            self.violation(report, "triple-rule", index, pos, neg, String::from("three mixed relations in a triple"));
        }
    }
}

pub fn sweep_sos(config: SweepConfig) -> Result<VerificationReport, SweepError> {
    Ok(Sweep::new(SweepKind::Sos, config)?.run())
}

pub fn sweep_propositions(config: SweepConfig) -> Result<VerificationReport, SweepError> {
    Ok(Sweep::new(SweepKind::Propositions, config)?.run())
}

pub fn sweep_lp_theorem(config: SweepConfig) -> Result<VerificationReport, SweepError> {
    Ok(Sweep::new(SweepKind::LpTheorem, config)?.run())
}

/// The five configurations of negative generators in degree 3, with the
/// values printed for them: `H_{I_g}(4)`, `β_{1,4}(I_g)`, the forced positive
/// generators, and the rank floor.
pub struct FixtureCase {
    pub case: u8,
    pub generators: &'static [[u32; 3]],
    pub orbit: usize,
    pub hilbert_g: u64,
    pub beta: u64,
    pub forced: &'static [[u32; 3]],
    pub floor: u64,
}

pub const FIXTURE_CASES: [FixtureCase; 5] = [
    FixtureCase {
        case: 1,
        generators: &[[2, 1, 0], [1, 0, 2], [0, 2, 1]],
        orbit: 2,
        hilbert_g: 9,
        beta: 0,
        forced: &[[3, 0, 0], [2, 0, 1], [1, 2, 0], [0, 3, 0], [0, 1, 2], [0, 0, 3]],
        floor: 5,
    },
    FixtureCase {
        case: 2,
        generators: &[[2, 1, 0], [1, 0, 2], [0, 2, 1], [1, 1, 1]],
        orbit: 2,
        hilbert_g: 9,
        // four generators with H = 9 leave 4·3 - 9 relations
        beta: 3,
        forced: &[[3, 0, 0], [2, 0, 1], [1, 2, 0], [0, 3, 0], [0, 1, 2], [0, 0, 3]],
        floor: 6,
    },
    FixtureCase {
        case: 3,
        generators: &[[2, 1, 0], [2, 0, 1], [0, 2, 1]],
        orbit: 6,
        hilbert_g: 8,
        beta: 1,
        forced: &[[3, 0, 0], [1, 2, 0], [1, 0, 2], [0, 3, 0], [0, 1, 2], [1, 1, 1]],
        floor: 6,
    },
    FixtureCase {
        case: 4,
        generators: &[[2, 1, 0], [1, 1, 1], [1, 0, 2]],
        orbit: 6,
        hilbert_g: 7,
        beta: 2,
        forced: &[[3, 0, 0], [2, 0, 1], [1, 2, 0], [0, 0, 3], [0, 1, 2]],
        floor: 6,
    },
    FixtureCase {
        case: 5,
        generators: &[[2, 1, 0], [1, 1, 1], [0, 1, 2]],
        orbit: 3,
        hilbert_g: 7,
        beta: 2,
        forced: &[[3, 0, 0], [1, 2, 0], [0, 2, 1], [0, 0, 3], [2, 0, 1], [1, 0, 2]],
        floor: 7,
    },
];

pub const PERMUTATIONS_3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Degree-3 positive generators forced by `(I_g)_4 ⊆ (I_f)_4`: the only
/// non-negative divisor of some monomial of `(I_g)_4`.
pub fn forced_positive(negative: &MonomialIdeal) -> Vec<MultiIndex> {
    let mut forced = alloc::collections::BTreeSet::new();
    for m in negative.graded_piece(negative.gen_degree() + 1) {
        let free: Vec<_> = (0..negative.n())
            .filter_map(|k| m.sub_unit(k))
            .filter(|a| !negative.contains_generator(a))
            .collect();
        if free.len() == 1 {
            forced.insert(free[0].clone());
        }
    }
    forced.into_iter().collect()
}

/// Fewest degree-3 positive generators whose multiples cover `(I_g)_4`, by
/// exhaustive search over subsets of the non-negative monomials.
pub fn min_positive_cover(negative: &MonomialIdeal) -> Option<usize> {
    let grid = Grid::new(negative.n(), negative.gen_degree())?;
    let neg = grid.mask_of(negative.generators())?;
    let target = grid.multiples(neg);
    let free: Vec<usize> = grid::bits(grid.lower_full() & !neg).collect();
    let mut best: Option<usize> = None;
    for choice in 0u64..1 << free.len() {
        let size = choice.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let pos = free.iter().enumerate().filter(|(t, _)| choice >> t & 1 == 1).fold(0, |m, (_, &i)| m | 1 << i);
        if target & !grid.multiples(pos) == 0 {
            best = Some(size);
        }
    }
    best
}

/// Whether some monomial of `(I_g)_4` has every degree-3 divisor in `I_g`,
/// so that no positive generator can reach it.
pub fn has_unreachable_monomial(negative: &MonomialIdeal) -> bool {
    negative
        .graded_piece(negative.gen_degree() + 1)
        .iter()
        .any(|m| (0..negative.n()).filter_map(|k| m.sub_unit(k)).all(|a| negative.contains_generator(&a)))
}

fn mi3(e: &[u32; 3]) -> MultiIndex {
    MultiIndex::from_slice(e)
}

/// Recomputes every fixture case over all distinct variable permutations.
pub fn fixture_cases() -> VerificationReport {
    let mut report = VerificationReport::empty(SweepKind::Fixtures, None, 0);
    for case in &FIXTURE_CASES {
        let base = MonomialIdeal::new(3, 3, case.generators.iter().map(mi3)).expect("fixture generators");
        let base_forced: Vec<MultiIndex> = case.forced.iter().map(mi3).collect();
        let mut seen = alloc::collections::BTreeSet::new();
        for perm in &PERMUTATIONS_3 {
            let ideal = base.permute(perm);
            if !seen.insert(ideal.generators().to_vec()) {
                continue;
            }
            report.examined += 1;
            report.applicable += 1;
            let hilbert_g = ideal.hilbert(4);
            let beta = ideal.beta_1_d();
            let forced = forced_positive(&ideal);
            let min_positive = min_positive_cover(&ideal).expect("three variables, degree three");
            let n = ideal.generators().len() as u64;
            let m = macaulay_function(3, 3, min_positive as u64 + n).expect("in range");
            let floor = u64::try_from(m).expect("small") - hilbert_g;
            let mut expected_forced: Vec<MultiIndex> = base_forced.iter().map(|a| a.permute(perm)).collect();
            expected_forced.sort();
            let matches = hilbert_g == case.hilbert_g
                && beta == case.beta
                && forced == expected_forced
                && min_positive == forced.len()
                && floor == case.floor;
            let show = |v: &[MultiIndex]| v.iter().map(|a| format!("{a}")).collect::<Vec<_>>();
            let record = FixtureRecord {
                case: case.case,
                generators: show(ideal.generators()),
                hilbert_g,
                beta,
                forced: show(&forced),
                min_positive,
                floor,
                matches,
            };
            if !matches {
                report.violations.push(Violation {
                    rule: format!("fixture-case-{}", case.case),
                    pattern: PatternRecord { index: 0, positive: record.forced.clone(), negative: record.generators.clone() },
                    detail: format!(
                        "H = {hilbert_g}, beta = {beta}, P >= {min_positive}, floor = {floor}; expected H = {}, beta = {}, floor = {}",
                        case.hilbert_g, case.beta, case.floor
                    ),
                });
            }
            report.fixtures.push(record);
        }
        if seen.len() != case.orbit {
            report.violations.push(Violation {
                rule: format!("fixture-case-{}-orbit", case.case),
                pattern: PatternRecord { index: 0, positive: Vec::new(), negative: Vec::new() },
                detail: format!("{} permuted ideals, expected {}", seen.len(), case.orbit),
            });
        }
    }
    let excluded = MonomialIdeal::new(3, 3, [[2, 1, 0], [2, 0, 1], [1, 1, 1]].iter().map(mi3)).expect("valid");
    report.examined += 1;
    if !has_unreachable_monomial(&excluded) {
        report.violations.push(Violation {
            rule: String::from("excluded-configuration"),
            pattern: PatternRecord { index: 0, positive: Vec::new(), negative: excluded.generators().iter().map(|a| format!("{a}")).collect() },
            detail: String::from("x1^2 x2 x3 is reachable from a positive generator"),
        });
    }
    report.range = (0, report.examined);
    report
}

/// All monomials of degree `d - 1` in three variables, for callers building
/// patterns by hand.
pub fn lower_monomials(dm1: u32) -> Vec<MultiIndex> {
    enumerate_multiindices(3, dm1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_match() {
        let r = fixture_cases();
        assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.violations);
        assert_eq!(r.fixtures.len(), 2 + 2 + 6 + 6 + 3);
    }

    #[test]
    fn excluded_configuration_is_unreachable() {
        let g = MonomialIdeal::new(3, 3, [[2, 1, 0], [2, 0, 1], [1, 1, 1]].iter().map(mi3)).unwrap();
        assert!(has_unreachable_monomial(&g));
        let case1 = MonomialIdeal::new(3, 3, FIXTURE_CASES[0].generators.iter().map(mi3)).unwrap();
        assert!(!has_unreachable_monomial(&case1));
    }

    #[test]
    fn exhaustive_decoding() {
        let s = Sweep::new(SweepKind::Sos, SweepConfig::exhaustive(1)).unwrap();
        assert_eq!(s.total(), 27);
        // 1 + 2·3 + 0·9: x1 positive, x2 negative
        assert_eq!(s.pattern(7).0, 0b001);
        assert_eq!(s.pattern(7).1, 0b010);
    }

    #[test]
    fn random_patterns_are_reproducible() {
        let a = Sweep::new(SweepKind::Sos, SweepConfig::random(3, 10, 7)).unwrap();
        let b = Sweep::new(SweepKind::Sos, SweepConfig::random(3, 10, 7)).unwrap();
        let c = Sweep::new(SweepKind::Sos, SweepConfig::random(3, 10, 8)).unwrap();
        assert_eq!(a.pattern(5), b.pattern(5));
        assert!((0..10).any(|i| a.pattern(i) != c.pattern(i)));
    }

    #[test]
    fn small_sweeps_pass() {
        for kind in [SweepKind::Sos, SweepKind::Propositions, SweepKind::LpTheorem] {
            let r = Sweep::new(kind, SweepConfig::exhaustive(2)).unwrap().run();
            assert_eq!(r.examined, 729);
            assert_eq!(r.verdict(), Verdict::Pass, "{kind}: {:?}", r.violations);
        }
    }

    #[test]
    fn ranges_merge_to_the_whole() {
        let s = Sweep::new(SweepKind::Sos, SweepConfig::exhaustive(2)).unwrap();
        let whole = s.run();
        let parts = s.run_range(0, 100).merge(s.run_range(100, 400)).merge(s.run_range(400, 729));
        assert_eq!(whole, parts);
    }

    #[test]
    fn guards() {
        assert!(matches!(Sweep::new(SweepKind::Fixtures, SweepConfig::exhaustive(2)), Err(SweepError::NotASweep)));
        let mut c = SweepConfig::exhaustive(5);
        assert!(matches!(Sweep::new(SweepKind::Sos, c.clone()), Err(SweepError::AboveCeiling { .. })));
        c.dm1 = 2;
        c.n = 4;
        assert!(matches!(Sweep::new(SweepKind::Sos, c), Err(SweepError::NotThreeVariables(4))));
    }
}
