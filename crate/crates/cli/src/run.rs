//! Builds reports from parsed inputs; sweeps are split into index ranges and
//! evaluated on a worker pool, then merged in index order.

use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use sosdiag_core::ballmaps::{
    degree_bound_check, flip_rank_bound_check, homogenize_flip, map_components, proper_map_search, SearchOutcome,
};
use sosdiag_core::combinatorics::{binomial, macaulay_function};
use sosdiag_core::grid::MAX_MONOMIALS;
use sosdiag_core::hermitian::{
    min_rank, min_rank_signed, realize, realize_min_rank, sos_window_verdict, squared_norm_feasible, MinRankOptions,
};
use sosdiag_core::newton::{betti_rank_bound, node_count, NewtonGraph};
use sosdiag_core::verify::{
    fixture_cases, forced_positive, has_unreachable_monomial, min_positive_cover, Sweep, SweepConfig, SweepError,
    SweepKind, SweepMode, Timing, VerificationReport,
};
use sosdiag_core::{MonomialIdeal, SignedForm, SupportPattern};

use crate::format::{diagram, FormJson, ParseError, PolynomialJson};
use crate::report::{
    AnalyzeReport, BallmapChecks, BallmapOutcome, BallmapReport, ConfigurationReport, FixturesReport, IdealTriple,
    MinRankField, ProductRecord, VerifyReport,
};

/// Largest number of candidate positive generators searched for a cover.
pub const COVER_SEARCH_MAX: usize = 20;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Range(String),
    #[error("{0}")]
    Sweep(SweepError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<SweepError> for RunError {
    fn from(e: SweepError) -> Self {
        RunError::Sweep(e)
    }
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

fn small(x: BigUint) -> Result<i64, RunError> {
    i64::try_from(x).map_err(|_| RunError::Range("value does not fit in 64 bits".into()))
}

fn macaulay_floor(n: usize, dm1: u32, k: usize, hilbert_g: u64) -> Result<i64, RunError> {
    let m = macaulay_function(n as u64, dm1 as u64, k as u64).map_err(|e| RunError::Range(e.to_string()))?;
    Ok(small(m)? - hilbert_g as i64)
}

fn window(n: usize, rank: usize) -> Option<sosdiag_core::hermitian::SosVerdict> {
    sos_window_verdict(n as u64, rank as u64).ok()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub min_rank: bool,
    pub diagram: bool,
    pub rank: MinRankOptions,
}

pub fn analyze(q: &SignedForm, opts: &AnalyzeOptions) -> Result<AnalyzeReport, RunError> {
    let pattern = SupportPattern::of_form(q);
    if pattern.grid().is_err() {
        return Err(RunError::Range(format!("more than {MAX_MONOMIALS} monomials of degree d; form is out of range")));
    }
    let (n, d) = (q.n(), pattern.d());
    let (f, g, fg) = (pattern.positive_ideal(), pattern.negative_ideal(), pattern.combined_ideal());
    let hilbert = IdealTriple { f: f.hilbert(d), g: g.hilbert(d), fg: fg.hilbert(d) };
    let betti = IdealTriple { f: f.beta_1_d(), g: g.beta_1_d(), fg: fg.beta_1_d() };
    let graph = NewtonGraph::of_form(q);
    let components = graph.connected_components().len();
    let signature = pattern.signature_pair();

    let product = q.multiply_by_s();
    let squared_norm = product.polynomial().all_coefficients_nonnegative();
    let product = ProductRecord {
        rank: product.rank(),
        squared_norm,
        window: if squared_norm { window(n, product.rank()) } else { None },
    };

    let witness = squared_norm_feasible(&pattern);
    let feasibility_witness = witness
        .as_ref()
        .map(|w| realize(&pattern, &w.magnitudes).map(|r| FormJson::from_form(&r)))
        .transpose()
        .map_err(|e| RunError::Range(format!("{e:?}")))?;

    let min_rank = opts.min_rank.then(|| min_rank_field(&pattern, &opts.rank));

    Ok(AnalyzeReport {
        form: FormJson::from_form(q),
        n,
        d,
        signature,
        hilbert,
        betti,
        node_count: node_count(&pattern),
        pi_degree: q.pi_degree().map_err(|e| RunError::Range(e.to_string()))?,
        components,
        connected: components == 1,
        betti_rank_bound: betti_rank_bound(&pattern),
        macaulay_floor: macaulay_floor(n, pattern.dm1(), signature.0 + signature.1, hilbert.g)?,
        product,
        feasible: witness.is_some(),
        feasibility_witness,
        min_rank,
        diagram: if opts.diagram { diagram(&pattern) } else { None },
    })
}

fn min_rank_field(pattern: &SupportPattern, opts: &MinRankOptions) -> MinRankField {
    let signed = match min_rank_signed(pattern, opts) {
        Ok(r) => r,
        Err(e) => return MinRankField::Incomplete { reason: e.to_string() },
    };
    match min_rank(pattern, opts) {
        Ok(Some(r)) => MinRankField::Found {
            rank: r.rank,
            signed_rank: signed.rank,
            witness: FormJson::from_form(&realize_min_rank(pattern, &r)),
            window: window(pattern.n(), r.rank),
            lp_count: r.lp_count,
        },
        Ok(None) => MinRankField::Infeasible { signed_rank: signed.rank },
        Err(e) => MinRankField::Incomplete { reason: e.to_string() },
    }
}

/// Hilbert value, Betti number, forced positives and rank floor for a set of
/// negative generators.
pub fn configuration(ideal: &MonomialIdeal) -> Result<ConfigurationReport, RunError> {
    let (n, dm1) = (ideal.n(), ideal.gen_degree());
    let d = dm1 + 1;
    let hilbert_g = ideal.hilbert(d);
    let lower = binomial(dm1 as u64 + n as u64 - 1, dm1 as i64);
    let free = small(lower)? as usize - ideal.generators().len();
    let min_positive = if free <= COVER_SEARCH_MAX { min_positive_cover(ideal) } else { None };
    let floor = min_positive
        .map(|p| macaulay_floor(n, dm1, p + ideal.generators().len(), hilbert_g))
        .transpose()?;
    let show = |v: &[sosdiag_core::MultiIndex]| v.iter().map(|a| a.to_string()).collect();
    Ok(ConfigurationReport {
        n,
        d,
        generators: show(ideal.generators()),
        hilbert_g,
        beta: ideal.beta_1_d(),
        forced: show(&forced_positive(ideal)),
        min_positive,
        floor,
        unreachable: has_unreachable_monomial(ideal),
    })
}

/// Runs one sweep on `workers` threads. The result does not depend on
/// `workers` apart from the timing record.
pub fn run_sweep(kind: SweepKind, mut config: SweepConfig, workers: usize) -> Result<VerificationReport, RunError> {
    let workers = workers.max(1);
    config.workers = workers;
    let sweep = Sweep::new(kind, config)?;
    let start = Instant::now();
    let total = sweep.total();
    let chunk = (total / (workers as u64 * 16)).clamp(1, 4096);
    let ranges: Vec<(u64, u64)> =
        (0..total.div_ceil(chunk).max(1)).map(|i| (i * chunk, ((i + 1) * chunk).min(total))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RunError::Range(format!("cannot start {workers} workers: {e}")))?;
    let parts: Vec<VerificationReport> =
        pool.install(|| ranges.par_iter().map(|&(s, e)| sweep.run_range(s, e)).collect());
    let mut report = parts.into_iter().reduce(VerificationReport::merge).expect("at least one range");
    report.timing = Some(Timing { elapsed_ms: start.elapsed().as_millis() as u64, workers });
    Ok(report)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub dm1: u32,
    pub mode: SweepMode,
    pub seed: u64,
    pub workers: usize,
    pub lp: bool,
    pub ambiguous_cap: usize,
}

pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport, RunError> {
    let config = SweepConfig {
        n: 3,
        dm1: opts.dm1,
        mode: opts.mode,
        workers: opts.workers,
        ambiguous_cap: opts.ambiguous_cap,
        seed: opts.seed,
    };
    let mut kinds = vec![SweepKind::Sos, SweepKind::Propositions];
    if opts.lp {
        kinds.push(SweepKind::LpTheorem);
    }
    // validate before spending time on the first sweep
    Sweep::new(SweepKind::Sos, config.clone())?;
    let sweeps = kinds
        .into_iter()
        .map(|k| run_sweep(k, config.clone(), opts.workers))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport::new(opts.dm1, opts.mode, opts.seed, sweeps))
}

pub fn ballmap(n: usize, d: u32, budget: Option<u64>) -> Result<BallmapReport, RunError> {
    if n < 2 || d < 1 {
        return Err(RunError::Range(format!("ball maps need n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    let outcome = match proper_map_search(n, d, budget).map_err(|e| RunError::Range(e.to_string()))? {
        SearchOutcome::Found { k_min, witness, supports_tried } => {
            let p = witness.polynomial();
            let flip = homogenize_flip(p).map_err(|e| RunError::Range(e.to_string()))?;
            let flip_rank = flip.p.rank();
            BallmapOutcome::Found {
                k_min,
                supports_tried,
                witness: PolynomialJson::from_polynomial(p),
                witness_text: p.to_lines().lines().map(str::to_string).collect(),
                components: map_components(p),
                checks: BallmapChecks {
                    in_class_p: witness.is_member(),
                    degree_bound: degree_bound_check(n as u64, d as u64, k_min as u64),
                    flip_rank,
                    flip_rank_bound: flip_rank_bound_check(n as u64, d as u64, flip_rank as u64),
                    flip_last_pure: flip.last_pure_coefficient.to_string(),
                },
            }
        }
        SearchOutcome::Unresolved { lower_bound, supports_tried } => {
            BallmapOutcome::Unresolved { lower_bound, supports_tried }
        }
    };
    Ok(BallmapReport { n, d, budget, outcome })
}

pub fn fixtures() -> FixturesReport {
    let report = fixture_cases();
    FixturesReport { verdict: report.verdict(), report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_form, parse_ideal};
    use sosdiag_core::verify::Verdict;

    #[test]
    fn workers_do_not_change_results() {
        let one = run_sweep(SweepKind::Sos, SweepConfig::exhaustive(2), 1).unwrap();
        let three = run_sweep(SweepKind::Sos, SweepConfig::exhaustive(2), 3).unwrap();
        let serial = Sweep::new(SweepKind::Sos, SweepConfig::exhaustive(2)).unwrap().run();
        let strip = |mut r: VerificationReport| {
            r.timing = None;
            r.config.as_mut().unwrap().workers = 1;
            r
        };
        assert_eq!(strip(one.clone()), strip(three));
        assert_eq!(strip(one), serial);
    }

    #[test]
    fn random_verify_is_reproducible() {
        let opts = VerifyOptions {
            dm1: 3,
            mode: SweepMode::Random { samples: 500 },
            seed: 7,
            workers: 2,
            lp: true,
            ambiguous_cap: 24,
        };
        let a = verify(&opts).unwrap();
        let b = verify(&VerifyOptions { workers: 1, ..opts }).unwrap();
        assert_eq!(a.digest, b.digest);
        assert_eq!(a.verdict, Verdict::Pass);
        let c = verify(&VerifyOptions { seed: 8, ..opts }).unwrap();
        assert_ne!(a.digest, c.digest);
    }

    #[test]
    fn ceilings_are_enforced() {
        let opts = VerifyOptions { dm1: 9, mode: SweepMode::Exhaustive, seed: 0, workers: 1, lp: false, ambiguous_cap: 24 };
        assert!(matches!(verify(&opts), Err(RunError::Sweep(SweepError::AboveCeiling { dm1: 9, ceiling: 4 }))));
    }

    #[test]
    fn case_one_configuration() {
        let ideal = parse_ideal("x1^2 x2\nx1 x3^2\nx2^2 x3\n", None).unwrap();
        let r = configuration(&ideal).unwrap();
        assert_eq!((r.hilbert_g, r.beta, r.min_positive, r.floor), (9, 0, Some(6), Some(5)));
        assert_eq!(r.forced.len(), 6);
        assert!(!r.unreachable);
    }

    #[test]
    fn quadratic_in_two_variables() {
        let q = parse_form("x1^2 - x1 x2 + x2^2", None).unwrap();
        let r = analyze(&q, &AnalyzeOptions { min_rank: true, ..Default::default() }).unwrap();
        assert!(r.feasible);
        assert!(r.product.squared_norm);
        assert_eq!(r.product.rank, 2);
        assert!(matches!(r.min_rank, Some(MinRankField::Found { rank: 2, .. })));
    }

    #[test]
    fn ballmap_reports_cubic() {
        let r = ballmap(2, 3, None).unwrap();
        let BallmapOutcome::Found { k_min, components, checks, .. } = r.outcome else { panic!("found") };
        assert_eq!(k_min, 3);
        assert!(checks.all());
        assert_eq!(components, ["sqrt(3) z1 z2", "z1^3", "z2^3"]);
        assert!(ballmap(1, 3, None).is_err());
    }
}
