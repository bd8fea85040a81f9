//! Diagonal Hermitian forms after the substitution `|z_j|^2 -> x_j`.
//!
//! A diagonal bihomogeneous `r(z, z̄)` of bidegree `(d-1, d-1)` becomes a real
//! form `q` of degree `d - 1`, and `r·‖z‖^2` becomes `p = s·q` with
//! `s = x1 + … + xn`. The rank of `r·‖z‖^2` is the number of monomials of `p`
//! with nonzero coefficient, and `r·‖z‖^2` is a squared norm exactly when every
//! coefficient of `p` is nonnegative.
//!
//! [`SupportPattern`] forgets the magnitudes and keeps only the sign of each
//! degree-`(d-1)` monomial. Questions about "all `q` with this pattern" are
//! exact linear programs in the magnitudes: by scale invariance the strict
//! conditions `c_a > 0`, `c_b < 0` may be replaced by `c_a >= 1`, `c_b <= -1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::k_zero;
use crate::grid::{self, Grid, Mask};
use crate::ideal::{graded_containment, MonomialIdeal};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::multiindex::MultiIndex;
use crate::poly::{FormError, SignedForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternError {
    Overlap(MultiIndex),
    WrongDegree { expected: u32, found: MultiIndex },
    WrongLength { expected: usize, found: usize },
    /// Magnitudes must be strictly positive.
    NonPositiveMagnitude(MultiIndex),
    /// Magnitudes must be keyed by exactly the support of the pattern.
    MagnitudeKeys,
    /// Too many monomials for the bitmask tables.
    TooLarge,
    Form(FormError),
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Overlap(a) => write!(f, "monomial {a} is both positive and negative"),
            Self::WrongDegree { expected, found } => write!(f, "monomial {found} does not have degree {expected}"),
            Self::WrongLength { expected, found } => write!(f, "monomial has {found} exponents, expected {expected}"),
            Self::NonPositiveMagnitude(a) => write!(f, "magnitude of {a} must be positive"),
            Self::MagnitudeKeys => f.write_str("magnitudes must be given for exactly the support"),
            Self::TooLarge => write!(f, "more than {} monomials in one degree", grid::MAX_MONOMIALS),
            Self::Form(e) => write!(f, "{e}"),
        }
    }
}

impl From<FormError> for PatternError {
    fn from(e: FormError) -> Self {
        Self::Form(e)
    }
}

/// Sign assignment `(𝒜, ℬ)` on monomials of degree `d - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportPattern {
    n: usize,
    dm1: u32,
    positive: BTreeSet<MultiIndex>,
    negative: BTreeSet<MultiIndex>,
}

impl SupportPattern {
    pub fn new(
        n: usize,
        dm1: u32,
        positive: impl IntoIterator<Item = MultiIndex>,
        negative: impl IntoIterator<Item = MultiIndex>,
    ) -> Result<Self, PatternError> {
        let check = |a: &MultiIndex| {
            if a.n() != n {
                Err(PatternError::WrongLength { expected: n, found: a.n() })
            } else if a.degree() != dm1 {
                Err(PatternError::WrongDegree { expected: dm1, found: a.clone() })
            } else {
                Ok(())
            }
        };
        let positive: BTreeSet<_> = positive.into_iter().collect();
        let negative: BTreeSet<_> = negative.into_iter().collect();
        for a in positive.iter().chain(&negative) {
            check(a)?;
        }
        if let Some(a) = positive.intersection(&negative).next() {
            return Err(PatternError::Overlap(a.clone()));
        }
        Ok(Self { n, dm1, positive, negative })
    }

    pub fn empty(n: usize, dm1: u32) -> Self {
        Self { n, dm1, positive: BTreeSet::new(), negative: BTreeSet::new() }
    }

    /// The sign pattern of a form.
    pub fn of_form(q: &SignedForm) -> Self {
        let mut positive = BTreeSet::new();
        let mut negative = BTreeSet::new();
        for (a, c) in q.terms() {
            if c.is_positive() {
                positive.insert(a.clone());
            } else {
                negative.insert(a.clone());
            }
        }
        Self { n: q.n(), dm1: q.degree(), positive, negative }
    }

    /// Builds a pattern from grid masks.
    pub fn from_masks(grid: &Grid, pos: Mask, neg: Mask) -> Self {
        debug_assert_eq!(pos & neg, 0);
        let pick = |m: Mask| grid::bits(m).map(|i| grid.lower()[i].clone()).collect();
        Self { n: grid.n(), dm1: grid.dm1(), positive: pick(pos), negative: pick(neg) }
    }

    pub fn masks(&self, grid: &Grid) -> (Mask, Mask) {
        assert_eq!((grid.n(), grid.dm1()), (self.n, self.dm1), "grid does not match pattern");
        let pos = grid.mask_of(&self.positive).expect("pattern monomials lie in the grid");
        let neg = grid.mask_of(&self.negative).expect("pattern monomials lie in the grid");
        (pos, neg)
    }

    pub fn grid(&self) -> Result<Grid, PatternError> {
        Grid::new(self.n, self.dm1).ok_or(PatternError::TooLarge)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dm1(&self) -> u32 {
        self.dm1
    }

    pub fn d(&self) -> u32 {
        self.dm1 + 1
    }

    pub fn positive(&self) -> &BTreeSet<MultiIndex> {
        &self.positive
    }

    pub fn negative(&self) -> &BTreeSet<MultiIndex> {
        &self.negative
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.positive.iter().chain(&self.negative)
    }

    pub fn sign(&self, a: &MultiIndex) -> Option<Sign> {
        if self.positive.contains(a) {
            Some(Sign::Positive)
        } else if self.negative.contains(a) {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    /// `(P, N) = (|𝒜|, |ℬ|)`.
    pub fn signature_pair(&self) -> (usize, usize) {
        (self.positive.len(), self.negative.len())
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    /// Whether every monomial of degree `d - 1` carries a sign.
    pub fn is_full(&self) -> bool {
        let total = crate::combinatorics::binomial_u64(self.dm1 as u64 + self.n as u64 - 1, self.dm1 as i64);
        (self.positive.len() + self.negative.len()) as u64 == total
    }

    /// `I_f`.
    pub fn positive_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.n, self.dm1, self.positive.iter().cloned()).expect("valid pattern")
    }

    /// `I_g`.
    pub fn negative_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.n, self.dm1, self.negative.iter().cloned()).expect("valid pattern")
    }

    /// `I_{f⊕g}`.
    pub fn combined_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.n, self.dm1, self.support().cloned()).expect("valid pattern")
    }

    /// The form with all magnitudes equal to one.
    pub fn unit_form(&self) -> SignedForm {
        let terms = self
            .positive
            .iter()
            .map(|a| (a.clone(), BigRational::one()))
            .chain(self.negative.iter().map(|b| (b.clone(), -BigRational::one())));
        SignedForm::new(self.n, self.dm1, terms).expect("valid pattern")
    }
}

/// `q` with `c_a = +m_a` on `𝒜` and `c_b = -m_b` on `ℬ`.
pub fn realize(pattern: &SupportPattern, magnitudes: &BTreeMap<MultiIndex, BigRational>) -> Result<SignedForm, PatternError> {
    if magnitudes.len() != pattern.positive.len() + pattern.negative.len() {
        return Err(PatternError::MagnitudeKeys);
    }
    let mut terms = Vec::with_capacity(magnitudes.len());
    for (a, m) in magnitudes {
        if !m.is_positive() {
            return Err(PatternError::NonPositiveMagnitude(a.clone()));
        }
        match pattern.sign(a) {
            Some(Sign::Positive) => terms.push((a.clone(), m.clone())),
            Some(Sign::Negative) => terms.push((a.clone(), -m.clone())),
            None => return Err(PatternError::MagnitudeKeys),
        }
    }
    Ok(SignedForm::new(pattern.n, pattern.dm1, terms)?)
}

/// Positive magnitudes making `s·q` a squared norm, with the resulting coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityWitness {
    pub magnitudes: BTreeMap<MultiIndex, BigRational>,
    /// Coefficient of every degree-`d` monomial of `(I_{f⊕g})_d` in `s·q`.
    pub certificate: BTreeMap<MultiIndex, BigRational>,
}

impl FeasibilityWitness {
    /// Recomputes `s·q` from the magnitudes and checks it against the certificate.
    pub fn recertify(&self, pattern: &SupportPattern) -> bool {
        if self.magnitudes.values().any(|m| !m.is_positive()) {
            return false;
        }
        let Ok(q) = realize(pattern, &self.magnitudes) else {
            return false;
        };
        let p = q.multiply_by_s();
        let expected = pattern.combined_ideal().graded_piece(pattern.d());
        expected.len() == self.certificate.len()
            && self
                .certificate
                .iter()
                .all(|(a, c)| !c.is_negative() && expected.contains(a) && p.coefficient(a) == *c)
    }
}

/// Which family of magnitudes a rank question ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Only magnitudes for which every coefficient of `s·q` is nonnegative.
    SquaredNorm,
    /// All positive magnitudes; `s·q` may have coefficients of either sign.
    Signed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinRankOptions {
    /// Largest ambiguous set the zero-set search accepts.
    pub ambiguous_cap: usize,
    /// Visit the ambiguous monomials in reverse canonical order.
    pub reversed: bool,
    /// Upper limit on linear programs solved, if any.
    pub lp_budget: Option<usize>,
}

impl Default for MinRankOptions {
    fn default() -> Self {
        Self { ambiguous_cap: 24, reversed: false, lp_budget: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinRankError {
    Budget { ambiguous: usize, cap: usize },
    LpBudget { solved: usize },
    TooLarge,
}

impl fmt::Display for MinRankError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Budget { ambiguous, cap } => {
                write!(f, "ambiguous set of {ambiguous} monomials exceeds the cap of {cap}")
            }
            Self::LpBudget { solved } => write!(f, "gave up after {solved} linear programs"),
            Self::TooLarge => write!(f, "more than {} monomials in one degree", grid::MAX_MONOMIALS),
        }
    }
}

/// Outcome of a minimum-rank search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinRank {
    pub rank: usize,
    /// Magnitudes attaining `rank`, indexed like the lower grid monomials
    /// (entries off the support are zero).
    pub magnitudes: Vec<BigRational>,
    /// Linear programs solved during the search.
    pub lp_count: usize,
}

/// Precomputed data for rank questions about one pattern.
pub(crate) struct RankProblem<'g> {
    grid: &'g Grid,
    pos: Mask,
    neg: Mask,
    /// `|(I_{f⊕g})_d|`.
    pub reach: usize,
    /// Degree-`d` monomials reached only from `ℬ`.
    pub neg_only: Mask,
    /// Degree-`d` monomials reached from both `𝒜` and `ℬ`, in search order.
    candidates: Vec<usize>,
    /// For each candidate: `(lp variable, sign)` of its neighbours.
    rows: Vec<Vec<(usize, i64)>>,
    /// Lower grid index of each LP variable.
    vars: Vec<usize>,
}

impl<'g> RankProblem<'g> {
    pub fn new(grid: &'g Grid, pos: Mask, neg: Mask, reversed: bool) -> Self {
        let f = grid.multiples(pos);
        let g = grid.multiples(neg);
        let mixed = f & g;
        let mut candidates: Vec<usize> = grid::bits(mixed).collect();
        if reversed {
            candidates.reverse();
        }
        let mut var_of = alloc::vec![usize::MAX; grid.lower().len()];
        let mut vars = Vec::new();
        let mut rows = Vec::with_capacity(candidates.len());
        for &u in &candidates {
            let mut row = Vec::new();
            for &(_, i) in grid.down(u) {
                let sign = if pos >> i & 1 == 1 {
                    1
                } else if neg >> i & 1 == 1 {
                    -1
                } else {
                    continue;
                };
                if var_of[i] == usize::MAX {
                    var_of[i] = vars.len();
                    vars.push(i);
                }
                row.push((var_of[i], sign));
            }
            rows.push(row);
        }
        Self { grid, pos, neg, reach: grid::count(f | g), neg_only: g & !f, candidates, rows, vars }
    }

    pub fn ambiguous(&self) -> usize {
        self.candidates.len()
    }

    /// Solves for magnitudes `1 + u` with the candidates in `zero` vanishing
    /// (and, for squared norms, the others nonnegative).
    fn solve(&self, zero: u64, mode: RankMode) -> Option<Vec<BigRational>> {
        let mut lp = LinearProgram::new(self.vars.len());
        for (c, row) in self.rows.iter().enumerate() {
            let rhs = -row.iter().map(|&(_, s)| s).sum::<i64>();
            if zero >> c & 1 == 1 {
                lp.push(row.clone(), Relation::Eq, rhs);
            } else if mode == RankMode::SquaredNorm {
                lp.push(row.clone(), Relation::Ge, rhs);
            }
        }
        match lp.solve() {
            LpOutcome::Optimal { values, .. } => Some(values),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("feasibility problems have no objective"),
        }
    }

    /// Candidates whose coefficient in `s·q` vanishes for shifts `u`.
    fn zeros_of(&self, u: &[BigRational]) -> u64 {
        let mut z = 0u64;
        for (c, row) in self.rows.iter().enumerate() {
            let v: BigRational = row
                .iter()
                .map(|&(j, s)| (BigRational::one() + &u[j]) * BigRational::from_integer(s.into()))
                .sum();
            if v.is_zero() {
                z |= 1 << c;
            }
        }
        z
    }

    fn magnitudes_from(&self, u: &[BigRational]) -> Vec<BigRational> {
        let mut m: Vec<BigRational> = (0..self.grid.lower().len())
            .map(|i| {
                if (self.pos | self.neg) >> i & 1 == 1 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for (j, &i) in self.vars.iter().enumerate() {
            m[i] = BigRational::one() + &u[j];
        }
        m
    }

    /// Exact minimum rank of `s·q` over the magnitudes allowed by `mode`;
    /// `Ok(None)` when no squared-norm realization exists.
    pub fn min_rank(&self, mode: RankMode, opts: &MinRankOptions) -> Result<Option<MinRank>, MinRankError> {
        if mode == RankMode::SquaredNorm && self.neg_only != 0 {
            return Ok(None);
        }
        if self.ambiguous() > opts.ambiguous_cap.min(64) {
            return Err(MinRankError::Budget { ambiguous: self.ambiguous(), cap: opts.ambiguous_cap });
        }
        let mut search = Search {
            problem: self,
            mode,
            budget: opts.lp_budget,
            lp_count: 0,
            feasible: Vec::new(),
            infeasible: Vec::new(),
            best: 0,
            best_u: Vec::new(),
        };
        let start = match mode {
            RankMode::Signed => alloc::vec![BigRational::zero(); self.vars.len()],
            RankMode::SquaredNorm => match search.lp(0)? {
                Some(u) => u,
                None => return Ok(None),
            },
        };
        let z0 = self.zeros_of(&start);
        search.best = z0.count_ones() as usize;
        search.best_u = start;
        search.feasible.push(z0);
        search.branch(0, 0)?;
        let rank = self.reach - search.best;
        Ok(Some(MinRank { rank, magnitudes: self.magnitudes_from(&search.best_u), lp_count: search.lp_count }))
    }
}

struct Search<'a, 'g> {
    problem: &'a RankProblem<'g>,
    mode: RankMode,
    budget: Option<usize>,
    lp_count: usize,
    /// Zero sets known to be attainable; every subset is attainable too.
    feasible: Vec<u64>,
    /// Zero sets known to be unattainable; every superset is too.
    infeasible: Vec<u64>,
    best: usize,
    best_u: Vec<BigRational>,
}

impl Search<'_, '_> {
    fn lp(&mut self, zero: u64) -> Result<Option<Vec<BigRational>>, MinRankError> {
        if let Some(limit) = self.budget {
            if self.lp_count >= limit {
                return Err(MinRankError::LpBudget { solved: self.lp_count });
            }
        }
        self.lp_count += 1;
        Ok(self.problem.solve(zero, self.mode))
    }

    fn attainable(&mut self, zero: u64) -> Result<bool, MinRankError> {
        if self.feasible.iter().any(|&f| zero & !f == 0) {
            return Ok(true);
        }
        if self.infeasible.iter().any(|&i| i & !zero == 0) {
            return Ok(false);
        }
        match self.lp(zero)? {
            Some(u) => {
                let z = self.problem.zeros_of(&u);
                let size = z.count_ones() as usize;
                if size > self.best {
                    self.best = size;
                    self.best_u = u;
                }
                self.feasible.push(z);
                Ok(true)
            }
            None => {
                self.infeasible.push(zero);
                Ok(false)
            }
        }
    }

    /// Include/exclude search over the candidates from `next` on; `zero` is attainable.
    fn branch(&mut self, next: usize, zero: u64) -> Result<(), MinRankError> {
        let total = self.problem.ambiguous();
        let size = zero.count_ones() as usize;
        if size + (total - next) <= self.best {
            return Ok(());
        }
        if next == total {
            return Ok(());
        }
        let with = zero | 1 << next;
        if self.attainable(with)? {
            self.branch(next + 1, with)?;
        }
        self.branch(next + 1, zero)
    }
}

fn shared_grid(pattern: &SupportPattern) -> Result<Grid, MinRankError> {
    pattern.grid().map_err(|_| MinRankError::TooLarge)
}

/// Magnitudes making `s·q` a squared norm, if any exist.
///
/// Patterns failing the containment `(I_g)_d ⊆ (I_f)_d` are rejected before
/// any linear program is solved.
pub fn squared_norm_feasible(pattern: &SupportPattern) -> Option<FeasibilityWitness> {
    if pattern.positive.is_empty() && !pattern.negative.is_empty() {
        return None;
    }
    let contained = graded_containment(&pattern.positive_ideal(), &pattern.negative_ideal(), pattern.d())
        .expect("same ring");
    if !contained {
        return None;
    }
    let grid = pattern.grid().ok()?;
    squared_norm_feasible_lp(pattern, &grid)
}

/// The linear-program half of [`squared_norm_feasible`], without the pre-filter.
pub fn squared_norm_feasible_lp(pattern: &SupportPattern, grid: &Grid) -> Option<FeasibilityWitness> {
    let (pos, neg) = pattern.masks(grid);
    let mags = squared_norm_magnitudes(grid, pos, neg)?;
    Some(witness_from(pattern, grid, &mags))
}

/// Magnitudes (indexed like the lower grid monomials, zero off the support)
/// making every coefficient of `s·q` nonnegative, from one LP over all of
/// `(I_{f⊕g})_d`.
pub fn squared_norm_magnitudes(grid: &Grid, pos: Mask, neg: Mask) -> Option<Vec<BigRational>> {
    let support = pos | neg;
    let index: Vec<usize> = grid::bits(support).collect();
    let mut var_of = alloc::vec![usize::MAX; grid.lower().len()];
    for (v, &i) in index.iter().enumerate() {
        var_of[i] = v;
    }
    // c_i = σ_i (1 + u_i) with u_i >= 0
    let mut lp = LinearProgram::new(index.len());
    for u in grid::bits(grid.multiples(support)) {
        let mut row = Vec::new();
        let mut rhs = 0;
        for &(_, i) in grid.down(u) {
            let sign = if pos >> i & 1 == 1 {
                1
            } else if neg >> i & 1 == 1 {
                -1
            } else {
                continue;
            };
            row.push((var_of[i], sign));
            rhs -= sign;
        }
        lp.push(row, Relation::Ge, rhs);
    }
    let u = lp.solve().values()?.to_vec();
    let mut mags = alloc::vec![BigRational::zero(); grid.lower().len()];
    for (v, &i) in index.iter().enumerate() {
        mags[i] = BigRational::one() + &u[v];
    }
    Some(mags)
}

fn witness_from(pattern: &SupportPattern, grid: &Grid, mags: &[BigRational]) -> FeasibilityWitness {
    let magnitudes: BTreeMap<_, _> = pattern
        .support()
        .map(|a| (a.clone(), mags[grid.lower_index(a).expect("in grid")].clone()))
        .collect();
    let p = realize(pattern, &magnitudes).expect("positive magnitudes").multiply_by_s();
    let certificate = pattern
        .combined_ideal()
        .graded_piece(pattern.d())
        .into_iter()
        .map(|a| {
            let c = p.coefficient(&a);
            (a, c)
        })
        .collect();
    FeasibilityWitness { magnitudes, certificate }
}

/// Minimum rank of `s·q` over squared-norm realizations of `pattern`;
/// `Ok(None)` if there are none.
pub fn min_rank(pattern: &SupportPattern, opts: &MinRankOptions) -> Result<Option<MinRank>, MinRankError> {
    let grid = shared_grid(pattern)?;
    let (pos, neg) = pattern.masks(&grid);
    RankProblem::new(&grid, pos, neg, opts.reversed).min_rank(RankMode::SquaredNorm, opts)
}

/// Minimum rank of `s·q` over all positive magnitudes.
pub fn min_rank_signed(pattern: &SupportPattern, opts: &MinRankOptions) -> Result<MinRank, MinRankError> {
    let grid = shared_grid(pattern)?;
    let (pos, neg) = pattern.masks(&grid);
    let out = RankProblem::new(&grid, pos, neg, opts.reversed).min_rank(RankMode::Signed, opts)?;
    Ok(out.expect("signed realizations always exist"))
}

/// Realizes the magnitudes of a [`MinRank`] as a form.
pub fn realize_min_rank(pattern: &SupportPattern, result: &MinRank) -> SignedForm {
    let grid = pattern.grid().expect("grid exists when min_rank succeeded");
    let magnitudes = pattern
        .support()
        .map(|a| (a.clone(), result.magnitudes[grid.lower_index(a).expect("in grid")].clone()))
        .collect();
    realize(pattern, &magnitudes).expect("search magnitudes are positive")
}

/// Where a rank sits relative to the windows `[M(k), nk]` (`k <= k_0`) and the
/// threshold `M(k_0 + 1)`, with `M(k) = nk - k(k-1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SosVerdict {
    InWindow { k: u64, low: u64, high: u64 },
    AboveThreshold { threshold: u64 },
    /// `rank` falls strictly between two allowed values `below` and `above`.
    Violation { below: u64, above: u64 },
}

impl SosVerdict {
    pub fn is_consistent(&self) -> bool {
        !matches!(self, SosVerdict::Violation { .. })
    }
}

fn small_macaulay(n: u64, k: u64) -> u64 {
    n * k - k * k.saturating_sub(1) / 2
}

pub fn sos_window_verdict(n: u64, rank: u64) -> Result<SosVerdict, crate::combinatorics::CombinatoricsError> {
    let k0 = k_zero(n)?;
    let threshold = small_macaulay(n, k0 + 1);
    if rank >= threshold {
        return Ok(SosVerdict::AboveThreshold { threshold });
    }
    let mut below = 0;
    for k in 0..=k0 {
        let (low, high) = (small_macaulay(n, k), n * k);
        if (low..=high).contains(&rank) {
            return Ok(SosVerdict::InWindow { k, low, high });
        }
        if rank < low {
            return Ok(SosVerdict::Violation { below, above: low });
        }
        below = high;
    }
    Ok(SosVerdict::Violation { below, above: threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::integer;
    use alloc::vec;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_slice(e)
    }

    fn pattern(n: usize, dm1: u32, pos: &[&[u32]], neg: &[&[u32]]) -> SupportPattern {
        SupportPattern::new(n, dm1, pos.iter().map(|e| mi(e)), neg.iter().map(|e| mi(e))).unwrap()
    }

    #[test]
    fn realize_examples() {
        let p = pattern(2, 2, &[&[2, 0], &[0, 2]], &[&[1, 1]]);
        let mags = p.support().map(|a| (a.clone(), integer(1))).collect();
        let q = realize(&p, &mags).unwrap();
        assert_eq!(alloc::format!("{q}"), "x1^2 - x1 x2 + x2^2");
        let mut bad = mags.clone();
        bad.insert(mi(&[2, 0]), integer(0));
        assert_eq!(realize(&p, &bad), Err(PatternError::NonPositiveMagnitude(mi(&[2, 0]))));
        bad.remove(&mi(&[2, 0]));
        assert_eq!(realize(&p, &bad), Err(PatternError::MagnitudeKeys));
        assert!(realize(&SupportPattern::empty(3, 2), &BTreeMap::new()).unwrap().is_zero());
    }

    #[test]
    fn overlapping_pattern_rejected() {
        let err = SupportPattern::new(2, 1, vec![mi(&[1, 0])], vec![mi(&[1, 0])]);
        assert_eq!(err, Err(PatternError::Overlap(mi(&[1, 0]))));
    }

    #[test]
    fn feasibility_examples() {
        let three = pattern(3, 2, &[&[2, 0, 0], &[0, 2, 0]], &[&[1, 1, 0]]);
        assert!(squared_norm_feasible(&three).is_none());
        let two = pattern(2, 2, &[&[2, 0], &[0, 2]], &[&[1, 1]]);
        let w = squared_norm_feasible(&two).unwrap();
        assert!(w.recertify(&two));
        assert!(w.magnitudes.values().all(|m| *m == integer(1)));
        let positive = pattern(3, 2, &[&[2, 0, 0], &[1, 1, 0]], &[]);
        let w = squared_norm_feasible(&positive).unwrap();
        assert!(w.magnitudes.values().all(|m| *m == integer(1)));
        assert!(squared_norm_feasible(&pattern(3, 2, &[], &[&[1, 1, 0]])).is_none());
    }

    #[test]
    fn min_rank_examples() {
        let opts = MinRankOptions::default();
        let two = pattern(2, 2, &[&[2, 0], &[0, 2]], &[&[1, 1]]);
        assert_eq!(min_rank(&two, &opts).unwrap().unwrap().rank, 2);
        let single = pattern(3, 2, &[&[1, 1, 0]], &[]);
        assert_eq!(min_rank(&single, &opts).unwrap().unwrap().rank, 3);
        let three = pattern(3, 2, &[&[2, 0, 0], &[0, 2, 0]], &[&[1, 1, 0]]);
        assert_eq!(min_rank(&three, &opts).unwrap(), None);
        assert_eq!(min_rank(&SupportPattern::empty(3, 2), &opts).unwrap().unwrap().rank, 0);
    }

    #[test]
    fn min_rank_is_attained() {
        let opts = MinRankOptions::default();
        let two = pattern(2, 2, &[&[2, 0], &[0, 2]], &[&[1, 1]]);
        let r = min_rank(&two, &opts).unwrap().unwrap();
        assert_eq!(realize_min_rank(&two, &r).multiply_by_s().rank(), r.rank);
        // x1 - x2 in three variables: nothing can cancel
        let lin = pattern(3, 1, &[&[1, 0, 0]], &[&[0, 1, 0]]);
        let r = min_rank_signed(&lin, &opts).unwrap();
        assert_eq!(r.rank, 4);
    }

    #[test]
    fn ambiguous_cap_is_enforced() {
        let lin = pattern(3, 1, &[&[1, 0, 0]], &[&[0, 1, 0]]);
        let opts = MinRankOptions { ambiguous_cap: 0, ..MinRankOptions::default() };
        assert_eq!(min_rank_signed(&lin, &opts), Err(MinRankError::Budget { ambiguous: 1, cap: 0 }));
    }

    /// Zero sets tried by decreasing size; the first attainable one is largest.
    fn descending_oracle(grid: &Grid, pos: Mask, neg: Mask, mode: RankMode) -> Option<usize> {
        let problem = RankProblem::new(grid, pos, neg, false);
        if mode == RankMode::SquaredNorm && (problem.neg_only != 0 || problem.solve(0, mode).is_none()) {
            return None;
        }
        let m = problem.ambiguous();
        for size in (0..=m).rev() {
            for zero in 0u64..1 << m {
                if zero.count_ones() as usize == size && problem.solve(zero, mode).is_some() {
                    return Some(problem.reach - size);
                }
            }
        }
        unreachable!("the empty zero set is attainable")
    }

    fn decode(code: u64, len: usize) -> (Mask, Mask) {
        let (mut pos, mut neg, mut c) = (0, 0, code);
        for i in 0..len {
            match c % 3 {
                1 => pos |= 1 << i,
                2 => neg |= 1 << i,
                _ => {}
            }
            c /= 3;
        }
        (pos, neg)
    }

    #[test]
    fn branch_and_bound_matches_descending_enumeration() {
        let opts = MinRankOptions::default();
        let grid = Grid::new(3, 2).unwrap();
        let mut codes: Vec<(u32, u64)> = (0..729).map(|c| (2, c)).collect();
        // a fixed stride through the degree-3 patterns
        codes.extend((0..59049).step_by(197).map(|c| (3, c)));
        let grid3 = Grid::new(3, 3).unwrap();
        for (dm1, code) in codes {
            let g = if dm1 == 2 { &grid } else { &grid3 };
            let (pos, neg) = decode(code, g.lower().len());
            for mode in [RankMode::SquaredNorm, RankMode::Signed] {
                let fast = RankProblem::new(g, pos, neg, false).min_rank(mode, &opts).unwrap().map(|r| r.rank);
                let rev = RankProblem::new(g, pos, neg, true).min_rank(mode, &opts).unwrap().map(|r| r.rank);
                let slow = descending_oracle(g, pos, neg, mode);
                assert_eq!(fast, slow, "d-1 = {dm1}, code {code}, {mode:?}");
                assert_eq!(rev, slow, "reversed, d-1 = {dm1}, code {code}, {mode:?}");
            }
        }
    }

    #[test]
    fn min_rank_witness_attains_rank() {
        let opts = MinRankOptions::default();
        let grid = Grid::new(3, 2).unwrap();
        for code in 0..729 {
            let (pos, neg) = decode(code, 6);
            let pattern = SupportPattern::from_masks(&grid, pos, neg);
            let r = min_rank_signed(&pattern, &opts).unwrap();
            assert_eq!(realize_min_rank(&pattern, &r).multiply_by_s().rank(), r.rank);
            let sq = min_rank(&pattern, &opts).unwrap();
            let w = squared_norm_feasible(&pattern);
            assert_eq!(sq.is_some(), w.is_some(), "code {code}");
            if let (Some(r), Some(w)) = (sq, w) {
                assert!(w.recertify(&pattern));
                let p = realize_min_rank(&pattern, &r).multiply_by_s();
                assert_eq!(p.rank(), r.rank);
                assert!(p.polynomial().all_coefficients_nonnegative());
            }
        }
    }

    #[test]
    fn sos_windows() {
        assert_eq!(sos_window_verdict(3, 4).unwrap(), SosVerdict::Violation { below: 3, above: 5 });
        assert_eq!(sos_window_verdict(3, 5).unwrap(), SosVerdict::AboveThreshold { threshold: 5 });
        assert_eq!(sos_window_verdict(3, 3).unwrap(), SosVerdict::InWindow { k: 1, low: 3, high: 3 });
        assert_eq!(sos_window_verdict(3, 0).unwrap(), SosVerdict::InWindow { k: 0, low: 0, high: 0 });
        assert_eq!(sos_window_verdict(3, 1).unwrap(), SosVerdict::Violation { below: 0, above: 3 });
        assert_eq!(sos_window_verdict(2, 1).unwrap(), SosVerdict::Violation { below: 0, above: 2 });
        assert!(sos_window_verdict(1, 1).is_err());
    }
}
