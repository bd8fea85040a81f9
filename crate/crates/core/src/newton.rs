//! Newton diagrams of diagonal forms and the counting behind the three-variable rank bound.
//!
//! `Γ(q)` has the support of `q` as vertices, with `a ~ b` whenever
//! `x_j x^a = x_k x^b` for some `j, k`. Coefficients of `s·q` reached from two
//! components never meet, so ranks add over components.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial_u64;
use crate::grid::{self, Grid, Mask};
use crate::hermitian::{min_rank_signed, realize, MinRankError, MinRankOptions, PatternError, SupportPattern};
use crate::multiindex::{enumerate_multiindices, MultiIndex};
use crate::poly::{FormError, SignedForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NewtonError {
    /// The operation is only defined for three variables.
    NotThreeVariables(usize),
    DisconnectedDiagram { components: usize },
    /// The support has a common monomial factor.
    NotPrimitive(MultiIndex),
    EmptyPattern,
    /// No completion kept the node count from growing.
    SearchExhausted,
    Pattern(PatternError),
    Rank(MinRankError),
}

impl fmt::Display for NewtonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotThreeVariables(n) => write!(f, "needs exactly three variables, got {n}"),
            Self::DisconnectedDiagram { components } => {
                write!(f, "Newton diagram has {components} components")
            }
            Self::NotPrimitive(g) => write!(f, "support has the common factor {g}"),
            Self::EmptyPattern => f.write_str("pattern is empty"),
            Self::SearchExhausted => f.write_str("no completion keeps the node count from growing"),
            Self::Pattern(e) => write!(f, "{e}"),
            Self::Rank(e) => write!(f, "{e}"),
        }
    }
}

impl From<PatternError> for NewtonError {
    fn from(e: PatternError) -> Self {
        Self::Pattern(e)
    }
}

impl From<MinRankError> for NewtonError {
    fn from(e: MinRankError) -> Self {
        Self::Rank(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonGraph {
    vertices: Vec<MultiIndex>,
    edges: Vec<(usize, usize)>,
}

/// `x_j x^a = x_k x^b` for some `j, k`, with `a != b`.
fn adjacent(a: &MultiIndex, b: &MultiIndex) -> bool {
    a.degree() == b.degree()
        && a.exponents().iter().zip(b.exponents()).map(|(&x, &y)| x.abs_diff(y)).sum::<u32>() == 2
}

impl NewtonGraph {
    pub fn new(vertices: impl IntoIterator<Item = MultiIndex>) -> Self {
        let mut vertices: Vec<_> = vertices.into_iter().collect();
        vertices.sort();
        vertices.dedup();
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if adjacent(&vertices[i], &vertices[j]) {
                    edges.push((i, j));
                }
            }
        }
        Self { vertices, edges }
    }

    pub fn of_pattern(pattern: &SupportPattern) -> Self {
        Self::new(pattern.support().cloned())
    }

    pub fn of_form(q: &SignedForm) -> Self {
        Self::new(q.terms().map(|(a, _)| a.clone()))
    }

    pub fn vertices(&self) -> &[MultiIndex] {
        &self.vertices
    }

    /// Index pairs into [`vertices`](Self::vertices), `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn connected_components(&self) -> Vec<Vec<MultiIndex>> {
        let mut sets = UnionFind::new(self.vertices.len());
        for &(i, j) in &self.edges {
            sets.union(i, j);
        }
        let mut groups: BTreeMap<usize, Vec<MultiIndex>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            groups.entry(sets.find(i)).or_default().push(v.clone());
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.connected_components().len() == 1
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: alloc::vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Checks `ρ(sq) = Σ ρ(s·q_j)` over the components `q_j` of `Γ(q)`.
pub fn component_rank_additivity_check(
    pattern: &SupportPattern,
    magnitudes: &BTreeMap<MultiIndex, BigRational>,
) -> Result<bool, PatternError> {
    let q = realize(pattern, magnitudes)?;
    let whole = q.multiply_by_s().rank();
    let mut parts = 0;
    for component in NewtonGraph::of_pattern(pattern).connected_components() {
        let terms = component.iter().map(|a| (a.clone(), q.coefficient(a)));
        let qj = SignedForm::new(pattern.n(), pattern.dm1(), terms)?;
        parts += qj.multiply_by_s().rank();
    }
    Ok(whole == parts)
}

pub fn pi_degree(p: &SignedForm) -> Result<u32, FormError> {
    p.pi_degree()
}

pub fn strip_common_factor(q: &SignedForm) -> Result<SignedForm, FormError> {
    q.strip_common_factor()
}

/// Componentwise minimum of the support, or `None` for the empty pattern.
pub fn pattern_gcd(pattern: &SupportPattern) -> Option<MultiIndex> {
    let mut it = pattern.support();
    let first = it.next()?.clone();
    Some(it.fold(first, |g, a| g.gcd(a)))
}

/// `π(sq)`: the degree `d` minus the degree of the common factor of the support.
///
/// `s` has no monomial factor, so this does not depend on the magnitudes.
pub fn pattern_pi_degree(pattern: &SupportPattern) -> Option<u32> {
    pattern_gcd(pattern).map(|g| pattern.d() - g.degree())
}

/// `#(sq) = 2H_{I_{f⊕g}}(d) - H_{I_f}(d) - H_{I_g}(d)`; an empty ideal contributes 0.
pub fn node_count(pattern: &SupportPattern) -> u64 {
    let d = pattern.d();
    2 * pattern.combined_ideal().hilbert(d) - pattern.positive_ideal().hilbert(d) - pattern.negative_ideal().hilbert(d)
}

/// Node count from grid masks: degree-`d` monomials reached from exactly one sign.
pub fn node_count_masks(grid: &Grid, pos: Mask, neg: Mask) -> usize {
    grid::count(grid.multiples(pos) ^ grid.multiples(neg))
}

/// `n·γ_{0,d-1} - 2γ_{1,d} + α_{1,d} + β_{1,d}`.
pub fn betti_rank_bound(pattern: &SupportPattern) -> i64 {
    let fg = pattern.combined_ideal();
    let gamma0 = fg.generators().len() as i64;
    let gamma1 = fg.beta_1_d() as i64;
    let alpha = pattern.positive_ideal().beta_1_d() as i64;
    let beta = pattern.negative_ideal().beta_1_d() as i64;
    pattern.n() as i64 * gamma0 - 2 * gamma1 + alpha + beta
}

/// Classification of the interior (`T`) and edge (`E`) degree-`d` monomials for `n = 3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TEPartition {
    pub t_plus: u64,
    pub t_minus: u64,
    pub t_zero: u64,
    pub e_plus: u64,
    pub e_minus: u64,
    pub e_zero: u64,
    /// Members of `T` with some `A - e_j` outside the support.
    pub t_residual: u64,
    /// Members of `E` with some `A - e_j` outside the support.
    pub e_residual: u64,
}

impl TEPartition {
    pub fn t_total(&self) -> u64 {
        self.t_plus + self.t_minus + self.t_zero + self.t_residual
    }

    pub fn e_total(&self) -> u64 {
        self.e_plus + self.e_minus + self.e_zero + self.e_residual
    }

    /// `|E⁰| + |E⁺| + |E⁻| + 2(|T⁰| + |T⁺| + |T⁻|)`.
    pub fn weighted_total(&self) -> u64 {
        self.e_zero + self.e_plus + self.e_minus + 2 * (self.t_zero + self.t_plus + self.t_minus)
    }

    /// `|E⁰| + 2|T⁰|`: independent relations joining `𝒜` to `ℬ`.
    pub fn mixed_relations(&self) -> u64 {
        self.e_zero + 2 * self.t_zero
    }

    /// `|E⁺| + |E⁻| + 2|T⁺| + 2|T⁻| + |T⁰|`, equal to `α_{1,d} + β_{1,d}` for full patterns.
    pub fn alpha_plus_beta(&self) -> u64 {
        self.e_plus + self.e_minus + 2 * (self.t_plus + self.t_minus) + self.t_zero
    }
}

pub fn te_partition(pattern: &SupportPattern) -> Result<TEPartition, NewtonError> {
    if pattern.n() != 3 {
        return Err(NewtonError::NotThreeVariables(pattern.n()));
    }
    let mut out = TEPartition::default();
    for a in enumerate_multiindices(3, pattern.d()) {
        let zeros = a.exponents().iter().filter(|&&e| e == 0).count();
        if zeros > 1 {
            continue;
        }
        let (mut pos, mut neg, mut missing) = (0, 0, 0);
        for k in 0..3 {
            if let Some(b) = a.sub_unit(k) {
                if pattern.positive().contains(&b) {
                    pos += 1;
                } else if pattern.negative().contains(&b) {
                    neg += 1;
                } else {
                    missing += 1;
                }
            }
        }
        let interior = zeros == 0;
        let slot = match (missing > 0, pos > 0, neg > 0, interior) {
            (true, _, _, true) => &mut out.t_residual,
            (true, _, _, false) => &mut out.e_residual,
            (false, true, true, true) => &mut out.t_zero,
            (false, true, true, false) => &mut out.e_zero,
            (false, true, false, true) => &mut out.t_plus,
            (false, true, false, false) => &mut out.e_plus,
            (false, false, _, true) => &mut out.t_minus,
            (false, false, _, false) => &mut out.e_minus,
        };
        *slot += 1;
    }
    Ok(out)
}

/// For every `b` of degree `d - 2`, at most two of the relations among
/// `b + e_1, b + e_2, b + e_3` join `𝒜` to `ℬ`.
pub fn triple_rule_holds(pattern: &SupportPattern) -> Result<bool, NewtonError> {
    if pattern.n() != 3 {
        return Err(NewtonError::NotThreeVariables(pattern.n()));
    }
    if pattern.dm1() == 0 {
        return Ok(true);
    }
    Ok(enumerate_multiindices(3, pattern.dm1() - 1).iter().all(|b| {
        let corners: Vec<_> = (0..3).map(|k| pattern.sign(&b.add_unit(k))).collect();
        let mut mixed = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if let (Some(x), Some(y)) = (corners[i], corners[j]) {
                    if x != y {
                        mixed += 1;
                    }
                }
            }
        }
        mixed <= 2
    }))
}

/// `C(d+2, 2) - (3/2)(d-1) - (1/2)(d^2 - d)`, doubled to stay integral.
pub fn doubled_chain_bound(d: u64) -> u64 {
    2 * binomial_u64(d + 2, 2) - 3 * (d - 1) - (d * d - d)
}

/// Outcome of checking `ρ(sq) >= ⌈(π(sq) + 5) / 2⌉` at the minimum rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpTheoremOutcome {
    pub min_rank: usize,
    pub pi: u32,
    pub bound: u32,
    pub holds: bool,
}

/// Minimum rank of `sq` over all positive magnitudes against `⌈(π + 5) / 2⌉`.
pub fn lp_theorem_check(pattern: &SupportPattern, opts: &MinRankOptions) -> Result<LpTheoremOutcome, NewtonError> {
    if pattern.n() != 3 {
        return Err(NewtonError::NotThreeVariables(pattern.n()));
    }
    let pi = pattern_pi_degree(pattern).ok_or(NewtonError::EmptyPattern)?;
    let components = NewtonGraph::of_pattern(pattern).connected_components().len();
    if components != 1 {
        return Err(NewtonError::DisconnectedDiagram { components });
    }
    let min_rank = min_rank_signed(pattern, opts)?.rank;
    let bound = (pi + 6) / 2;
    Ok(LpTheoremOutcome { min_rank, pi, bound, holds: min_rank as u32 >= bound })
}

/// Largest `d - 1` at which [`fill_to_full`] searches every completion.
pub const FILL_BRUTE_FORCE_MAX_DM1: u32 = 4;

/// A full pattern containing `pattern` whose node count is no larger.
///
/// Up to [`FILL_BRUTE_FORCE_MAX_DM1`] every sign assignment of the missing
/// monomials is tried and the first one (positive before negative, in
/// canonical order) with the smallest node count wins. Beyond that the signs
/// are chosen greedily in canonical order.
pub fn fill_to_full(pattern: &SupportPattern) -> Result<SupportPattern, NewtonError> {
    if pattern.n() != 3 {
        return Err(NewtonError::NotThreeVariables(pattern.n()));
    }
    let gcd = pattern_gcd(pattern).ok_or(NewtonError::EmptyPattern)?;
    if gcd.degree() > 0 {
        return Err(NewtonError::NotPrimitive(gcd));
    }
    let grid = pattern.grid()?;
    let (pos, neg) = pattern.masks(&grid);
    if !grid.is_connected(pos | neg) {
        return Err(NewtonError::DisconnectedDiagram { components: grid.components(pos | neg).len() });
    }
    let start = node_count_masks(&grid, pos, neg);
    let missing: Vec<usize> = grid::bits(grid.lower_full() & !(pos | neg)).collect();
    let (best_pos, best_neg) = if pattern.dm1() <= FILL_BRUTE_FORCE_MAX_DM1 {
        let mut best: Option<(usize, Mask)> = None;
        // bit t of `choice` set means missing[t] goes negative; iterate so that
        // earlier monomials vary slowest and positive comes first
        let m = missing.len();
        for rank in 0u64..1 << m {
            let mut choice: Mask = 0;
            for t in 0..m {
                if rank >> (m - 1 - t) & 1 == 1 {
                    choice |= 1 << missing[t];
                }
            }
            let all_missing = missing.iter().fold(0 as Mask, |acc, &i| acc | 1 << i);
            let count = node_count_masks(&grid, pos | (all_missing & !choice), neg | choice);
            if best.is_none_or(|(c, _)| count < c) {
                best = Some((count, choice));
            }
        }
        let (count, choice) = best.expect("at least the empty assignment");
        if count > start {
            return Err(NewtonError::SearchExhausted);
        }
        let all_missing = missing.iter().fold(0 as Mask, |acc, &i| acc | 1 << i);
        (pos | (all_missing & !choice), neg | choice)
    } else {
        let (mut p, mut n) = (pos, neg);
        for &i in &missing {
            let with_pos = node_count_masks(&grid, p | 1 << i, n);
            let with_neg = node_count_masks(&grid, p, n | 1 << i);
            if with_neg < with_pos {
                n |= 1 << i;
            } else {
                p |= 1 << i;
            }
        }
        if node_count_masks(&grid, p, n) > start {
            return Err(NewtonError::SearchExhausted);
        }
        (p, n)
    };
    Ok(SupportPattern::from_masks(&grid, best_pos, best_neg))
}
