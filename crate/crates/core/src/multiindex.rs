//! Exponent tuples of monomials.
//!
//! The canonical order used across the crate is graded-lex with
//! `x1 > x2 > … > xn`: lower total degree first, and inside one degree the
//! monomial with the larger leading exponent first. For three variables in
//! degree 3 that is
//! `x1^3, x1^2 x2, x1^2 x3, x1 x2^2, x1 x2 x3, x1 x3^2, x2^3, x2^2 x3, x2 x3^2, x3^3`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Exponent tuple `(a_1, …, a_n)` of the monomial `x1^a_1 ⋯ xn^a_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    /// Panics if `exps` is empty; every multi-index lives in at least one variable.
    pub fn new(exps: Vec<u32>) -> Self {
        assert!(!exps.is_empty(), "a multi-index needs at least one variable");
        Self { exps }
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        Self::new(exps.to_vec())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(alloc::vec![0; n])
    }

    /// The unit index `e_k` (zero-based `k`).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut exps = alloc::vec![0; n];
        exps[k] = 1;
        Self::new(exps)
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn add_unit(&self, k: usize) -> Self {
        let mut exps = self.exps.clone();
        exps[k] += 1;
        Self { exps }
    }

    /// `self - e_k`, or `None` when component `k` is already zero.
    pub fn sub_unit(&self, k: usize) -> Option<Self> {
        if self.exps[k] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[k] -= 1;
        Some(Self { exps })
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n(), other.n());
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self - other`, or `None` if `x^other` does not divide `x^self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.n(), other.n());
        let mut exps = Vec::with_capacity(self.n());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Self { exps })
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum: the exponent of `gcd(x^self, x^other)`.
    pub fn gcd(&self, other: &Self) -> Self {
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    /// Componentwise maximum: the exponent of `lcm(x^self, x^other)`.
    pub fn lcm(&self, other: &Self) -> Self {
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Applies a permutation of the variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut exps = alloc::vec![0; self.n()];
        for (i, &e) in self.exps.iter().enumerate() {
            exps[perm[i]] = e;
        }
        Self { exps }
    }

    /// Writes the monomial with `sep` between factors, `1` for the empty product.
    pub fn write_with(&self, f: &mut impl fmt::Write, sep: &str) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(sep)?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
            .then_with(|| self.exps.len().cmp(&other.exps.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, " ")
    }
}

/// All multi-indices of length `n` and total degree `degree`, in canonical order.
///
/// The count is `binomial(degree + n - 1, degree)`.
pub fn enumerate_multiindices(n: usize, degree: u32) -> Vec<MultiIndex> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut cur = alloc::vec![0u32; n];
    fill(&mut out, &mut cur, 0, degree);
    out
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, rest: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(MultiIndex::new(cur.clone()));
        return;
    }
    for e in (0..=rest).rev() {
        cur[pos] = e;
        fill(out, cur, pos + 1, rest - e);
    }
    cur[pos] = 0;
}

/// All multi-indices of length `n` with degree at most `max_degree`, in canonical order.
pub fn enumerate_up_to(n: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree).flat_map(|t| enumerate_multiindices(n, t)).collect()
}
