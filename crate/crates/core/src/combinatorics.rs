//! Binomial coefficients, Macaulay representations and the Macaulay function.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombinatoricsError {
    /// A Macaulay representation needs `c >= 1` and `nu >= 1`.
    NonPositive { c: BigUint, nu: u32 },
    /// More generators than there are monomials of degree `d - 1`.
    TooManyGenerators { k: u64, available: BigUint },
    /// Argument outside the stated range of a closed form.
    OutOfRange(&'static str),
}

impl fmt::Display for CombinatoricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositive { c, nu } => {
                write!(f, "Macaulay representation needs c >= 1 and nu >= 1 (got c={c}, nu={nu})")
            }
            Self::TooManyGenerators { k, available } => {
                write!(f, "{k} generators exceed the {available} monomials available")
            }
            Self::OutOfRange(what) => write!(f, "argument out of range: {what}"),
        }
    }
}

/// Exact binomial coefficient, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub(crate) fn binomial_u64(n: u64, k: i64) -> u64 {
    binomial(n, k).to_u64().expect("binomial exceeds u64")
}

/// `c = Σ binomial(k_i, i)` with `k_ν > k_{ν-1} > … > k_J >= J > 0`.
///
/// Terms are stored as `(k_i, i)` with `i` descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacaulayRep {
    pub terms: Vec<(u64, u32)>,
}

impl MacaulayRep {
    pub fn value(&self) -> BigUint {
        self.terms.iter().map(|&(k, i)| binomial(k, i as i64)).sum()
    }

    /// `Σ binomial(k_i + 1, i + 1)`.
    pub fn growth(&self) -> BigUint {
        self.terms.iter().map(|&(k, i)| binomial(k + 1, i as i64 + 1)).sum()
    }

    /// Checks the strict descent `k_ν > … > k_J >= J > 0` with `i` stepping down by one.
    pub fn is_well_formed(&self, nu: u32) -> bool {
        let mut expected = nu;
        let mut prev: Option<u64> = None;
        for &(k, i) in &self.terms {
            if i != expected || i == 0 || k < i as u64 {
                return false;
            }
            if let Some(p) = prev {
                if k >= p {
                    return false;
                }
            }
            prev = Some(k);
            expected -= 1;
        }
        !self.terms.is_empty()
    }
}

/// The `ν`-th Macaulay representation of `c`, taking the largest `k_ν` first.
pub fn macaulay_representation(c: &BigUint, nu: u32) -> Result<MacaulayRep, CombinatoricsError> {
    if c.is_zero() || nu == 0 {
        return Err(CombinatoricsError::NonPositive { c: c.clone(), nu });
    }
    let mut rest = c.clone();
    let mut terms = Vec::new();
    let mut i = nu;
    while !rest.is_zero() {
        debug_assert!(i > 0);
        // largest k with binomial(k, i) <= rest; binomial(i, i) = 1 <= rest
        let mut k = i as u64;
        let mut next = binomial(k + 1, i as i64);
        while next <= rest {
            k += 1;
            next = next * (k + 1) / (k + 1 - i as u64);
        }
        rest -= binomial(k, i as i64);
        terms.push((k, i));
        i -= 1;
    }
    Ok(MacaulayRep { terms })
}

/// `c^<ν>`, with `0^<ν> = 0`.
pub fn macaulay_growth(c: &BigUint, nu: u32) -> BigUint {
    assert!(nu >= 1, "macaulay_growth needs nu >= 1");
    if c.is_zero() {
        return BigUint::zero();
    }
    macaulay_representation(c, nu)
        .expect("c and nu are positive")
        .growth()
}

/// `M_{n,d-1}(k) = binomial(d+n-1, d) - (binomial(d-1+n-1, d-1) - k)^<d-1>`.
///
/// This is the Macaulay lower bound for `H_I(d)` over ideals with `k` generators
/// in degree `d - 1 = dm1`.
pub fn macaulay_function(n: u64, dm1: u64, k: u64) -> Result<BigUint, CombinatoricsError> {
    if n == 0 || dm1 == 0 {
        return Err(CombinatoricsError::OutOfRange("n >= 1 and dm1 >= 1"));
    }
    let d = dm1 + 1;
    let available = binomial(dm1 + n - 1, dm1 as i64);
    let k_big = BigUint::from(k);
    if k_big > available {
        return Err(CombinatoricsError::TooManyGenerators { k, available });
    }
    let top = binomial(d + n - 1, d as i64);
    let quotient = macaulay_growth(&(available - k_big), dm1 as u32);
    Ok(top - quotient)
}

/// Which part of the closed-form lemma for the Macaulay function to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `M(k) = nk - k(k-1)/2` for `0 <= k <= n`.
    Small { k: u64 },
    /// `M(n-j) = n(n+1)/2 - j(j+1)/2` for `0 <= j <= n`.
    BelowN { j: u64 },
    /// `M(n+j) = n(n+1)/2 + nj - j(j+1)/2` for `j <= n-1`.
    AboveN { j: u64 },
}

impl ClosedForm {
    /// The generator count `k` this part describes.
    pub fn argument(self, n: u64) -> u64 {
        match self {
            Self::Small { k } => k,
            Self::BelowN { j } => n - j,
            Self::AboveN { j } => n + j,
        }
    }
}

pub fn closed_form_check(n: u64, part: ClosedForm) -> Result<BigUint, CombinatoricsError> {
    let n_big = BigUint::from(n);
    let tri = |m: u64| BigUint::from(m) * BigUint::from(m + 1) / 2u32;
    match part {
        ClosedForm::Small { k } => {
            if k > n {
                return Err(CombinatoricsError::OutOfRange("part (a) needs 0 <= k <= n"));
            }
            let pairs = if k == 0 { BigUint::zero() } else { tri(k - 1) };
            Ok(&n_big * k - pairs)
        }
        ClosedForm::BelowN { j } => {
            if j > n {
                return Err(CombinatoricsError::OutOfRange("part (b) needs 0 <= j <= n"));
            }
            Ok(tri(n) - tri(j))
        }
        ClosedForm::AboveN { j } => {
            if n == 0 || j > n - 1 {
                return Err(CombinatoricsError::OutOfRange("part (c) needs j <= n - 1"));
            }
            Ok(tri(n) + &n_big * j - tri(j))
        }
    }
}

/// `k_0 = max { k : k(k+1)/2 < n - 1 }`.
pub fn k_zero(n: u64) -> Result<u64, CombinatoricsError> {
    if n < 2 {
        return Err(CombinatoricsError::OutOfRange("k_zero needs n >= 2"));
    }
    let mut k = 0;
    while (k + 1) * (k + 2) / 2 < n - 1 {
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::string::ToString;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), big(6));
        assert_eq!(binomial(6, 2), big(15));
        assert_eq!(binomial(7, 9), big(0));
        assert_eq!(binomial(7, -1), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn representations() {
        let r = macaulay_representation(&big(5), 2).unwrap();
        assert_eq!(r.terms, vec![(3, 2), (2, 1)]);
        assert_eq!(macaulay_representation(&big(1), 1).unwrap().terms, vec![(1, 1)]);
        assert_eq!(macaulay_representation(&big(9), 2).unwrap().terms, vec![(4, 2), (3, 1)]);
        assert!(macaulay_representation(&big(0), 2).is_err());
        assert!(macaulay_representation(&big(3), 0).is_err());
    }

    #[test]
    fn growth() {
        assert_eq!(macaulay_growth(&big(5), 2), big(7));
        assert_eq!(macaulay_growth(&big(0), 3), big(0));
        assert_eq!(macaulay_growth(&big(4), 2), big(5));
    }

    #[test]
    fn macaulay_function_values() {
        assert_eq!(macaulay_function(3, 2, 2).unwrap(), big(5));
        let row: Vec<_> = (5..=10).map(|k| macaulay_function(3, 3, k).unwrap()).collect();
        assert_eq!(row, [9u64, 10, 12, 13, 14, 15].map(big).to_vec());
        assert!(macaulay_function(3, 3, 11).is_err());
        assert_eq!(macaulay_function(3, 3, 0).unwrap(), big(0));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_check(3, ClosedForm::Small { k: 2 }).unwrap(), big(5));
        assert_eq!(closed_form_check(3, ClosedForm::BelowN { j: 0 }).unwrap(), big(6));
        assert_eq!(closed_form_check(3, ClosedForm::AboveN { j: 2 }).unwrap(), big(9));
        assert!(closed_form_check(3, ClosedForm::Small { k: 4 }).is_err());
        assert!(closed_form_check(3, ClosedForm::AboveN { j: 3 }).is_err());
    }

    #[test]
    fn k_zero_values() {
        assert_eq!(k_zero(3).unwrap(), 1);
        assert_eq!(k_zero(2).unwrap(), 0);
        assert_eq!(k_zero(8).unwrap(), 3);
        assert!(k_zero(1).is_err());
    }
}
