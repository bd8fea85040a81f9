//! Sparse polynomials with exact rational coefficients, and signed homogeneous forms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::multiindex::MultiIndex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormError {
    NotHomogeneous { expected: u32, found: MultiIndex },
    WrongLength { expected: usize, found: usize },
    ZeroForm,
    NotDivisible,
}

impl fmt::Display for FormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotHomogeneous { expected, found } => {
                write!(f, "term {found} does not have degree {expected}")
            }
            Self::WrongLength { expected, found } => {
                write!(f, "monomial has {found} exponents, expected {expected}")
            }
            Self::ZeroForm => f.write_str("operation is undefined for the zero form"),
            Self::NotDivisible => f.write_str("polynomial is not divisible by x1 + ... + xn"),
        }
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A polynomial in `n` variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    pub fn monomial(a: MultiIndex, c: BigRational) -> Self {
        let mut p = Self::zero(a.n());
        p.add_term(a, c);
        p
    }

    /// `x1 + … + xn`.
    pub fn linear_sum(n: usize) -> Self {
        let mut p = Self::zero(n);
        for k in 0..n {
            p.add_term(MultiIndex::unit(n, k), BigRational::one());
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, BigRational)>) -> Result<Self, FormError> {
        let mut p = Self::zero(n);
        for (a, c) in terms {
            if a.n() != n {
                return Err(FormError::WrongLength { expected: n, found: a.n() });
            }
            p.add_term(a, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials with nonzero coefficient.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: &MultiIndex) -> BigRational {
        self.terms.get(a).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn add_term(&mut self, a: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(a);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            for (b, e) in &other.terms {
                out.add_term(a.add(b), c * e);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.n);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.n, BigRational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes `x_n = 1 - (x_1 + … + x_{n-1})`, giving a polynomial in `n - 1`
    /// variables (in zero variables when `n = 1`, stored with one dummy slot).
    pub fn restrict_to_simplex(&self) -> Self {
        let m = self.n - 1;
        let width = m.max(1);
        let mut base = Self::constant(width, BigRational::one());
        if m > 0 {
            base = base.sub(&Self::linear_sum(m));
        }
        let mut out = Self::zero(width);
        let mut powers: Vec<Self> = alloc::vec![Self::constant(width, BigRational::one())];
        for (a, c) in &self.terms {
            let e = a.exponents()[self.n - 1] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(&base);
                powers.push(next);
            }
            let mut head = alloc::vec![0u32; width];
            head[..m].copy_from_slice(&a.exponents()[..m]);
            let mono = Self::monomial(MultiIndex::new(head), c.clone());
            out = out.add(&mono.mul(&powers[e]));
        }
        out
    }

    /// Homogenizes to degree `d` with a new last variable.
    pub fn homogenize(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n + 1);
        for (a, c) in &self.terms {
            let mut exps = a.exponents().to_vec();
            exps.push(d - a.degree());
            out.add_term(MultiIndex::new(exps), c.clone());
        }
        out
    }

    /// Replaces the last variable by its negative.
    pub fn negate_last(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            let odd = a.exponents()[self.n - 1] % 2 == 1;
            out.add_term(a.clone(), if odd { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Sets the last variable to `value`, giving a polynomial in `n - 1` variables.
    pub fn evaluate_last(&self, value: &BigRational) -> Self {
        let m = self.n - 1;
        let mut out = Self::zero(m.max(1));
        for (a, c) in &self.terms {
            let e = a.exponents()[m];
            let mut head = alloc::vec![0u32; m.max(1)];
            head[..m].copy_from_slice(&a.exponents()[..m]);
            let mut v = c.clone();
            for _ in 0..e {
                v *= value;
            }
            out.add_term(MultiIndex::new(head), v);
        }
        out
    }

    /// Exact quotient by `s = x1 + … + xn`, or `NotDivisible` if a remainder is left.
    pub fn div_by_linear_sum(&self) -> Result<Self, FormError> {
        // lex-leading term of s is x1, so reduce by x1 until nothing is left
        let s = Self::linear_sum(self.n);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.n);
        while let Some((lead, c)) = rem.lex_leading() {
            let Some(q) = lead.sub_unit(0) else {
                return Err(FormError::NotDivisible);
            };
            let t = Self::monomial(q, c);
            rem = rem.sub(&t.mul(&s));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    fn lex_leading(&self) -> Option<(MultiIndex, BigRational)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.exponents().cmp(b.0.exponents()))
            .map(|(a, c)| (a.clone(), c.clone()))
    }

    /// Componentwise minimum of the support; `None` for zero.
    pub fn support_gcd(&self) -> Option<MultiIndex> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, a| g.gcd(a)))
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Writes one term per line as `+3/2 x1^2 x2`.
    pub fn to_lines(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut s = alloc::string::String::new();
        for (a, c) in &self.terms {
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            write!(s, "{sign}{mag}").unwrap();
            if a.degree() > 0 {
                s.push(' ');
                a.write_with(&mut s, " ").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let unit = mag.is_one();
            if !unit || a.degree() == 0 {
                write!(f, "{mag}")?;
                if a.degree() > 0 {
                    f.write_str(" ")?;
                }
            }
            if a.degree() > 0 {
                a.write_with(f, " ")?;
            }
        }
        Ok(())
    }
}

/// A real homogeneous polynomial `q = Σ c_a x^a` with exact coefficients.
///
/// Positive coefficients make up the support `𝒜`, negative ones `ℬ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedForm {
    degree: u32,
    poly: Polynomial,
}

impl SignedForm {
    pub fn new(n: usize, degree: u32, terms: impl IntoIterator<Item = (MultiIndex, BigRational)>) -> Result<Self, FormError> {
        let poly = Polynomial::from_terms(n, terms)?;
        Self::from_polynomial(poly, degree)
    }

    pub fn from_polynomial(poly: Polynomial, degree: u32) -> Result<Self, FormError> {
        if let Some((a, _)) = poly.terms().find(|(a, _)| a.degree() != degree) {
            return Err(FormError::NotHomogeneous { expected: degree, found: a.clone() });
        }
        Ok(Self { degree, poly })
    }

    pub fn zero(n: usize, degree: u32) -> Self {
        Self { degree, poly: Polynomial::zero(n) }
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_polynomial(self) -> Polynomial {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coefficient(&self, a: &MultiIndex) -> BigRational {
        self.poly.coefficient(a)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.poly.terms()
    }

    /// Number of nonzero coefficients: the rank of a diagonal form.
    pub fn rank(&self) -> usize {
        self.poly.rank()
    }

    /// `(P, N)`: counts of positive and negative coefficients.
    pub fn signature_pair(&self) -> (usize, usize) {
        let pos = self.terms().filter(|(_, c)| c.is_positive()).count();
        (pos, self.rank() - pos)
    }

    /// `p = (x1 + … + xn)·q`.
    pub fn multiply_by_s(&self) -> SignedForm {
        let mut p = Polynomial::zero(self.n());
        for (a, c) in self.terms() {
            for k in 0..self.n() {
                p.add_term(a.add_unit(k), c.clone());
            }
        }
        SignedForm { degree: self.degree + 1, poly: p }
    }

    /// Degree left after pulling out the largest common monomial factor.
    pub fn pi_degree(&self) -> Result<u32, FormError> {
        let g = self.poly.support_gcd().ok_or(FormError::ZeroForm)?;
        Ok(self.degree - g.degree())
    }

    /// Divides out the support gcd monomial.
    pub fn strip_common_factor(&self) -> Result<SignedForm, FormError> {
        let g = self.poly.support_gcd().ok_or(FormError::ZeroForm)?;
        let terms = self
            .terms()
            .map(|(a, c)| (a.checked_sub(&g).expect("gcd divides every term"), c.clone()));
        SignedForm::new(self.n(), self.degree - g.degree(), terms)
    }
}

impl fmt::Display for SignedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}
