//! Proper monomial maps between balls through class `𝒫` polynomials.
//!
//! A monomial map `φ = (√c_a z^a)` sends `B_n` properly to `B_k` exactly when
//! `p̃(x) = Σ c_a x^a` has nonnegative coefficients and `p̃ ≡ 1` on
//! `x_1 + … + x_n = 1`. Homogenizing `p̃ - 1` and flipping the sign of the new
//! variable gives a form `p` divisible by `s`, which links the degree bounds
//! for maps to the rank bounds for `s·q`.

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::multiindex::{enumerate_up_to, MultiIndex};
use crate::poly::{FormError, Polynomial, SignedForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallMapError {
    NegativeCoefficient(MultiIndex),
    NotInClassP,
    ZeroPolynomial,
    /// Needs at least two variables and degree at least one.
    OutOfRange,
    Form(FormError),
}

impl fmt::Display for BallMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegativeCoefficient(a) => write!(f, "coefficient of {a} is negative"),
            Self::NotInClassP => f.write_str("polynomial is not identically 1 on the hyperplane x1 + … + xn = 1"),
            Self::ZeroPolynomial => f.write_str("polynomial is zero"),
            Self::OutOfRange => f.write_str("needs n >= 2 and d >= 1"),
            Self::Form(e) => write!(f, "{e}"),
        }
    }
}

impl From<FormError> for BallMapError {
    fn from(e: FormError) -> Self {
        Self::Form(e)
    }
}

/// A polynomial with nonnegative coefficients, checked for class `𝒫` membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPCandidate {
    poly: Polynomial,
    degree: u32,
    member: bool,
}

impl ClassPCandidate {
    pub fn new(poly: Polynomial) -> Result<Self, BallMapError> {
        let member = is_class_p(&poly)?;
        let degree = poly.degree().ok_or(BallMapError::ZeroPolynomial)?;
        Ok(Self { poly, degree, member })
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `k = ρ(p̃)`, the number of components of the map.
    pub fn k(&self) -> usize {
        self.poly.rank()
    }

    pub fn is_member(&self) -> bool {
        self.member
    }
}

/// Whether `p̃ - 1` vanishes after substituting `x_n = 1 - (x_1 + … + x_{n-1})`.
pub fn is_class_p(p: &Polynomial) -> Result<bool, BallMapError> {
    if let Some((a, _)) = p.terms().find(|(_, c)| c.is_negative()) {
        return Err(BallMapError::NegativeCoefficient(a.clone()));
    }
    let restricted = p.restrict_to_simplex();
    let one = Polynomial::constant(restricted.n(), BigRational::one());
    Ok(restricted.sub(&one).is_zero())
}

/// `p` and `q = p / s` obtained from a class `𝒫` polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flip {
    pub p: SignedForm,
    pub q: SignedForm,
    /// Coefficient of `x_{n+1}^d` in `p`, which is `-(-1)^d`.
    pub last_pure_coefficient: BigRational,
}

/// Homogenizes `p̃ - 1` with `x_{n+1}`, replaces `x_{n+1}` by `-x_{n+1}`, and divides by `s`.
pub fn homogenize_flip(p: &Polynomial) -> Result<Flip, BallMapError> {
    if !is_class_p(p)? {
        return Err(BallMapError::NotInClassP);
    }
    let d = p.degree().ok_or(BallMapError::ZeroPolynomial)?;
    if d == 0 {
        return Err(BallMapError::OutOfRange);
    }
    let shifted = p.sub(&Polynomial::constant(p.n(), BigRational::one()));
    let flipped = shifted.homogenize(d).negate_last();
    let quotient = flipped.div_by_linear_sum()?;
    let last = MultiIndex::unit(p.n() + 1, p.n());
    let mut pure = MultiIndex::zero(p.n() + 1);
    for _ in 0..d {
        pure = pure.add(&last);
    }
    let last_pure_coefficient = flipped.coefficient(&pure);
    Ok(Flip {
        p: SignedForm::from_polynomial(flipped, d)?,
        q: SignedForm::from_polynomial(quotient, d - 1)?,
        last_pure_coefficient,
    })
}

/// `p(x_1, …, x_n, -1)`, to compare against `p̃ - 1`.
pub fn flip_substitution(p: &SignedForm) -> Polynomial {
    p.polynomial().evaluate_last(&-BigRational::one())
}

/// `d <= 2k - 3` for `n = 2`, and `d <= (k - 1)/(n - 1)` for `n > 2`.
pub fn degree_bound_check(n: u64, d: u64, k: u64) -> bool {
    assert!(n >= 2 && k >= 1, "degree bounds need n >= 2 and k >= 1");
    if n == 2 {
        d + 3 <= 2 * k
    } else {
        d * (n - 1) < k
    }
}

/// Companion rank bound for the flipped form: `ρ(p) >= (d+5)/2` for `n = 2`,
/// `ρ(p) >= d(n-1) + 2` for `n > 2`.
pub fn flip_rank_bound_check(n: u64, d: u64, rank: u64) -> bool {
    if n == 2 {
        2 * rank >= d + 5
    } else {
        rank >= d * (n - 1) + 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { k_min: usize, witness: ClassPCandidate, supports_tried: u64 },
    /// Every support smaller than `lower_bound` was ruled out before the budget ran out.
    Unresolved { lower_bound: usize, supports_tried: u64 },
}

/// Support search for the smallest class `𝒫` polynomial of exact degree `d`.
pub struct ProperMapSearch {
    n: usize,
    d: u32,
    /// Monomials of degree `<= d`, degree ascending, graded-lex within a degree.
    monomials: Vec<MultiIndex>,
    /// Coefficients of each monomial restricted to the simplex, indexed by `targets`.
    columns: Vec<Vec<(usize, i64)>>,
    targets: usize,
    /// Index of the constant among the restricted monomials.
    constant_row: usize,
    /// For each variable, the monomials that are the constant or a pure power of it.
    anchors: Vec<Vec<usize>>,
    first_top: usize,
}

impl ProperMapSearch {
    pub fn new(n: usize, d: u32) -> Result<Self, BallMapError> {
        if n < 2 || d == 0 {
            return Err(BallMapError::OutOfRange);
        }
        let monomials = enumerate_up_to(n, d);
        let restricted_basis = enumerate_up_to(n - 1, d);
        let mut columns = Vec::with_capacity(monomials.len());
        for a in &monomials {
            let r = Polynomial::monomial(a.clone(), BigRational::one()).restrict_to_simplex();
            let col = r
                .terms()
                .map(|(b, c)| {
                    let row = restricted_basis.binary_search(b).expect("degree at most d");
                    (row, c.to_integer().to_i64().expect("binomial coefficients fit in i64"))
                })
                .collect();
            columns.push(col);
        }
        let constant_row = restricted_basis.binary_search(&MultiIndex::zero(n - 1)).expect("constant");
        let anchors = (0..n)
            .map(|j| {
                monomials
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.exponents().iter().enumerate().all(|(i, &e)| i == j || e == 0))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let first_top = monomials.iter().position(|a| a.degree() == d).expect("degree d monomials exist");
        Ok(Self { n, d, monomials, columns, targets: restricted_basis.len(), constant_row, anchors, first_top })
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    /// Cheap necessary conditions: some monomial of degree `d`, and for each
    /// `j` the constant or a pure power of `x_j` (evaluate at `x = e_j`).
    pub fn admissible(&self, support: &[usize]) -> bool {
        support.iter().any(|&i| i >= self.first_top)
            && self.anchors.iter().all(|a| support.iter().any(|i| a.contains(i)))
    }

    /// Coefficients on `support`, all at least `t > 0`, with `p̃ ≡ 1` on the simplex.
    pub fn solve(&self, support: &[usize]) -> Option<Vec<BigRational>> {
        let m = support.len();
        let t = m;
        let mut lp = LinearProgram::new(m + 1);
        let mut rows: Vec<Vec<(usize, i64)>> = alloc::vec![Vec::new(); self.targets];
        for (v, &i) in support.iter().enumerate() {
            for &(r, c) in &self.columns[i] {
                rows[r].push((v, c));
            }
        }
        for (r, coeffs) in rows.into_iter().enumerate() {
            let rhs = i64::from(r == self.constant_row);
            if coeffs.is_empty() {
                if rhs != 0 {
                    return None;
                }
                continue;
            }
            lp.push(coeffs, Relation::Eq, rhs);
        }
        for v in 0..m {
            lp.push(alloc::vec![(v, 1), (t, -1)], Relation::Ge, 0);
        }
        lp.push(alloc::vec![(t, 1)], Relation::Le, 1);
        lp.objective = alloc::vec![(t, 1)];
        match lp.solve() {
            LpOutcome::Optimal { values, objective } if objective.is_positive() => Some(values[..m].to_vec()),
            _ => None,
        }
    }

    fn candidate(&self, support: &[usize], coeffs: Vec<BigRational>) -> ClassPCandidate {
        let terms = support.iter().zip(coeffs).map(|(&i, c)| (self.monomials[i].clone(), c));
        let poly = Polynomial::from_terms(self.n, terms).expect("matching lengths");
        ClassPCandidate::new(poly).expect("nonnegative coefficients")
    }

    /// Tries supports of size `k` in lexicographic index order.
    ///
    /// `budget` caps the number of supports handed to the LP; `None` when exhausted.
    pub fn search_size(&self, k: usize, budget: &mut Option<u64>, tried: &mut u64) -> Result<Option<ClassPCandidate>, ()> {
        let total = self.monomials.len();
        if k == 0 || k > total {
            return Ok(None);
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if self.admissible(&idx) {
                if let Some(b) = budget {
                    if *b == 0 {
                        return Err(());
                    }
                    *b -= 1;
                }
                *tried += 1;
                if let Some(c) = self.solve(&idx) {
                    return Ok(Some(self.candidate(&idx, c)));
                }
            }
            // next combination
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(None);
                }
                pos -= 1;
                if idx[pos] < total - (k - pos) {
                    break;
                }
            }
            idx[pos] += 1;
            for j in pos + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Smallest `k`, certified below by exhausting every smaller support.
    pub fn run(&self, budget: Option<u64>) -> SearchOutcome {
        let mut budget = budget;
        let mut tried = 0;
        for k in 1..=self.monomials.len() {
            match self.search_size(k, &mut budget, &mut tried) {
                Ok(Some(witness)) => return SearchOutcome::Found { k_min: k, witness, supports_tried: tried },
                Ok(None) => {}
                Err(()) => return SearchOutcome::Unresolved { lower_bound: k, supports_tried: tried },
            }
        }
        unreachable!("(x_1 + … + x_n)^d is always a class P polynomial of degree d")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }
}

pub fn proper_map_search(n: usize, d: u32, budget: Option<u64>) -> Result<SearchOutcome, BallMapError> {
    Ok(ProperMapSearch::new(n, d)?.run(budget))
}

/// `√c` as a formal string: exact when `c` is a perfect square, `sqrt(c)` otherwise.
pub fn formal_sqrt(c: &BigRational) -> alloc::string::String {
    use alloc::format;
    let (num, den) = (c.numer(), c.denom());
    let (rn, rd) = (num.sqrt(), den.sqrt());
    if &(&rn * &rn) == num && &(&rd * &rd) == den {
        if rd.is_one() {
            format!("{rn}")
        } else {
            format!("{rn}/{rd}")
        }
    } else if den.is_one() {
        format!("sqrt({num})")
    } else {
        format!("sqrt({num}/{den})")
    }
}

/// Map components `√c_a z^a`, one string per monomial.
pub fn map_components(p: &Polynomial) -> Vec<alloc::string::String> {
    use alloc::format;
    p.terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| {
            let z = format!("{a}").replace('x', "z");
            let r = formal_sqrt(c);
            match (r.as_str(), z.as_str()) {
                (_, "1") => r,
                ("1", _) => z,
                _ => format!("{r} {z}"),
            }
        })
        .collect()
}
