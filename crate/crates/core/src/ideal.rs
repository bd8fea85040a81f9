//! Monomial ideals generated in a single degree `d - 1`.
//!
//! Graded pieces are computed by shifting every generator by every monomial of
//! the missing degree and deduplicating; the ideals involved are tiny, so no
//! Gröbner or resolution machinery is needed.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinatorics::{binomial, binomial_u64, macaulay_growth};
use crate::linalg;
use crate::multiindex::{enumerate_multiindices, MultiIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealError {
    WrongLength { expected: usize, found: usize },
    WrongDegree { expected: u32, generator: MultiIndex },
    Duplicate(MultiIndex),
    VariableMismatch,
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongLength { expected, found } => {
                write!(f, "generator has {found} exponents, expected {expected}")
            }
            Self::WrongDegree { expected, generator } => {
                write!(f, "generator {generator} does not have degree {expected}")
            }
            Self::Duplicate(g) => write!(f, "duplicate generator {g}"),
            Self::VariableMismatch => f.write_str("ideals live in different polynomial rings"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    n: usize,
    gen_degree: u32,
    generators: Vec<MultiIndex>,
}

impl MonomialIdeal {
    pub fn new(n: usize, gen_degree: u32, generators: impl IntoIterator<Item = MultiIndex>) -> Result<Self, IdealError> {
        let mut set = BTreeSet::new();
        for g in generators {
            if g.n() != n {
                return Err(IdealError::WrongLength { expected: n, found: g.n() });
            }
            if g.degree() != gen_degree {
                return Err(IdealError::WrongDegree { expected: gen_degree, generator: g });
            }
            if !set.insert(g.clone()) {
                return Err(IdealError::Duplicate(g));
            }
        }
        Ok(Self { n, gen_degree, generators: set.into_iter().collect() })
    }

    pub fn zero(n: usize, gen_degree: u32) -> Self {
        Self { n, gen_degree, generators: Vec::new() }
    }

    /// The ideal of all monomials of degree `gen_degree`.
    pub fn full(n: usize, gen_degree: u32) -> Self {
        Self { n, gen_degree, generators: enumerate_multiindices(n, gen_degree) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gen_degree(&self) -> u32 {
        self.gen_degree
    }

    pub fn generators(&self) -> &[MultiIndex] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains_generator(&self, a: &MultiIndex) -> bool {
        self.generators.binary_search(a).is_ok()
    }

    pub fn permute(&self, perm: &[usize]) -> Self {
        let gens = self.generators.iter().map(|g| g.permute(perm));
        Self::new(self.n, self.gen_degree, gens).expect("a permutation preserves degrees and distinctness")
    }

    /// `{ a + m : a a generator, |m| = ℓ - (d-1) }`, empty below the generator degree.
    pub fn graded_piece(&self, degree: u32) -> BTreeSet<MultiIndex> {
        let mut out = BTreeSet::new();
        if degree < self.gen_degree || self.is_zero() {
            return out;
        }
        let shifts = enumerate_multiindices(self.n, degree - self.gen_degree);
        for g in &self.generators {
            for m in &shifts {
                out.insert(g.add(m));
            }
        }
        out
    }

    /// `H_I(ℓ) = dim I_ℓ`.
    pub fn hilbert(&self, degree: u32) -> u64 {
        self.graded_piece(degree).len() as u64
    }

    /// `H_{R/I}(ℓ) = binomial(ℓ + n - 1, ℓ) - H_I(ℓ)`.
    pub fn hilbert_quotient(&self, degree: u32) -> u64 {
        binomial_u64(degree as u64 + self.n as u64 - 1, degree as i64) - self.hilbert(degree)
    }

    /// Whether `H_{R/I}(ℓ+1) <= H_{R/I}(ℓ)^<ℓ>` holds (it always should).
    pub fn macaulay_bound_check(&self, degree: u32) -> bool {
        assert!(degree >= 1, "the growth bound is stated for degree >= 1");
        let now = BigUint::from(self.hilbert_quotient(degree));
        let next = BigUint::from(self.hilbert_quotient(degree + 1));
        next <= macaulay_growth(&now, degree)
    }

    /// Divided Koszul relations `σ(a, b)` between distinct generators, `a < b`,
    /// whose degree `|lcm(a, b)|` is at most `degree_cap`.
    pub fn koszul_relations(&self, degree_cap: u32) -> Vec<KoszulRelation> {
        let mut out = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let rel = KoszulRelation::new(a.clone(), b.clone());
                if rel.degree <= degree_cap {
                    out.push(rel);
                }
            }
        }
        out
    }

    /// `β_{1,d}` from `H_I(d) = n·β_{0,d-1} - β_{1,d}`.
    pub fn beta_1_d(&self) -> u64 {
        let d = self.gen_degree + 1;
        self.n as u64 * self.generators.len() as u64 - self.hilbert(d)
    }

    /// Dimension of the degree-`ℓ` piece of the first syzygy module, computed as
    /// the exact rank of all multiples of divided Koszul relations in degree `ℓ`.
    ///
    /// At `ℓ = d` this is `β_{1,d}` by an independent route.
    pub fn syzygy_dimension(&self, degree: u32) -> usize {
        linalg::rank(&self.relation_matrix(degree))
    }

    /// Rows are the degree-`ℓ` multiples `x^t·σ(a, b)` written in the basis
    /// `(generator, monomial of degree ℓ - (d-1))` of the free module.
    pub fn relation_matrix(&self, degree: u32) -> Vec<Vec<i64>> {
        if degree < self.gen_degree {
            return Vec::new();
        }
        let shifts = enumerate_multiindices(self.n, degree - self.gen_degree);
        let width = shifts.len();
        let cols = self.generators.len() * width;
        let mut rows = Vec::new();
        for rel in self.koszul_relations(degree) {
            let ia = self.generators.binary_search(&rel.a).expect("generator");
            let ib = self.generators.binary_search(&rel.b).expect("generator");
            for t in enumerate_multiindices(self.n, degree - rel.degree) {
                let left = t.add(&rel.multiplier_a);
                let right = t.add(&rel.multiplier_b);
                let ja = shifts.binary_search(&left).expect("shift of the right degree");
                let jb = shifts.binary_search(&right).expect("shift of the right degree");
                let mut row = alloc::vec![0i64; cols];
                row[ia * width + ja] += 1;
                row[ib * width + jb] -= 1;
                rows.push(row);
            }
        }
        rows
    }

    /// At every degree-`d` monomial `A`, any three generators `A - e_i`,
    /// `A - e_j`, `A - e_k` have pairwise relations of rank 2, and any two of
    /// those relations already have rank 2.
    pub fn dependent_sets_check(&self) -> bool {
        let d = self.gen_degree + 1;
        let width = self.n;
        let cols = self.generators.len() * width;
        let row = |a: &MultiIndex, b: &MultiIndex| {
            let rel = KoszulRelation::new(a.clone(), b.clone());
            let ia = self.generators.binary_search(a).expect("generator");
            let ib = self.generators.binary_search(b).expect("generator");
            let unit = |m: &MultiIndex| m.exponents().iter().position(|&e| e == 1).expect("unit multiplier");
            let mut r = alloc::vec![0i64; cols];
            r[ia * width + unit(&rel.multiplier_a)] += 1;
            r[ib * width + unit(&rel.multiplier_b)] -= 1;
            r
        };
        for top in enumerate_multiindices(self.n, d) {
            let divisors: Vec<MultiIndex> = (0..self.n)
                .filter_map(|k| top.sub_unit(k))
                .filter(|a| self.contains_generator(a))
                .collect();
            for i in 0..divisors.len() {
                for j in i + 1..divisors.len() {
                    for k in j + 1..divisors.len() {
                        let (a, b, c) = (&divisors[i], &divisors[j], &divisors[k]);
                        let rows = [row(a, b), row(a, c), row(b, c)];
                        if linalg::rank(&rows) != 2 {
                            return false;
                        }
                        for skip in 0..3 {
                            let pair: Vec<_> = (0..3).filter(|&t| t != skip).map(|t| rows[t].clone()).collect();
                            if linalg::rank(&pair) != 2 {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Expected `dim (M_1)_ℓ` by rank–nullity: `|gens|·binomial(ℓ-(d-1)+n-1, n-1) - H_I(ℓ)`.
    pub fn syzygy_dimension_by_count(&self, degree: u32) -> u64 {
        if degree < self.gen_degree {
            return 0;
        }
        let shift = (degree - self.gen_degree) as u64;
        let width = binomial(shift + self.n as u64 - 1, self.n as i64 - 1).to_u64().expect("small");
        self.generators.len() as u64 * width - self.hilbert(degree)
    }
}

/// Whether `B_ℓ ⊆ A_ℓ`.
pub fn graded_containment(a: &MonomialIdeal, b: &MonomialIdeal, degree: u32) -> Result<bool, IdealError> {
    if a.n != b.n {
        return Err(IdealError::VariableMismatch);
    }
    let big = a.graded_piece(degree);
    Ok(b.graded_piece(degree).iter().all(|m| big.contains(m)))
}

/// `σ(a, b) = (x^b / gcd)·ε(a) - (x^a / gcd)·ε(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulRelation {
    pub a: MultiIndex,
    pub b: MultiIndex,
    /// Coefficient of `ε(a)`: `b - gcd(a, b)`.
    pub multiplier_a: MultiIndex,
    /// Coefficient of `ε(b)` (with a minus sign): `a - gcd(a, b)`.
    pub multiplier_b: MultiIndex,
    /// `|lcm(a, b)| = |a| + |b| - |gcd(a, b)|`.
    pub degree: u32,
}

impl KoszulRelation {
    pub fn new(a: MultiIndex, b: MultiIndex) -> Self {
        let g = a.gcd(&b);
        let multiplier_a = b.checked_sub(&g).expect("gcd divides");
        let multiplier_b = a.checked_sub(&g).expect("gcd divides");
        let degree = a.degree() + b.degree() - g.degree();
        Self { a, b, multiplier_a, multiplier_b, degree }
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_slice(e)
    }

    fn ideal(gens: &[&[u32]]) -> MonomialIdeal {
        let deg = gens[0].iter().sum();
        MonomialIdeal::new(gens[0].len(), deg, gens.iter().map(|g| mi(g))).unwrap()
    }

    #[test]
    fn dependent_sets_on_full_ideal() {
        for dm1 in 1..5 {
            assert!(MonomialIdeal::full(3, dm1).dependent_sets_check());
        }
    }

    fn case1() -> MonomialIdeal {
        ideal(&[&[2, 1, 0], &[1, 0, 2], &[0, 2, 1]])
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            MonomialIdeal::new(3, 3, vec![mi(&[2, 1, 0]), mi(&[2, 1, 0])]),
            Err(IdealError::Duplicate(_))
        ));
        assert!(matches!(MonomialIdeal::new(3, 3, vec![mi(&[2, 0, 0])]), Err(IdealError::WrongDegree { .. })));
        assert!(matches!(MonomialIdeal::new(3, 2, vec![mi(&[2, 0])]), Err(IdealError::WrongLength { .. })));
    }

    #[test]
    fn case_one_piece() {
        let piece = case1().graded_piece(4);
        assert_eq!(piece.len(), 9);
        for e in [[3, 1, 0], [2, 2, 0], [2, 0, 2], [1, 0, 3], [0, 3, 1], [0, 2, 2]] {
            assert!(piece.contains(&mi(&e)));
        }
        assert!(case1().graded_piece(2).is_empty());
        assert_eq!(case1().hilbert_quotient(4), 6);
    }

    #[test]
    fn printed_hilbert_values() {
        assert_eq!(ideal(&[&[2, 1, 0], &[2, 0, 1], &[0, 2, 1]]).hilbert(4), 8);
        assert_eq!(ideal(&[&[2, 1, 0], &[1, 1, 1], &[1, 0, 2]]).hilbert(4), 7);
        assert_eq!(MonomialIdeal::full(3, 2).hilbert(3), 10);
        assert_eq!(MonomialIdeal::zero(3, 2).hilbert_quotient(5), 21);
        assert_eq!(MonomialIdeal::full(3, 2).hilbert_quotient(3), 0);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(case1().beta_1_d(), 0);
        assert_eq!(ideal(&[&[2, 1, 0], &[2, 0, 1], &[0, 2, 1]]).beta_1_d(), 1);
        for dm1 in 1..6u32 {
            let d = dm1 as u64 + 1;
            let full = MonomialIdeal::full(3, dm1);
            assert_eq!(full.beta_1_d(), d * d - 1);
            assert_eq!(full.syzygy_dimension(dm1 + 1) as u64, d * d - 1);
        }
    }

    #[test]
    fn koszul_relation_lists() {
        assert!(case1().koszul_relations(4).is_empty());
        let two = ideal(&[&[2, 1, 0], &[2, 0, 1]]);
        let rels = two.koszul_relations(4);
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].multiplier_a, mi(&[0, 0, 1]));
        assert_eq!(rels[0].multiplier_b, mi(&[0, 1, 0]));
        assert_eq!(rels[0].degree, 4);
        for dm1 in 1..6u32 {
            let d = dm1 as usize + 1;
            assert_eq!(MonomialIdeal::full(3, dm1).koszul_relations(dm1 + 1).len(), 3 * (d * d - d) / 2);
        }
    }

    #[test]
    fn containment() {
        let forced = ideal(&[&[3, 0, 0], &[2, 0, 1], &[1, 2, 0], &[0, 3, 0], &[0, 1, 2], &[0, 0, 3]]);
        assert!(graded_containment(&forced, &case1(), 4).unwrap());
        let a = ideal(&[&[2, 0, 0], &[0, 2, 0]]);
        let b = ideal(&[&[1, 1, 0]]);
        assert!(!graded_containment(&a, &b, 3).unwrap());
        assert!(graded_containment(&a, &MonomialIdeal::zero(3, 2), 3).unwrap());
    }

    #[test]
    fn macaulay_bound_examples() {
        let c1 = case1();
        assert_eq!(c1.hilbert_quotient(3), 7);
        assert!(c1.macaulay_bound_check(3));
        // the zero ideal meets the bound with equality
        let z = MonomialIdeal::zero(3, 2);
        for l in 1..6u32 {
            let now = BigUint::from(z.hilbert_quotient(l));
            assert_eq!(BigUint::from(z.hilbert_quotient(l + 1)), macaulay_growth(&now, l));
        }
    }
}
