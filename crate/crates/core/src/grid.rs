//! Index tables for the monomials of degrees `d - 1` and `d`.
//!
//! Support patterns are handled as bitmasks over the canonical order of the
//! degree-`(d-1)` monomials ("lower"), and graded pieces in degree `d` as
//! bitmasks over the degree-`d` monomials ("upper"). Both counts must fit in
//! a `u128`.

use alloc::vec::Vec;

use crate::multiindex::{enumerate_multiindices, MultiIndex};

pub type Mask = u128;

pub const MAX_MONOMIALS: usize = 128;

#[derive(Clone, Debug)]
pub struct Grid {
    n: usize,
    dm1: u32,
    lower: Vec<MultiIndex>,
    upper: Vec<MultiIndex>,
    /// `up[i]` lists `(k, u)` with `upper[u] = lower[i] + e_k`.
    up: Vec<Vec<(usize, usize)>>,
    /// `down[u]` lists `(k, i)` with `lower[i] = upper[u] - e_k`.
    down: Vec<Vec<(usize, usize)>>,
    up_mask: Vec<Mask>,
    /// Lower monomials sharing a degree-`d` multiple with `lower[i]`.
    adjacency: Vec<Mask>,
    /// Lower monomials whose exponent of `x_k` is zero.
    free_of: Vec<Mask>,
}

impl Grid {
    /// `None` if either degree has more than [`MAX_MONOMIALS`] monomials.
    pub fn new(n: usize, dm1: u32) -> Option<Self> {
        let lower = enumerate_multiindices(n, dm1);
        let upper = enumerate_multiindices(n, dm1 + 1);
        if lower.len() > MAX_MONOMIALS || upper.len() > MAX_MONOMIALS {
            return None;
        }
        let mut up = Vec::with_capacity(lower.len());
        let mut up_mask = Vec::with_capacity(lower.len());
        let mut down = alloc::vec![Vec::new(); upper.len()];
        for (i, a) in lower.iter().enumerate() {
            let mut row = Vec::with_capacity(n);
            let mut mask = 0;
            for k in 0..n {
                let u = upper.binary_search(&a.add_unit(k)).expect("degree d multiple");
                row.push((k, u));
                mask |= 1 << u;
                down[u].push((k, i));
            }
            up.push(row);
            up_mask.push(mask);
        }
        let mut adjacency = alloc::vec![0 as Mask; lower.len()];
        for row in &down {
            for &(_, i) in row {
                for &(_, j) in row {
                    if i != j {
                        adjacency[i] |= 1 << j;
                    }
                }
            }
        }
        let free_of = (0..n)
            .map(|k| {
                lower
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.exponents()[k] == 0)
                    .fold(0, |m, (i, _)| m | (1 << i))
            })
            .collect();
        Some(Self { n, dm1, lower, upper, up, down, up_mask, adjacency, free_of })
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

    pub fn lower(&self) -> &[MultiIndex] {
        &self.lower
    }

    pub fn upper(&self) -> &[MultiIndex] {
        &self.upper
    }

    pub fn lower_index(&self, a: &MultiIndex) -> Option<usize> {
        self.lower.binary_search(a).ok()
    }

    pub fn upper_index(&self, a: &MultiIndex) -> Option<usize> {
        self.upper.binary_search(a).ok()
    }

    pub fn up(&self, i: usize) -> &[(usize, usize)] {
        &self.up[i]
    }

    pub fn down(&self, u: usize) -> &[(usize, usize)] {
        &self.down[u]
    }

    pub fn lower_full(&self) -> Mask {
        full(self.lower.len())
    }

    pub fn upper_full(&self) -> Mask {
        full(self.upper.len())
    }

    /// Degree-`d` piece of the ideal generated by the lower monomials in `set`.
    pub fn multiples(&self, set: Mask) -> Mask {
        bits(set).fold(0, |m, i| m | self.up_mask[i])
    }

    pub fn adjacency(&self, i: usize) -> Mask {
        self.adjacency[i]
    }

    /// Whether the Newton graph on `set` is connected (the empty set is not).
    pub fn is_connected(&self, set: Mask) -> bool {
        if set == 0 {
            return false;
        }
        let start = set.trailing_zeros() as usize;
        let mut seen: Mask = 1 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adjacency[i] & set & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == set
    }

    /// Connected components of the Newton graph on `set`, ordered by smallest member.
    pub fn components(&self, set: Mask) -> Vec<Mask> {
        let mut out = Vec::new();
        let mut rest = set;
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut seen: Mask = 1 << start;
            let mut frontier = seen;
            while frontier != 0 {
                let i = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adjacency[i] & set & !seen;
                seen |= fresh;
                frontier |= fresh;
            }
            out.push(seen);
            rest &= !seen;
        }
        out
    }

    /// Whether the monomials in `set` have no common variable factor.
    pub fn is_primitive(&self, set: Mask) -> bool {
        set != 0 && self.free_of.iter().all(|m| m & set != 0)
    }

    pub fn mask_of<'a>(&self, items: impl IntoIterator<Item = &'a MultiIndex>) -> Option<Mask> {
        let mut m = 0;
        for a in items {
            m |= 1 << self.lower_index(a)?;
        }
        Some(m)
    }
}

pub fn full(len: usize) -> Mask {
    if len >= 128 {
        Mask::MAX
    } else {
        (1 << len) - 1
    }
}

/// Indices of the set bits, ascending.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables() {
        let g = Grid::new(3, 2).unwrap();
        assert_eq!(g.lower().len(), 6);
        assert_eq!(g.upper().len(), 10);
        assert_eq!(g.multiples(g.lower_full()), g.upper_full());
        for u in 0..10 {
            for &(k, i) in g.down(u) {
                assert_eq!(g.lower()[i].add_unit(k), g.upper()[u]);
            }
        }
        assert!(g.is_connected(g.lower_full()));
        // x1^2 and x2^2 share no degree-3 multiple
        let pure = g.mask_of([&MultiIndex::from_slice(&[2, 0, 0]), &MultiIndex::from_slice(&[0, 2, 0])]).unwrap();
        assert!(!g.is_connected(pure));
        assert_eq!(g.components(pure).len(), 2);
        assert!(g.is_primitive(pure));
        let x1_times = g.mask_of([&MultiIndex::from_slice(&[2, 0, 0]), &MultiIndex::from_slice(&[1, 1, 0])]).unwrap();
        assert!(!g.is_primitive(x1_times));
        assert!(Grid::new(3, 15).is_none());
    }
}
