//! Exact combinatorics for diagonal Hermitian sums of squares in the style of
//! commutative algebra: Macaulay representations and growth bounds, Hilbert
//! functions and first Betti numbers of equigenerated monomial ideals, signed
//! diagonal forms `q` together with the product `s·q` (where `s = x1 + … + xn`),
//! Newton-diagram graphs, and the proper-monomial-map correspondence.
//!
//! The crate is `no_std` and only needs `alloc`. All arithmetic is exact:
//! integers are arbitrary precision where they can grow, and every linear
//! program is solved by an exact rational simplex.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod ballmaps;
pub mod combinatorics;
pub mod grid;
pub mod hermitian;
pub mod ideal;
pub mod linalg;
pub mod lp;
pub mod multiindex;
pub mod newton;
pub mod poly;
pub mod verify;

pub use combinatorics::{binomial, macaulay_function, macaulay_growth, macaulay_representation, MacaulayRep};
pub use hermitian::{Sign, SupportPattern};
pub use ideal::MonomialIdeal;
pub use multiindex::MultiIndex;
pub use poly::{Polynomial, SignedForm};
