//! Exact Gröbner basis machinery for free modules over polynomial rings
//! whose coefficient field carries a valuation, and for free modules over
//! `Z/p^l Z`.
//!
//! The coefficient valuation participates in the term order: the weight of a
//! term is the valuation of its coefficient plus the weight-vector pairing
//! with its exponent. Because this is not a monomial order, the division
//! algorithm keeps a growing divisor set and selects divisors by ecart; the
//! Buchberger completion is built on top of that normal form.
//!
//! Everything is exact: p-adic rationals, t-adic rational functions, the
//! trivial valuation, and `Z/p^l Z` with its p-power filtration. No floats
//! anywhere.
//!
//! Modules:
//! - [`valfield`]: coefficient domains with valuation and residue arithmetic
//! - [`freemod`]: sparse module elements, monomial and weighted term orders
//! - [`division`]: the ecart-driven division (normal form) algorithm and its
//!   contract checker
//! - [`groebner`]: S-forms, Buchberger completion, initial modules
//! - [`hilbert`]: Hilbert functions via standard monomial counting
//! - [`zmod`]: the `Z/p^l Z` coefficient ring
//! - [`oracle`]: Macaulay-slice rank and randomized membership checks
//! - [`parse`]: text syntax for scalars, elements and problem files
//! - [`cli`]: the batch command-line front end

pub mod cli;
pub mod division;
pub mod freemod;
pub mod groebner;
pub mod hilbert;
pub mod oracle;
pub mod parse;
pub mod valfield;
pub mod zmod;

pub use freemod::{
    Ambient, CoeffRing, Convention, ModElement, ModMonomial, Monomial, MonomialOrder, Term,
    WeightedTermOrder,
};
pub use valfield::{Domain, ResidueScalar, ValRat, ValuedScalar};
