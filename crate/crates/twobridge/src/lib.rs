//! Exact arithmetic for twisted Alexander polynomials of 2-bridge knots.
//!
//! A 2-bridge knot K_{p/q} is determined by coprime odd integers 0 < p < q.
//! Its combinatorics are carried by the epsilon sequence e_i = (-1)^floor(ip/q),
//! drawn as a sawtooth lattice path (the epsilon graph). This crate computes,
//! with exact integer arithmetic throughout:
//!
//! - the Alexander polynomial as the alternating sum of t^(level) over the
//!   graph's vertices ([`product::alexander`]);
//! - the ell-twisted Alexander polynomial attached to a Fox ell-coloring
//!   (ell an odd prime dividing q) composed with the ell-dimensional dihedral
//!   permutation representation, by two independent pipelines:
//!   a product formula over cyclotomic determinant factors read off the
//!   labeled epsilon graph ([`product::twisted_alexander_product`]) and a
//!   brute-force Fox-calculus matrix determinant ([`oracle`]);
//! - structural data of the graph: segment (sigma) sequences, their cluster
//!   combinatorics, and checkers for every structural property they satisfy
//!   ([`two_bridge`]);
//! - closed forms and generators for bi-infinite knot families: torus knots,
//!   genus-one knots, a recursion in q, a cluster shift in (p, q), and a
//!   bundled table of family root fractions with their f(t) data
//!   ([`families`]);
//! - mechanical verification that a computed twisted polynomial has the shape
//!   Delta/(t-1) * f(t) * f(-t) with f congruent mod ell to
//!   (Delta/(t+1))^((ell-1)/2), in both weak and strong (single consistent
//!   unit) forms ([`conjecture`]).
//!
//! Every polynomial is a Laurent polynomial over arbitrary-precision integers
//! ([`laurent::IntLaurent`]) or over the ring of integers of the ell-th
//! cyclotomic field ([`cyclotomic::CycLaurent`]). There is no floating point
//! and no modular shortcut: equalities asserted by this crate are exact.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to use from multiple threads.

pub mod conjecture;
pub mod cyclotomic;
mod error;
pub mod families;
pub mod laurent;
pub mod oracle;
pub mod product;
pub mod two_bridge;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Check that ell is an odd prime, the only coloring orders the dihedral
/// representation theory covers.
pub(crate) fn require_odd_prime(ell: u32) -> Result<()> {
    if ell % 2 == 0 {
        return Err(Error::NotOdd {
            what: "ell",
            value: i64::from(ell),
        });
    }
    if ell < 3 || (3..).step_by(2).take_while(|d| d * d <= ell).any(|d| ell % d == 0) {
        return Err(Error::OutOfRange {
            what: "ell",
            details: format!("need an odd prime, got {ell}"),
        });
    }
    Ok(())
}
