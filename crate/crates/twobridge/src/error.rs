use thiserror::Error;

/// Error type shared by the whole crate.
///
/// Arithmetic errors (`InexactDivision`, `NotLambdaFree`, `NotDivisibleModEll`)
/// double as identity violations: the pipelines divide by factors that the
/// underlying identities guarantee to divide exactly, so hitting one of these in
/// a pipeline means a claimed identity failed on the given input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Division of Laurent polynomials left a nonzero remainder.
    #[error("inexact division: remainder is nonzero")]
    InexactDivision,

    /// The zero polynomial was passed where a nonzero one is required.
    #[error("zero polynomial has no canonical unit normalization")]
    ZeroPolynomial,

    /// Two cyclotomic values from different rings were combined.
    #[error("mismatched cyclotomic orders: {left} vs {right}")]
    MismatchedEll { left: u32, right: u32 },

    /// A fraction p/q with gcd(p, q) > 1, or a Galois substitution index
    /// sharing a factor with ell.
    #[error("{a} and {b} must be coprime, but gcd is {g}")]
    NotCoprime { a: i64, b: i64, g: i64 },

    /// A value that must be odd is even.
    #[error("{what} must be odd, got {value}")]
    NotOdd { what: &'static str, value: i64 },

    /// A fraction outside 0 < p < q, or a parameter outside its legal range.
    #[error("{what} out of range: {details}")]
    OutOfRange {
        what: &'static str,
        details: String,
    },

    /// The coloring order ell must divide q for K_{p/q} to admit one.
    #[error("ell = {ell} does not divide q = {q}")]
    EllDoesNotDivideQ { ell: u32, q: i64 },

    /// Dihedral twist parameter m outside 1 <= m < ell.
    #[error("m = {m} out of range: need 1 <= m < ell = {ell}")]
    BadM { m: u32, ell: u32 },

    /// A cyclotomic Laurent polynomial expected to have rational integer
    /// coefficients has a genuinely irrational one.
    #[error("coefficient at t^{exp} is not a rational integer")]
    NotLambdaFree { exp: i64 },

    /// Mod-ell division of the Alexander polynomial by 1 + t failed, so the
    /// congruence clause of the conjecture cannot even be posed.
    #[error("mod-{ell} division by 1 + t leaves a nonzero remainder")]
    NotDivisibleModEll { ell: u32 },

    /// A family row marked as j = 0 only was asked for a point with j > 0.
    #[error("root {p}/{q} is verified only with j = 0; got j = {j}")]
    JRestricted { p: i64, q: i64, j: u32 },
}
