//! Coherent-group structure of complete rank data.
//!
//! Ballots are Borda-coded, stacked with a `nega` row and analysed with
//! taxicab correspondence analysis (TCA). The first TCA axis places voters
//! on a finite lattice of clusters; clusters whose own TCA reproduces their
//! lattice value are coherent, and maximal runs of coherent clusters are
//! peeled off one group at a time until only a noisy remainder is left.
//!
//! Module map:
//! - [`rank`]: Borda scores, reverse scores, nega row, Borda scale, marginals.
//! - [`tca`]: correspondence and residual matrices, axes by enumeration or
//!   ascent, deflation and reconstitution.
//! - [`coherence`]: cluster lattice, coherency test, crossing index.
//! - [`peeling`]: sequential extraction of coherent groups.
//! - [`shuffle`]: riffle-shuffle types and censuses.
//! - [`report`]: dataset parsing, synthetic profiles, text and SVG output.

pub mod coherence;
pub mod error;
pub mod exec;
pub mod peeling;
pub mod rank;
pub mod report;
pub mod shuffle;
pub mod tca;

pub use error::{Error, Result};
pub use exec::Execution;

/// Exact rational used throughout.
pub type Rational = num_rational::Ratio<i128>;

pub fn to_f64(x: &Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `p/q` with the sign on the numerator, e.g. `-48/90` rather than a reduced form.
pub fn fraction_over(x: &Rational, denom: i128) -> Option<String> {
    let scaled = *x * Rational::from_integer(denom);
    scaled.is_integer().then(|| format!("{}/{}", scaled.to_integer(), denom))
}
