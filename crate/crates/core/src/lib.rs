//! Exact-arithmetic construction and verification of very-well-poised
//! hypergeometric linear forms in zeta values.
//!
//! Modules:
//! - [`arith`]: rationals, primes, harmonic numbers, lcm, p-adic valuations
//! - [`jets`]: truncated power series in a deformation variable
//! - [`hyp`]: terminating hypergeometric series and the transformation catalog
//! - [`multisum`]: ordered multiple sums, bricks, and their integrality lemmas
//! - [`forms`]: linear-form coefficients, sequences, numeric series evaluation
//! - [`numeric`]: fixed-point big decimals with tracked error bounds
//! - [`report`], [`campaign`]: machine-readable verification campaigns

pub mod arith;
pub mod campaign;
pub mod forms;
pub mod hyp;
pub mod jets;
pub mod multisum;
pub mod numeric;
pub mod report;

pub use arith::{PrimeTable, Rational, Valuation};
pub use forms::{CoeffVector, FormParams};
pub use hyp::{AndrewsParams, HypSpec};
pub use jets::{EpsJet, Jet, JetError};
pub use numeric::BigFloat;
pub use report::{Report, Status};
pub use campaign::CampaignConfig;
