//! Exact counting of integer pairs `(n, m) ∈ [1, T]²` by the `i`-th base-`b`
//! digit of `n/m`, together with the limiting densities `c(b, r; i)`.
//!
//! - [`arith`]: digits of a quotient and the floor-sum kernel.
//! - [`constants`]: digamma and `c(b, r; i)`, generic over [`Real`].
//! - [`lattice`]: `Φ(T; b, r; i)` by triangle decomposition, plus the
//!   coprime, half-weight and boundary variants.
//! - [`primes`]: sieve, `log p · log q` weighted counts, `li`, and the
//!   running `|π − li|` envelope.
//! - [`experiments`]: histograms, sweeps and their CSV/JSON/SVG output.


// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod arith;
pub mod constants;
mod dd;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod params;
pub mod primes;
pub mod scalar;

pub use arith::{digit_of_quotient, floor_sum, is_digit_boundary};
pub use constants::{coprime_constant, digamma, digit_constant, digit_constant_series, Method, EULER_GAMMA};
pub use error::{Error, Result};
pub use experiments::{
    boundary_growth_report, emit, error_sweep, make_histogram, BoundaryReport, Format, Histogram, Limits, Report,
    Sweep, SweepRow,
};
pub use lattice::{
    count_boundary, count_coprime_pairs, count_pairs, count_pairs_bruteforce, count_pairs_half_weight,
    count_triangle, k_max, mobius_sieve, slopes, CountResult, CountValue, PairSupport, SlopePair, WeightScheme,
};
pub use params::{Params, WideInt};
pub use primes::{empirical_error_envelope, li, prime_pair_count, prime_sieve, theta_weighted_count, ErrorEnvelope, PrimeTable};
pub use scalar::{CompensatedSum, Real};

/// Digit density evaluated in double precision.
pub type DigitConstant = constants::DigitConstant<f64>;
/// Digit density evaluated in single precision.
pub type DigitConstantF32 = constants::DigitConstant<f32>;
