//! Prime tables, Chebyshev-weighted digit counts over prime pairs, the
//! logarithmic integral and the running error `sup |π(x) − li(x)|`.

use std::time::Instant;

use serde::Serialize;

use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};
use crate::lattice::{k_max, CountResult, CountValue, WeightScheme};
use crate::params::Params;
use crate::scalar::{lit, CompensatedSum, Real};

/// Default largest sieve limit.
pub const DEFAULT_SIEVE_GUARD: u64 = 100_000_000;

/// Primes up to a limit with their natural-log weights and the running
/// Chebyshev function `θ(p) = Σ_{q ≤ p} log q`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    log_weights: Vec<f64>,
    /// `theta[j] = Σ_{i<j} log p_i`; one longer than `primes`.
    theta: Vec<f64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// `θ(p_j)` for each listed prime.
    pub fn theta_values(&self) -> &[f64] {
        &self.theta[1..]
    }

    /// `π(x)` for `x ≤ limit`.
    pub fn pi(&self, x: u64) -> u64 {
        self.primes.partition_point(|&p| p <= x) as u64
    }

    /// `θ(x)` for `x ≤ limit`.
    pub fn theta(&self, x: u64) -> f64 {
        self.theta[self.pi(x) as usize]
    }

    fn covers(&self, t: u64) -> Result<()> {
        if t > self.limit {
            return Err(Error::range(format!("prime table covers {} but T = {t}", self.limit)));
        }
        Ok(())
    }
}

/// Sieve of Eratosthenes on `[2, limit]`.
pub fn prime_sieve(limit: u64, guard: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::range("prime sieve needs a limit of at least 2"));
    }
    if limit > guard {
        return Err(Error::ResourceGuard { what: "sieve limit", requested: limit, limit: guard });
    }
    let n = limit as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            for j in (i * i..=n).step_by(i) {
                is_prime[j] = false;
            }
        }
        i += 1;
    }
    let primes: Vec<u64> = (2..=n).filter(|&j| is_prime[j]).map(|j| j as u64).collect();
    let log_weights: Vec<f64> = primes.iter().map(|&p| (p as f64).ln()).collect();
    let mut theta = Vec::with_capacity(primes.len() + 1);
    let mut acc = CompensatedSum::new();
    theta.push(0.0);
    for &w in &log_weights {
        acc.add(w);
        theta.push(acc.value());
    }
    Ok(PrimeTable { limit, primes, log_weights, theta })
}

/// Calls `visit(q_index, lo, hi)` for every maximal run `primes[lo..hi]` of
/// numerators `p` with `φ(p/q) = r`, for every prime denominator `q ≤ T`.
///
/// Denominators with few triangles use the triangle ranges
/// `p ∈ [⌈q(kb+r)/b^i⌉, ⌈q(kb+r+1)/b^i⌉)`; the rest test each numerator.
fn prime_digit_runs(params: &Params, table: &PrimeTable, exclude_diagonal: bool, mut visit: impl FnMut(usize, usize, usize)) {
    let t = params.bound();
    let primes = &table.primes[..table.pi(t) as usize];
    let (b, r, scale) = (params.base() as u128, params.digit() as u128, params.scale() as u128);
    let mut emit = |qi: usize, lo: usize, hi: usize| {
        if lo >= hi {
            return;
        }
        if exclude_diagonal && (lo..hi).contains(&qi) {
            if lo < qi {
                visit(qi, lo, qi);
            }
            if qi + 1 < hi {
                visit(qi, qi + 1, hi);
            }
        } else {
            visit(qi, lo, hi);
        }
    };
    for (qi, &q) in primes.iter().enumerate() {
        let q = q as u128;
        let triangles = (t as u128 * scale) / (q * b) + 1;
        if triangles > primes.len() as u128 {
            for (pi, &p) in primes.iter().enumerate() {
                if (scale * p as u128 / q) % b == r {
                    emit(qi, pi, pi + 1);
                }
            }
            continue;
        }
        let mut k = 0u128;
        loop {
            let lo = (q * (k * b + r)).div_ceil(scale);
            if lo > t as u128 {
                break;
            }
            let hi = (q * (k * b + r + 1)).div_ceil(scale).min(t as u128 + 1);
            let lo_idx = primes.partition_point(|&p| (p as u128) < lo);
            let hi_idx = primes.partition_point(|&p| (p as u128) < hi);
            emit(qi, lo_idx, hi_idx);
            k += 1;
        }
    }
}

/// `Σ log p · log q` over prime pairs `(p, q) ∈ [1, T]²` with `φ(p/q) = r`.
pub fn theta_weighted_count(params: &Params, exclude_diagonal: bool, table: &PrimeTable) -> Result<CountResult> {
    table.covers(params.bound())?;
    let start = Instant::now();
    let mut rows = vec![CompensatedSum::<f64>::new(); table.pi(params.bound()) as usize];
    prime_digit_runs(params, table, exclude_diagonal, |qi, lo, hi| {
        let s = if hi == lo + 1 { table.log_weights[lo] } else { table.theta[hi] - table.theta[lo] };
        rows[qi].add(s);
    });
    let total: CompensatedSum<f64> = rows.iter().enumerate().map(|(qi, row)| table.log_weights[qi] * row.value()).collect();
    Ok(CountResult::new(
        *params,
        WeightScheme::PrimeLogWeights { exclude_diagonal },
        CountValue::Real(total.value()),
        k_max(params),
        start,
    ))
}

/// Number of prime pairs `(p, q) ∈ [1, T]²` with `φ(p/q) = r`.
pub fn prime_pair_count(params: &Params, exclude_diagonal: bool, table: &PrimeTable) -> Result<CountResult> {
    table.covers(params.bound())?;
    let start = Instant::now();
    let mut count = 0u128;
    prime_digit_runs(params, table, exclude_diagonal, |_, lo, hi| count += (hi - lo) as u128);
    Ok(CountResult::new(
        *params,
        WeightScheme::PrimeCount { exclude_diagonal },
        CountValue::Exact(count),
        k_max(params),
        start,
    ))
}

/// Half-weight prime-pair counts in half-units, by enumeration.
pub fn prime_half_weights(base: u64, position: u32, bound: u64, exclude_diagonal: bool, table: &PrimeTable) -> Result<Vec<u128>> {
    table.covers(bound)?;
    let params = Params::new(base, 0, position, bound)?;
    let primes = &table.primes[..table.pi(bound) as usize];
    Ok(crate::lattice::half_weights_on(primes, base, params.scale(), false, exclude_diagonal))
}

/// Principal-value logarithmic integral `li(x)` for `x ≥ 2`, from
/// `γ + ln ln x + Σ_{n≥1} (ln x)^n / (n · n!)`.
pub fn li<F: Real>(x: F) -> Result<F> {
    if !(x >= lit(2.0)) || !x.is_finite() {
        return Err(Error::Domain(format!("li requires a finite x ≥ 2, got {x}")));
    }
    let u = x.ln();
    let mut acc = CompensatedSum::new();
    acc.add(lit::<F>(EULER_GAMMA));
    acc.add(u.ln());
    let mut term = F::one();
    let mut n = 1u32;
    loop {
        let nf: F = lit(n as f64);
        term = term * u / nf;
        let contrib = term / nf;
        acc.add(contrib);
        if nf > u && contrib < F::epsilon() * lit(1e-3) * acc.value().abs() {
            break;
        }
        n += 1;
    }
    Ok(acc.value())
}

/// `sup_{2 ≤ x ≤ X} |π(x) − li(x)|` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEnvelope {
    pub x_max: u64,
    pub value: f64,
    pub argmax_x: f64,
}

/// Evaluates the supremum exactly over the step function `π`: on each
/// `[p, p′)` the distance to the increasing `li` is extremal at `p` or as
/// `x → p′⁻`, so it suffices to check every prime from both sides and `X`.
pub fn empirical_error_envelope(x_max: u64, table: &PrimeTable) -> Result<ErrorEnvelope> {
    if x_max < 2 {
        return Err(Error::range("error envelope needs X ≥ 2"));
    }
    table.covers(x_max)?;
    let mut best = ErrorEnvelope { x_max, value: f64::NEG_INFINITY, argmax_x: 2.0 };
    let mut consider = |x: u64, pi: u64, li_x: f64| {
        let e = (pi as f64 - li_x).abs();
        if e > best.value {
            best.value = e;
            best.argmax_x = x as f64;
        }
    };
    for (j, &p) in table.primes.iter().take_while(|&&p| p <= x_max).enumerate() {
        let li_p = li(p as f64)?;
        if j > 0 {
            // left limit at p
            consider(p, j as u64, li_p);
        }
        consider(p, j as u64 + 1, li_p);
    }
    consider(x_max, table.pi(x_max), li(x_max as f64)?);
    Ok(best)
}
