//! Exact counts of `(n, m) ∈ [1, T]²` by the `i`-th base-`b` digit of `n/m`.
//!
//! Pairs with digit `r` split into the disjoint triangles
//!
//! ```text
//! A_k = { (n, m) : n/m ∈ [(kb + r)/b^i, (kb + r + 1)/b^i) }
//!     = { (n, m) : m ∈ (n·x_k, n·y_k] },   x_k = b^i/(bk + r + 1),  y_k = b^i/(bk + r),
//! ```
//!
//! for `0 ≤ k ≤ ⌊(b^i T − r)/b⌋`. Each `|A_k|` is a difference of two
//! clipped row sums `Σ_n min(T, ⌊n·b^i/d⌋)`, and every unclipped stretch of
//! such a sum is one call to [`floor_sum`].

use std::fmt;
use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::arith::floor_sum;
use crate::error::{Error, Result};
use crate::params::{Params, WideInt};

/// Largest `T` accepted by the enumeration-based counters.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 5_000;

/// Largest table (Möbius values, sieve) built on request.
pub const DEFAULT_TABLE_CAP: u64 = 100_000_000;

/// Which pairs are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSupport {
    All,
    Coprime,
    Primes { exclude_diagonal: bool },
}

/// Weight `ω(n, m)` attached to each counted pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    AllPairs,
    Coprime,
    /// `log p · log q` on prime pairs.
    PrimeLogWeights { exclude_diagonal: bool },
    /// Unit weight on prime pairs.
    PrimeCount { exclude_diagonal: bool },
    /// Unit weight, split in halves between digits `r` and `r − 1 (mod b)`
    /// whenever `b^i·n/m` is an integer.
    HalfBoundary { support: PairSupport },
}

impl WeightScheme {
    pub fn exclude_diagonal(&self) -> bool {
        match *self {
            WeightScheme::PrimeLogWeights { exclude_diagonal }
            | WeightScheme::PrimeCount { exclude_diagonal }
            | WeightScheme::HalfBoundary { support: PairSupport::Primes { exclude_diagonal } } => exclude_diagonal,
            _ => false,
        }
    }

    pub fn is_coprime(&self) -> bool {
        matches!(
            self,
            WeightScheme::Coprime | WeightScheme::HalfBoundary { support: PairSupport::Coprime }
        )
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nd = |x: bool| if x { "-no-diagonal" } else { "" };
        match *self {
            WeightScheme::AllPairs => write!(f, "all-pairs"),
            WeightScheme::Coprime => write!(f, "coprime"),
            WeightScheme::PrimeLogWeights { exclude_diagonal } => write!(f, "prime-weighted{}", nd(exclude_diagonal)),
            WeightScheme::PrimeCount { exclude_diagonal } => write!(f, "prime-count{}", nd(exclude_diagonal)),
            WeightScheme::HalfBoundary { support } => match support {
                PairSupport::All => write!(f, "half-weight"),
                PairSupport::Coprime => write!(f, "coprime-half-weight"),
                PairSupport::Primes { exclude_diagonal } => write!(f, "prime-half-weight{}", nd(exclude_diagonal)),
            },
        }
    }
}

impl Serialize for WeightScheme {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A count: exact integer, exact multiple of ½ (stored as half-units), or
/// a real weighted sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountValue {
    Exact(u128),
    HalfUnits(u128),
    Real(f64),
}

impl CountValue {
    pub fn as_f64(&self) -> f64 {
        match *self {
            CountValue::Exact(v) => v as f64,
            CountValue::HalfUnits(v) => v as f64 / 2.0,
            CountValue::Real(v) => v,
        }
    }

    pub fn exact(&self) -> Option<u128> {
        match *self {
            CountValue::Exact(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CountValue::Exact(v) => write!(f, "{v}"),
            CountValue::HalfUnits(v) if v % 2 == 0 => write!(f, "{}", v / 2),
            CountValue::HalfUnits(v) => write!(f, "{}.5", v / 2),
            CountValue::Real(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for CountValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            CountValue::Exact(v) => s.serialize_u128(v),
            CountValue::HalfUnits(v) if v % 2 == 0 => s.serialize_u128(v / 2),
            _ => s.serialize_f64(self.as_f64()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountResult {
    pub params: Params,
    pub variant: WeightScheme,
    pub value: CountValue,
    pub k_max_used: u64,
    pub elapsed_ns: u64,
}

impl CountResult {
    pub(crate) fn new(params: Params, variant: WeightScheme, value: CountValue, k_max_used: u64, start: Instant) -> Self {
        CountResult { params, variant, value, k_max_used, elapsed_ns: start.elapsed().as_nanos() as u64 }
    }
}

/// Unreduced slopes `x_k = b^i/(bk + r + 1)` and `y_k = b^i/(bk + r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopePair {
    pub k: u64,
    pub x_num: u64,
    pub x_den: u64,
    pub y_num: u64,
    pub y_den: u64,
}

pub fn slopes(k: u64, params: &Params) -> Result<SlopePair> {
    let y_den = k
        .checked_mul(params.base())
        .and_then(|v| v.checked_add(params.digit()))
        .filter(|&v| v < u64::MAX)
        .ok_or_else(|| Error::overflow("bk + r"))?;
    if y_den == 0 {
        return Err(Error::Unsupported("triangle k = 0 with r = 0 has an unbounded upper slope".into()));
    }
    Ok(SlopePair { k, x_num: params.scale(), x_den: y_den + 1, y_num: params.scale(), y_den })
}

/// Largest `k` for which `A_k` can be nonempty: `⌊(b^i T − r)/b⌋`.
pub fn k_max(params: &Params) -> u64 {
    (params.scale() * params.bound() - params.digit()) / params.base()
}

/// `Σ_{n=1}^{T} min(T, ⌊n·num/den⌋)`.
fn clipped_row_sum(t: WideInt, num: WideInt, den: WideInt) -> Result<WideInt> {
    // ⌊n·num/den⌋ ≤ T  ⟺  n·num < (T + 1)·den
    let unclipped = (((t + 1) * den - 1) / num).min(t);
    let head = floor_sum(unclipped, den, num, num)?;
    Ok(head + (t - unclipped) * t)
}

/// `|A_k(T; b, r; i)|`.
pub fn count_triangle(k: u64, params: &Params) -> Result<u128> {
    let t = params.bound() as WideInt;
    let scale = params.scale() as WideInt;
    let d = k as WideInt * params.base() as WideInt + params.digit() as WideInt;
    let upper = if d == 0 { t * t } else { clipped_row_sum(t, scale, d)? };
    let lower = clipped_row_sum(t, scale, d + 1)?;
    Ok((upper - lower) as u128)
}

fn count_pairs_value(params: &Params) -> Result<u128> {
    (0..=k_max(params)).try_fold(0u128, |acc, k| Ok(acc + count_triangle(k, params)?))
}

/// `Φ(T; b, r; i)`, exactly, as the sum of the triangle counts.
pub fn count_pairs(params: &Params) -> Result<CountResult> {
    let start = Instant::now();
    let value = count_pairs_value(params)?;
    Ok(CountResult::new(*params, WeightScheme::AllPairs, CountValue::Exact(value), k_max(params), start))
}

fn check_cap(what: &'static str, requested: u64, limit: u64) -> Result<()> {
    if requested > limit {
        Err(Error::ResourceGuard { what, requested, limit })
    } else {
        Ok(())
    }
}

/// `Φ(T; b, r; i)` by testing the digit of every pair. `O(T²)`.
pub fn count_pairs_bruteforce(params: &Params, cap: u64) -> Result<CountResult> {
    check_cap("brute-force bound T", params.bound(), cap)?;
    let start = Instant::now();
    let (b, r, scale, t) = (params.base(), params.digit(), params.scale(), params.bound());
    let mut count = 0u128;
    for n in 1..=t {
        let num = scale * n;
        count += (1..=t).filter(|&m| (num / m) % b == r).count() as u128;
    }
    Ok(CountResult::new(*params, WeightScheme::AllPairs, CountValue::Exact(count), 0, start))
}

/// Brute-force counts for every digit at once: entry `r` is `Φ(T; b, r; i)`.
pub fn digit_histogram_bruteforce(base: u64, position: u32, bound: u64, cap: u64) -> Result<Vec<u64>> {
    let params = Params::new(base, 0, position, bound)?;
    check_cap("brute-force bound T", bound, cap)?;
    let scale = params.scale();
    let mut bins = vec![0u64; base as usize];
    for n in 1..=bound {
        let num = scale * n;
        for m in 1..=bound {
            bins[((num / m) % base) as usize] += 1;
        }
    }
    Ok(bins)
}

/// Möbius function values `μ(1..=N)`.
#[derive(Debug, Clone)]
pub struct Mobius {
    mu: Vec<i8>,
}

impl Mobius {
    pub fn limit(&self) -> u64 {
        (self.mu.len() - 1) as u64
    }

    pub fn get(&self, d: u64) -> i8 {
        self.mu[d as usize]
    }

    /// `μ(1), …, μ(N)`.
    pub fn values(&self) -> &[i8] {
        &self.mu[1..]
    }
}

/// Linear sieve for `μ` on `1..=n`.
pub fn mobius_sieve(n: u64, cap: u64) -> Result<Mobius> {
    if n < 1 {
        return Err(Error::range("Möbius table needs N ≥ 1"));
    }
    check_cap("Möbius table size N", n, cap)?;
    let n = n as usize;
    let mut mu = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    mu[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(Mobius { mu })
}

pub(crate) fn coprime_value(params: &Params, mobius: &Mobius) -> Result<u128> {
    let t = params.bound();
    if mobius.limit() < t {
        return Err(Error::range("Möbius table shorter than T"));
    }
    // Σ_d μ(d) Φ(⌊T/d⌋), grouping the d that share ⌊T/d⌋.
    let mut total: i128 = 0;
    let mut d = 1u64;
    while d <= t {
        let q = t / d;
        let last = t / q;
        let weight: i64 = (d..=last).map(|j| mobius.get(j) as i64).sum();
        if weight != 0 {
            total += weight as i128 * count_pairs_value(&params.with_bound(q)?)? as i128;
        }
        d = last + 1;
    }
    Ok(total as u128)
}

/// Pairs with digit `r` and `gcd(n, m) = 1`, by Möbius inversion over
/// `Φ(⌊T/d⌋)`.
pub fn count_coprime_pairs(params: &Params, table_cap: u64) -> Result<CountResult> {
    let start = Instant::now();
    let mobius = mobius_sieve(params.bound(), table_cap)?;
    let value = coprime_value(params, &mobius)?;
    Ok(CountResult::new(*params, WeightScheme::Coprime, CountValue::Exact(value), k_max(params), start))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Half-weight digit counts over pairs drawn from `values × values`, in
/// half-units. A pair with `b^i·n/m ∈ ℤ` gives one half-unit to its digit
/// and one to the digit below (cyclically); every other pair gives two.
pub(crate) fn half_weights_on(
    values: &[u64],
    base: u64,
    scale: u64,
    coprime_only: bool,
    exclude_diagonal: bool,
) -> Vec<u128> {
    let mut bins = vec![0u128; base as usize];
    for &n in values {
        let num = scale * n;
        for &m in values {
            if exclude_diagonal && n == m {
                continue;
            }
            if coprime_only && gcd(n, m) != 1 {
                continue;
            }
            let r = ((num / m) % base) as usize;
            if num.is_multiple_of(m) {
                bins[r] += 1;
                bins[(r + base as usize - 1) % base as usize] += 1;
            } else {
                bins[r] += 2;
            }
        }
    }
    bins
}

/// Half-weight counts `w(r)` for every digit, in half-units (`2·w(r)`).
/// Enumeration-based; `T` is limited by `cap`.
pub fn count_pairs_half_weight(base: u64, position: u32, bound: u64, cap: u64) -> Result<Vec<u128>> {
    half_weight_histogram(base, position, bound, PairSupport::All, cap)
}

/// Half-weight counts for all, coprime, or prime pairs.
pub fn half_weight_histogram(
    base: u64,
    position: u32,
    bound: u64,
    support: PairSupport,
    cap: u64,
) -> Result<Vec<u128>> {
    let params = Params::new(base, 0, position, bound)?;
    check_cap("brute-force bound T", bound, cap)?;
    let scale = params.scale();
    Ok(match support {
        PairSupport::All => half_weights_on(&(1..=bound).collect::<Vec<_>>(), base, scale, false, false),
        PairSupport::Coprime => half_weights_on(&(1..=bound).collect::<Vec<_>>(), base, scale, true, false),
        PairSupport::Primes { exclude_diagonal } => {
            let table = crate::primes::prime_sieve(bound.max(2), cap)?;
            let primes: Vec<u64> = table.primes().iter().copied().filter(|&p| p <= bound).collect();
            half_weights_on(&primes, base, scale, false, exclude_diagonal)
        }
    })
}

/// Pairs in `[1, T]²` with `b·{n/m} = r` exactly (first digit, `r ≥ 1`),
/// optionally restricted to `gcd(n, m) = d`.
///
/// Such pairs are `d·(q·m₁ + r₁, m₁)` with `m₁ = b/(b, r)`, `r₁ = r/(b, r)`,
/// `q ≥ 0`, `d ≥ 1`.
pub fn count_boundary(params: &Params, gcd_filter: Option<u64>) -> Result<u128> {
    if params.position() != 1 {
        return Err(Error::Unsupported("boundary counts are defined for digit position i = 1 only".into()));
    }
    if params.digit() == 0 {
        return Err(Error::Unsupported("boundary counts need a digit r ≥ 1".into()));
    }
    let (b, r, t) = (params.base(), params.digit(), params.bound());
    let g = gcd(b, r);
    let (m1, r1) = (b / g, r / g);
    let per_class = |d: u64| -> u128 {
        if d == 0 || d > t / m1 {
            return 0;
        }
        ((t / d - r1) / m1 + 1) as u128
    };
    Ok(match gcd_filter {
        Some(d) => per_class(d),
        None => (1..=t / m1).map(per_class).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{digit_of_quotient, is_digit_boundary};

    fn p(b: u64, r: u64, i: u32, t: u64) -> Params {
        Params::new(b, r, i, t).unwrap()
    }

    fn triangle_bruteforce(k: u64, params: &Params) -> u128 {
        // n/m ∈ [(kb+r)/b^i, (kb+r+1)/b^i), cross-multiplied
        let lo = (k * params.base() + params.digit()) as u128;
        let s = params.scale() as u128;
        let t = params.bound();
        let mut c = 0;
        for n in 1..=t as u128 {
            for m in 1..=t as u128 {
                if n * s >= lo * m && n * s < (lo + 1) * m {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn slope_examples() {
        let s = slopes(1, &p(10, 5, 1, 10)).unwrap();
        assert_eq!((s.x_num, s.x_den, s.y_num, s.y_den), (10, 16, 10, 15));
        let s = slopes(0, &p(10, 1, 1, 10)).unwrap();
        assert_eq!((s.x_num, s.x_den, s.y_num, s.y_den), (10, 2, 10, 1));
        let s = slopes(100, &p(2, 1, 3, 10)).unwrap();
        assert_eq!((s.x_num, s.x_den, s.y_num, s.y_den), (8, 202, 8, 201));
        assert!(matches!(slopes(0, &p(10, 0, 1, 10)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn slope_bounds() {
        for (b, r, i) in [(10, 3, 1), (2, 1, 3), (7, 0, 2)] {
            let params = p(b, r, i, 10);
            let lead = b.pow(i - 1) as u128;
            for k in 1..500u64 {
                let s = slopes(k, &params).unwrap();
                // x_k < y_k
                assert!((s.x_num as u128) * (s.y_den as u128) < (s.y_num as u128) * (s.x_den as u128));
                // 1/(3k) < x_k / b^(i-1) and y_k / b^(i-1) ≤ 1/k
                assert!((s.x_den as u128) * lead < 3 * k as u128 * s.x_num as u128);
                assert!(k as u128 * s.y_num as u128 <= (s.y_den as u128) * lead);
            }
        }
    }

    #[test]
    fn k_max_examples() {
        assert_eq!(k_max(&p(10, 5, 1, 3)), 2);
        assert_eq!(count_triangle(3, &p(10, 5, 1, 3)).unwrap(), 0);
        assert_eq!(triangle_bruteforce(3, &p(10, 5, 1, 3)), 0);
        assert_eq!(k_max(&p(2, 0, 1, 1)), 1);
        assert_eq!(k_max(&p(10, 0, 1, 100)), 100);
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(count_triangle(0, &p(10, 0, 1, 2)).unwrap(), 0);
        assert_eq!(triangle_bruteforce(0, &p(10, 0, 1, 2)), 0);
        // T = 1: only (1, 1), quotient exactly 1, which sits in k = b^(i-1) iff r = 0
        for (b, i) in [(10u64, 1u32), (3, 2), (2, 3)] {
            for r in 0..b {
                let k = b.pow(i - 1);
                assert_eq!(count_triangle(k, &p(b, r, i, 1)).unwrap(), u128::from(r == 0));
            }
        }
        // quotients in [1.5, 1.6), T = 100: 221 by enumeration
        assert_eq!(count_triangle(1, &p(10, 5, 1, 100)).unwrap(), 221);
        assert_eq!(triangle_bruteforce(1, &p(10, 5, 1, 100)), 221);
    }

    #[test]
    fn triangles_partition_pairs() {
        for (b, r, i, t) in [(10, 0, 1, 37), (10, 7, 2, 23), (3, 2, 1, 100), (2, 1, 3, 41)] {
            let params = p(b, r, i, t);
            let total: u128 = (0..=k_max(&params)).map(|k| count_triangle(k, &params).unwrap()).sum();
            assert_eq!(total, count_pairs(&params).unwrap().value.exact().unwrap());
            // tag every pair with its triangle index and compare per k
            let mut per_k = std::collections::HashMap::<u64, u128>::new();
            for n in 1..=t {
                for m in 1..=t {
                    if digit_of_quotient(n, m, b, i).unwrap() == r {
                        let k = (b.pow(i) * n / m) / b;
                        *per_k.entry(k).or_default() += 1;
                    }
                }
            }
            for k in 0..=k_max(&params) + 2 {
                assert_eq!(count_triangle(k, &params).unwrap(), per_k.get(&k).copied().unwrap_or(0), "k={k}");
            }
        }
    }

    #[test]
    fn count_pairs_examples() {
        assert_eq!(count_pairs(&p(10, 0, 1, 2)).unwrap().value, CountValue::Exact(3));
        assert_eq!(count_pairs(&p(10, 5, 1, 2)).unwrap().value, CountValue::Exact(1));
        assert_eq!(count_pairs_bruteforce(&p(10, 0, 1, 2), 5000).unwrap().value, CountValue::Exact(3));
        assert_eq!(count_pairs_bruteforce(&p(2, 1, 1, 1), 5000).unwrap().value, CountValue::Exact(0));
        let a = count_pairs(&p(10, 3, 2, 50)).unwrap().value;
        let b = count_pairs_bruteforce(&p(10, 3, 2, 50), 5000).unwrap().value;
        assert_eq!(a, b);
        let r = count_pairs(&p(10, 0, 1, 100)).unwrap();
        assert_eq!(r.k_max_used, 100);
        assert_eq!(r.variant, WeightScheme::AllPairs);
    }

    #[test]
    fn bruteforce_cap() {
        let e = count_pairs_bruteforce(&p(10, 0, 1, 5001), DEFAULT_BRUTE_FORCE_CAP).unwrap_err();
        assert!(matches!(e, Error::ResourceGuard { requested: 5001, limit: 5000, .. }));
        assert!(digit_histogram_bruteforce(10, 1, 20, 10).is_err());
    }

    #[test]
    fn histogram_bruteforce_sums() {
        let h = digit_histogram_bruteforce(10, 1, 2, 5000).unwrap();
        assert_eq!(h, vec![3, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn exhaustive_over_digits() {
        for (b, i, t) in [(10, 1, 1000), (2, 3, 513), (30, 1, 999), (7, 2, 100)] {
            let total: u128 = (0..b).map(|r| count_pairs(&p(b, r, i, t)).unwrap().value.exact().unwrap()).sum();
            assert_eq!(total, (t as u128).pow(2));
        }
    }

    #[test]
    fn nondecreasing_in_bound() {
        for (b, r, i) in [(10, 0, 1), (10, 9, 1), (3, 1, 2)] {
            let mut prev = 0;
            for t in 1..=120 {
                let v = count_pairs(&p(b, r, i, t)).unwrap().value.exact().unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius_sieve(6, 100).unwrap().values(), &[1, -1, -1, 0, -1, 1]);
        assert_eq!(mobius_sieve(1, 100).unwrap().values(), &[1]);
        assert!(mobius_sieve(0, 100).is_err());
        assert!(matches!(mobius_sieve(101, 100), Err(Error::ResourceGuard { .. })));
    }

    #[test]
    fn mobius_against_factorization() {
        fn mu(mut n: u64) -> i8 {
            let mut sign = 1;
            let mut f = 2;
            while f * f <= n {
                if n.is_multiple_of(f) {
                    n /= f;
                    if n.is_multiple_of(f) {
                        return 0;
                    }
                    sign = -sign;
                }
                f += 1;
            }
            if n > 1 {
                sign = -sign;
            }
            sign
        }
        let table = mobius_sieve(1_000_000, DEFAULT_TABLE_CAP).unwrap();
        let mertens: i64 = table.values().iter().map(|&v| v as i64).sum();
        assert_eq!(mertens, 212);
        let small: i64 = table.values()[..10_000].iter().map(|&v| v as i64).sum();
        assert_eq!(small, -23);
        let mut d = 1u64;
        while d <= 1_000_000 {
            assert_eq!(table.get(d), mu(d), "d={d}");
            d = d * 7 % 1_000_003 + 1;
            if d == 1 {
                break;
            }
        }
        for d in (999_000..=1_000_000).chain(1..2000) {
            assert_eq!(table.get(d), mu(d), "d={d}");
        }
    }

    #[test]
    fn coprime_examples() {
        let c = |r, t| count_coprime_pairs(&p(10, r, 1, t), DEFAULT_TABLE_CAP).unwrap().value.exact().unwrap();
        assert_eq!(c(0, 2), 2);
        assert_eq!(c(5, 2), 1);
        for (b, r, i, t) in [(10, 3, 1, 60), (30, 0, 1, 45), (2, 1, 2, 33)] {
            let params = p(b, r, i, t);
            let direct = (1..=t)
                .flat_map(|n| (1..=t).map(move |m| (n, m)))
                .filter(|&(n, m)| gcd(n, m) == 1 && digit_of_quotient(n, m, b, i).unwrap() == r)
                .count() as u128;
            assert_eq!(count_coprime_pairs(&params, DEFAULT_TABLE_CAP).unwrap().value.exact().unwrap(), direct);
        }
    }

    #[test]
    fn mobius_consistency() {
        for t in [1u64, 2, 17, 100, 300] {
            let params = p(10, 3, 1, t);
            let lhs: u128 = (1..=t)
                .map(|d| count_coprime_pairs(&params.with_bound(t / d).unwrap(), DEFAULT_TABLE_CAP).unwrap().value.exact().unwrap())
                .sum();
            assert_eq!(lhs, count_pairs(&params).unwrap().value.exact().unwrap());
        }
    }

    #[test]
    fn half_weight_examples() {
        let w = count_pairs_half_weight(10, 1, 1, 5000).unwrap();
        let mut e = vec![0u128; 10];
        e[0] = 1;
        e[9] = 1;
        assert_eq!(w, e);
        // (1,1), (2,1), (2,2) are 1.0 or 2.0 and (1,2) is 0.5: all on a boundary
        let w = count_pairs_half_weight(10, 1, 2, 5000).unwrap();
        assert_eq!(w, vec![3, 0, 0, 0, 1, 1, 0, 0, 0, 3]);
        for (b, t) in [(10u64, 57u64), (30, 100), (7, 64)] {
            let w = count_pairs_half_weight(b, 1, t, 5000).unwrap();
            assert_eq!(w.iter().sum::<u128>(), 2 * (t as u128).pow(2));
        }
        assert!(matches!(count_pairs_half_weight(10, 1, 6000, 5000), Err(Error::ResourceGuard { .. })));
    }

    #[test]
    fn half_weight_matches_per_pair_rule() {
        let (b, i, t) = (12u64, 2u32, 40u64);
        let mut e = vec![0u128; b as usize];
        for n in 1..=t {
            for m in 1..=t {
                let r = digit_of_quotient(n, m, b, i).unwrap() as usize;
                if is_digit_boundary(n, m, b, i).unwrap() {
                    e[r] += 1;
                    e[(r + b as usize - 1) % b as usize] += 1;
                } else {
                    e[r] += 2;
                }
            }
        }
        assert_eq!(count_pairs_half_weight(b, i, t, 5000).unwrap(), e);
    }

    #[test]
    fn half_weight_prime_support() {
        // primes ≤ 3: (2,2),(3,3) → 1.0, (2,3) → 0.66, (3,2) → 1.5
        let w = half_weight_histogram(10, 1, 3, PairSupport::Primes { exclude_diagonal: false }, 5000).unwrap();
        assert_eq!(w, vec![2, 0, 0, 0, 1, 1, 2, 0, 0, 2]);
        let w = half_weight_histogram(10, 1, 3, PairSupport::Primes { exclude_diagonal: true }, 5000).unwrap();
        assert_eq!(w, vec![0, 0, 0, 0, 1, 1, 2, 0, 0, 0]);
    }

    fn boundary_bruteforce(b: u64, r: u64, t: u64, d: Option<u64>) -> u128 {
        let mut c = 0;
        for n in 1..=t {
            for m in 1..=t {
                if d.is_some_and(|d| gcd(n, m) != d) {
                    continue;
                }
                if is_digit_boundary(n, m, b, 1).unwrap() && digit_of_quotient(n, m, b, 1).unwrap() == r {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(count_boundary(&p(10, 5, 1, 10), None).unwrap(), 12);
        assert_eq!(boundary_bruteforce(10, 5, 10, None), 12);
        assert_eq!(count_boundary(&p(10, 1, 1, 10), None).unwrap(), 1);
        assert_eq!(count_boundary(&p(2, 1, 1, 4), None).unwrap(), 3);
        assert!(matches!(count_boundary(&p(10, 5, 2, 10), None), Err(Error::Unsupported(_))));
        assert!(matches!(count_boundary(&p(10, 0, 1, 10), None), Err(Error::Unsupported(_))));
    }

    #[test]
    fn boundary_gcd_classes() {
        for (b, r) in [(10, 5), (10, 4), (30, 6), (7, 3), (2, 1)] {
            for t in [1u64, 9, 50, 100] {
                let params = p(b, r, 1, t);
                let total = count_boundary(&params, None).unwrap();
                assert_eq!(total, boundary_bruteforce(b, r, t, None), "({b},{r},{t})");
                let mut by_class = 0;
                for d in 1..=t {
                    let c = count_boundary(&params, Some(d)).unwrap();
                    assert_eq!(c, boundary_bruteforce(b, r, t, Some(d)));
                    // every pair in class d is d times a reduced pair with both coordinates ≤ T/d
                    let reduced = count_boundary(&params.with_bound(t / d).unwrap(), Some(1)).unwrap();
                    assert_eq!(c, reduced);
                    by_class += c;
                }
                assert_eq!(by_class, total);
            }
        }
    }

    #[test]
    fn scheme_labels() {
        assert_eq!(WeightScheme::AllPairs.to_string(), "all-pairs");
        assert_eq!(WeightScheme::PrimeCount { exclude_diagonal: true }.to_string(), "prime-count-no-diagonal");
        assert_eq!(
            WeightScheme::HalfBoundary { support: PairSupport::Primes { exclude_diagonal: true } }.to_string(),
            "prime-half-weight-no-diagonal"
        );
        assert!(WeightScheme::HalfBoundary { support: PairSupport::Coprime }.is_coprime());
        assert!(!WeightScheme::PrimeLogWeights { exclude_diagonal: false }.exclude_diagonal());
    }

    #[test]
    fn count_value_formatting() {
        assert_eq!(CountValue::HalfUnits(7).to_string(), "3.5");
        assert_eq!(CountValue::HalfUnits(8).to_string(), "4");
        assert_eq!(serde_json::to_string(&CountValue::HalfUnits(7)).unwrap(), "3.5");
        assert_eq!(serde_json::to_string(&CountValue::Exact(12)).unwrap(), "12");
    }
}
