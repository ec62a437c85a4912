//! Digamma function and the limiting digit densities `c(b, r; i)`.
//!
//! The density of pairs `(n, m)` whose quotient has digit `r` at position
//! `i` in base `b` is
//!
//! ```text
//! c(b, r; i) = 1/(2b) + ½ b^(i−1) (ψ((b^i + r + 1)/b) − ψ((b^i + r)/b))
//!            = 1/(2b) + ½ b^(i−1) Σ_{k ≥ b^(i−1)} b / ((bk + r)(bk + r + 1)).
//! ```

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::params::checked_scale;
use crate::scalar::{from_u64, lit, CompensatedSum, Real};

/// Euler–Mascheroni constant γ = −ψ(1).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// ψ is shifted upward until its argument reaches this value.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// `B_{2k} / (2k)` for k = 1..=7.
const ASYMPTOTIC_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// `Σ_k B_{2k}/(2k) · z^k` by Horner's rule, with `z = 1/x²`.
fn bernoulli_tail<F: Real>(z: F) -> F {
    ASYMPTOTIC_COEFFS.iter().rev().fold(F::zero(), |acc, &c| acc * z + lit(c)) * z
}

/// Digamma ψ(x) for `x > 0`.
///
/// Upward recurrence to `x ≥ 10`, then the asymptotic expansion
/// `ln x − 1/(2x) − Σ B_{2k}/(2k x^{2k})` truncated after `B_14`.
pub fn digamma<F: Real>(x: F) -> Result<F> {
    if !(x > F::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma requires a finite x > 0, got {x}")));
    }
    let limit: F = lit(ASYMPTOTIC_FROM);
    let mut shifts = Vec::new();
    let mut y = x;
    while y < limit {
        shifts.push(y.recip());
        y = y + F::one();
    }
    let asym = y.ln() - (lit::<F>(2.0) * y).recip() - bernoulli_tail(y.powi(-2));
    // smallest reciprocals first
    let shift: CompensatedSum<F> = shifts.into_iter().rev().collect();
    Ok(asym - shift.value())
}

/// `ψ(x + h) − ψ(x)` for `x > 0`, `h ≥ 0`, without cancellation between
/// two separately rounded digamma values.
pub fn digamma_diff<F: Real>(x: F, h: F) -> Result<F> {
    if !(x > F::zero()) || !x.is_finite() || !(h >= F::zero()) || !h.is_finite() {
        return Err(Error::Domain(format!("digamma_diff requires x > 0 and h ≥ 0, got x={x}, h={h}")));
    }
    let limit: F = lit(ASYMPTOTIC_FROM);
    let mut acc = CompensatedSum::new();
    let mut y = x;
    let mut near = Vec::new();
    while y < limit {
        // 1/y − 1/(y + h)
        near.push(h / (y * (y + h)));
        y = y + F::one();
    }
    let u = h / y;
    let log_ratio = u.ln_1p();
    let z = y.powi(-2);
    let mut poly = F::zero();
    let mut zk = F::one();
    for (k, &c) in ASYMPTOTIC_COEFFS.iter().enumerate() {
        zk = zk * z;
        let power = -lit::<F>(2.0 * (k + 1) as f64);
        // (y + h)^{-2k} − y^{-2k}
        poly = poly + lit::<F>(c) * zk * (power * log_ratio).exp_m1();
    }
    acc.add(log_ratio);
    acc.add(h / (lit::<F>(2.0) * y * (y + h)));
    acc.add(-poly);
    for t in near.into_iter().rev() {
        acc.add(t);
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DigammaClosedForm,
    TruncatedSeries,
}

/// An evaluated digit density `c(b, r; i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DigitConstant<F> {
    pub base: u64,
    pub digit: u64,
    pub position: u32,
    pub value: F,
    pub method: Method,
    /// Certified bound on `|value − c(b, r; i)|` from truncation; zero for
    /// the closed form.
    pub tail_bound: F,
}

fn validate(base: u64, digit: u64, position: u32) -> Result<u64> {
    let scale = checked_scale(base, position)?;
    if digit >= base {
        return Err(Error::range(format!("digit {digit} is not below base {base}")));
    }
    Ok(scale)
}

/// `ψ((m + 1)/b) − ψ(m/b)` for `m > 0`, in double-word arithmetic.
///
/// Terms `b/(t(t+1))` for `t = m, m + b, …` are summed until `t ≥ 1000`
/// and `t/b ≥ 10`; the remainder comes from the asymptotic expansion at
/// `y = t/b`, where `h/y = 1/t` and `ln(1 + 1/t)` is a short series.
fn psi_gap<F: Real>(m: F, b: F) -> Dd<F> {
    let limit = lit::<F>(1000.0).max(lit::<F>(ASYMPTOTIC_FROM) * b);
    let bb = Dd::new(b);
    let mut near = Vec::new();
    let mut top = m;
    while top < limit {
        near.push(bb / Dd::product(top, top + F::one()));
        top = top + b;
    }
    let u = Dd::new(F::one()) / Dd::new(top);
    // ln(1 + u), u ≤ 1e-3
    let mut log_ratio = Dd::new(F::zero());
    let mut power = u;
    let mut j = 1u32;
    loop {
        let term = power / Dd::new(lit::<F>(j as f64));
        log_ratio = if j % 2 == 1 { log_ratio + term } else { log_ratio - term };
        if term.abs().hi() < F::epsilon() * F::epsilon() * log_ratio.hi() {
            break;
        }
        power = power * u;
        j += 1;
    }
    let z = (b / top).powi(2);
    let mut poly = F::zero();
    let mut zk = F::one();
    for (k, &c) in ASYMPTOTIC_COEFFS.iter().enumerate() {
        zk = zk * z;
        let exponent = -lit::<F>(2.0 * (k + 1) as f64);
        // (y + h)^{-2k} − y^{-2k}
        poly = poly + lit::<F>(c) * zk * (exponent * log_ratio.value()).exp_m1();
    }
    let half_gap = bb / (Dd::new(lit::<F>(2.0)) * Dd::product(top, top + F::one()));
    let mut acc = log_ratio + half_gap - Dd::new(poly);
    for t in near.into_iter().rev() {
        acc = acc + t;
    }
    acc
}

/// `c(b, r; i)` with a real-valued digit `r ∈ [0, b)`; the continuous
/// curve drawn through the integer-digit densities.
pub fn digit_density<F: Real>(base: u64, digit: F, position: u32) -> Result<F> {
    let scale = checked_scale(base, position)?;
    if !(digit >= F::zero()) || !(digit <= from_u64::<F>(base)) {
        return Err(Error::range(format!("digit {digit} outside [0, {base}]")));
    }
    let b: F = from_u64(base);
    let lead: F = from_u64(scale / base);
    let gap = psi_gap(from_u64::<F>(scale) + digit, b);
    let base_share = Dd::new(F::one()) / Dd::new(lit::<F>(2.0) * b);
    Ok((base_share + Dd::new(lit::<F>(0.5) * lead) * gap).value())
}

/// Closed-form `c(b, r; i)` via the digamma function.
pub fn digit_constant<F: Real>(base: u64, digit: u64, position: u32) -> Result<DigitConstant<F>> {
    validate(base, digit, position)?;
    let value = digit_density(base, from_u64::<F>(digit), position)?;
    Ok(DigitConstant {
        base,
        digit,
        position,
        value,
        method: Method::DigammaClosedForm,
        tail_bound: F::zero(),
    })
}

/// `c(b, r; i)` from the series truncated at `k = cutoff`, with the tail
/// bound `b^(i−1) / (2·cutoff)`.
pub fn digit_constant_series<F: Real>(
    base: u64,
    digit: u64,
    position: u32,
    cutoff: u64,
) -> Result<DigitConstant<F>> {
    let scale = validate(base, digit, position)?;
    let first = scale / base;
    if cutoff < first {
        return Err(Error::range(format!("series cutoff {cutoff} is below b^(i-1) = {first}")));
    }
    let b: F = from_u64(base);
    let r: F = from_u64(digit);
    let lead: F = from_u64(first);
    let mut acc = CompensatedSum::new();
    for k in (first..=cutoff).rev() {
        let d = b * from_u64::<F>(k) + r;
        acc.add(b / (d * (d + F::one())));
    }
    let half = lit::<F>(0.5);
    Ok(DigitConstant {
        base,
        digit,
        position,
        value: (lit::<F>(2.0) * b).recip() + half * lead * acc.value(),
        method: Method::TruncatedSeries,
        tail_bound: half * lead / from_u64::<F>(cutoff),
    })
}

/// Density of coprime pairs with digit `r`: `c(b, r; i) / ζ(2)`.
pub fn coprime_constant<F: Real>(base: u64, digit: u64, position: u32) -> Result<F> {
    let c = digit_constant::<F>(base, digit, position)?;
    Ok(c.value * lit::<F>(6.0) / (F::PI() * F::PI()))
}
