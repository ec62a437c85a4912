use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signed integer wide enough for every exact intermediate of the counting
/// kernels.
pub type WideInt = i128;

/// Largest admissible value of `b^i · T` (exclusive).
pub const WIDE_LIMIT: u64 = 1 << 62;

/// The problem tuple: base `b`, digit `r`, position `i` and bound `T`.
///
/// Construction enforces `b ≥ 2`, `r < b`, `i ≥ 1`, `T ≥ 1` and
/// `b^i · T < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    base: u64,
    digit: u64,
    position: u32,
    bound: u64,
    #[serde(skip)]
    scale: u64,
}

impl Params {
    pub fn new(base: u64, digit: u64, position: u32, bound: u64) -> Result<Self> {
        let scale = checked_scale(base, position)?;
        if digit >= base {
            return Err(Error::range(format!("digit {digit} is not below base {base}")));
        }
        if bound < 1 {
            return Err(Error::range("bound T must be at least 1"));
        }
        match scale.checked_mul(bound) {
            Some(v) if v < WIDE_LIMIT => {}
            _ => {
                return Err(Error::range(format!(
                    "b^i·T = {base}^{position}·{bound} must stay below 2^62"
                )))
            }
        }
        Ok(Params { base, digit, position, bound, scale })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digit(&self) -> u64 {
        self.digit
    }

    pub fn position(&self) -> u32 {
        self.position
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// `b^i`.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn with_digit(&self, digit: u64) -> Result<Self> {
        Params::new(self.base, digit, self.position, self.bound)
    }

    pub fn with_bound(&self, bound: u64) -> Result<Self> {
        Params::new(self.base, self.digit, self.position, bound)
    }
}

/// Validates `(b, i)` and returns `b^i`, which must itself stay below 2^62.
pub fn checked_scale(base: u64, position: u32) -> Result<u64> {
    if base < 2 {
        return Err(Error::range(format!("base {base} must be at least 2")));
    }
    if position < 1 {
        return Err(Error::range("digit position i must be at least 1"));
    }
    match base.checked_pow(position) {
        Some(v) if v < WIDE_LIMIT => Ok(v),
        _ => Err(Error::range(format!("b^i = {base}^{position} must stay below 2^62"))),
    }
}
