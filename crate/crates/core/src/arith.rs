//! Exact integer primitives: base-`b` digits of a quotient and the
//! Euclidean floor-sum kernel.

use num_traits::{CheckedAdd, CheckedMul, PrimInt, Unsigned};

use crate::error::{Error, Result};
use crate::params::WideInt;

fn scaled_numerator(n: u64, b: u64, i: u32) -> Result<WideInt> {
    if b < 2 {
        return Err(Error::range(format!("base {b} must be at least 2")));
    }
    if i < 1 {
        return Err(Error::range("digit position i must be at least 1"));
    }
    (b as WideInt)
        .checked_pow(i)
        .and_then(|s| s.checked_mul(n as WideInt))
        .ok_or_else(|| Error::overflow("b^i·n"))
}

/// The `i`-th base-`b` digit after the radix point of `n/m`, using the
/// terminating representation: `⌊b^i n/m⌋ − b⌊b^(i−1) n/m⌋`.
pub fn digit_of_quotient(n: u64, m: u64, b: u64, i: u32) -> Result<u64> {
    if n == 0 || m == 0 {
        return Err(Error::range("n and m must be positive"));
    }
    let num = scaled_numerator(n, b, i)?;
    Ok(((num / m as WideInt) % b as WideInt) as u64)
}

/// True iff `b^i·n/m` is an integer, i.e. `n/m` has a second base-`b`
/// representation ending in repeated `b−1` that changes digit `i`.
pub fn is_digit_boundary(n: u64, m: u64, b: u64, i: u32) -> Result<bool> {
    if n == 0 || m == 0 {
        return Err(Error::range("n and m must be positive"));
    }
    let num = scaled_numerator(n, b, i)?;
    Ok(num % m as WideInt == 0)
}

/// `Σ_{j=0}^{count−1} ⌊(mul·j + add)/modulus⌋`, computed by Euclidean
/// reduction in `O(log max(mul, modulus))` steps.
///
/// Runs in `u64` when the intermediates fit and falls back to 128-bit
/// arithmetic otherwise.
pub fn floor_sum(count: WideInt, modulus: WideInt, mul: WideInt, add: WideInt) -> Result<WideInt> {
    if modulus < 1 {
        return Err(Error::range("floor_sum modulus must be positive"));
    }
    if count < 0 || mul < 0 || add < 0 {
        return Err(Error::range("floor_sum arguments must be nonnegative"));
    }
    if count == 0 {
        return Ok(0);
    }
    let small = |x: WideInt| x <= u64::MAX as WideInt;
    if small(count) && small(modulus) && small(mul) && small(add) {
        if let Some(v) = floor_sum_unsigned(count as u64, modulus as u64, mul as u64, add as u64) {
            return Ok(v as WideInt);
        }
    }
    floor_sum_unsigned(count as u128, modulus as u128, mul as u128, add as u128)
        .filter(|&v| v <= WideInt::MAX as u128)
        .map(|v| v as WideInt)
        .ok_or_else(|| Error::overflow("floor_sum"))
}

/// Unsigned floor-sum over any primitive unsigned width; `None` on overflow.
pub fn floor_sum_unsigned<U>(mut count: U, mut modulus: U, mut mul: U, mut add: U) -> Option<U>
where
    U: PrimInt + Unsigned + CheckedAdd + CheckedMul,
{
    let zero = U::zero();
    let one = U::one();
    let two = one + one;
    let mut acc = zero;
    while count > zero {
        if mul >= modulus {
            // Σ j for j < count is count(count−1)/2; halve whichever factor is even.
            let (a, b) = if count % two == zero {
                (count / two, count - one)
            } else {
                (count, (count - one) / two)
            };
            let tri = a.checked_mul(&b)?;
            acc = acc.checked_add(&tri.checked_mul(&(mul / modulus))?)?;
            mul = mul % modulus;
        }
        if add >= modulus {
            acc = acc.checked_add(&count.checked_mul(&(add / modulus))?)?;
            add = add % modulus;
        }
        // mul < modulus and add < modulus from here on.
        let top = mul.checked_mul(&count)?.checked_add(&add)?;
        if top < modulus {
            break;
        }
        count = top / modulus;
        add = top % modulus;
        std::mem::swap(&mut mul, &mut modulus);
    }
    Some(acc)
}
