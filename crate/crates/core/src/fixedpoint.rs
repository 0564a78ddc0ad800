//! Exact ceilings of c^(e*m!) for integer c, where e is Euler's
//! number. The candidate-list bound for the binary list decoder needs
//! this number exactly, and it can run to hundreds of digits, so we
//! evaluate it in fixed-point arithmetic over BigUint with enough
//! guard bits and accept only when two precisions agree and the
//! fractional part sits well clear of an integer boundary.
//!
//! Representation: a nonnegative real x is a mantissa M with value
//! M / 2^prec. Multiplication truncates; every series is summed until
//! its next term underflows to zero at the working precision.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Refuse exponents above this many result bits; the series costs grow
/// quadratically past it and no downstream consumer can hold 2^b then
/// anyway.
const BITS_CAP: u64 = 100_000;

/// Guard bits beyond the estimated result size.
const GUARD_BITS: u64 = 192;

/// Fractional parts closer than 2^-64 to an integer are treated as
/// unresolved and trigger a retry at higher precision.
const SAFETY_BITS: u64 = 64;

fn fixed_one(prec: u64) -> BigUint {
    BigUint::one() << prec
}

fn fixed_mul(a: &BigUint, b: &BigUint, prec: u64) -> BigUint {
    (a * b) >> prec
}

/// Euler's number at the given precision.
fn euler(prec: u64) -> BigUint {
    let mut sum = BigUint::zero();
    let mut term = fixed_one(prec);
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term;
        term /= k;
        k += 1;
    }
    sum
}

/// atanh(num/den) for 0 <= num < den. Only scalar multiplies and
/// divides per term, so large-precision calls stay cheap.
fn atanh_ratio(num: u64, den: u64, prec: u64) -> BigUint {
    debug_assert!(num < den);
    let mut power = fixed_one(prec) * num / den;
    let mut sum = BigUint::zero();
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / k;
        power = power * (num * num) / (den * den);
        k += 2;
    }
    sum
}

fn ln2(prec: u64) -> BigUint {
    atanh_ratio(1, 3, prec) << 1
}

/// ln(base) = k ln 2 + 2 atanh((base - 2^k)/(base + 2^k)) with
/// 2^k <= base < 2^(k+1).
fn ln_base(base: u64, prec: u64) -> BigUint {
    let k = 63 - base.leading_zeros() as u64;
    let two_k = 1u64 << k;
    ln2(prec) * k + (atanh_ratio(base - two_k, base + two_k, prec) << 1)
}

/// exp(x) for fixed-point 0 <= x < 1.
fn exp_fixed(x: &BigUint, prec: u64) -> BigUint {
    let mut sum = BigUint::zero();
    let mut term = fixed_one(prec);
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term;
        term = fixed_mul(&term, x, prec) / k;
        k += 1;
    }
    sum
}

/// One evaluation of ceil(base^(e * fact)) at a fixed precision.
/// Returns the ceiling plus whether the fractional part stayed clear
/// of both integer boundaries.
fn ceil_at_precision(base: u64, fact: &BigUint, prec: u64) -> Result<(BigUint, bool)> {
    let ln2v = ln2(prec);
    let y = fixed_mul(&euler(prec), &ln_base(base, prec), prec) * fact;
    // base^(e*fact) = 2^g * exp(rem) with rem in [0, ln 2).
    let g = &y / &ln2v;
    let rem = y - &g * &ln2v;
    let g = g.to_u64().ok_or(Error::Internal {
        check: "euler power exponent fits u64",
        detail: "binary exponent overflowed despite bits cap".to_string(),
    })?;
    let scaled = exp_fixed(&rem, prec) << g;
    let int_part = &scaled >> prec;
    let frac = scaled - (&int_part << prec);
    let margin = BigUint::one() << (prec - SAFETY_BITS);
    let safe = frac > margin && frac < fixed_one(prec) - &margin;
    let ceil = if frac.is_zero() {
        int_part
    } else {
        int_part + 1u32
    };
    Ok((ceil, safe))
}

/// ceil(base^(e * m!)) exactly, where e = 2.71828... .
///
/// Fails with CapExceeded when the result would exceed 100000 bits.
/// The value is irrational for every admissible input, so the
/// agreement loop terminates; eight failures in a row mean a genuine
/// arithmetic bug.
pub(crate) fn ceil_euler_power(base: u64, m: u64) -> Result<BigUint> {
    if base < 2 {
        return Err(Error::InvalidParameter {
            reason: format!("euler power base {base} below 2"),
        });
    }
    if m < 1 {
        return Err(Error::InvalidParameter {
            reason: format!("factorial argument {m} below 1"),
        });
    }
    let log2_base = (base as f64).log2();
    let mut log2_fact = 0f64;
    for k in 2..=m {
        log2_fact += (k as f64).log2();
    }
    let bits_estimate = std::f64::consts::E * log2_fact.exp2() * log2_base;
    // exp2 can overflow to infinity; an infinite or NaN estimate must bail.
    if !bits_estimate.is_finite() || bits_estimate > BITS_CAP as f64 {
        return Err(Error::CapExceeded {
            what: "result bits in euler power ceiling",
            needed: format!("{bits_estimate:.0}"),
            cap: BITS_CAP,
        });
    }
    let fact = (2..=m)
        .map(BigUint::from)
        .product::<BigUint>()
        .max(BigUint::one());

    let mut prec = bits_estimate.ceil() as u64 + GUARD_BITS;
    let mut prev: Option<BigUint> = None;
    for _ in 0..8 {
        let (ceil, safe) = ceil_at_precision(base, &fact, prec)?;
        if safe {
            if prev.as_ref() == Some(&ceil) {
                return Ok(ceil);
            }
            prev = Some(ceil);
        } else {
            prev = None;
        }
        prec += 128;
    }
    Err(Error::Internal {
        check: "euler power precision loop",
        detail: format!("no two precisions agreed for base={base} m={m}"),
    })
}
