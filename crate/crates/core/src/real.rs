//! High-precision binary floating point used for all entropy arithmetic.
//!
//! Precision is read once from `PILAB_PRECISION_BITS` (default 128, never
//! below 80 bits).

use std::sync::OnceLock;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

pub type Real = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const MIN_PRECISION_BITS: usize = 80;

static PRECISION: OnceLock<usize> = OnceLock::new();

pub fn precision_bits() -> usize {
    *PRECISION.get_or_init(|| {
        std::env::var("PILAB_PRECISION_BITS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|p| p.max(MIN_PRECISION_BITS))
            .unwrap_or(DEFAULT_PRECISION_BITS)
    })
}

fn with_prec(x: Real) -> Real {
    x.with_precision(precision_bits()).value()
}

pub fn from_f64(x: f64) -> Real {
    with_prec(Real::try_from(x).expect("finite f64"))
}

pub fn from_u64(x: u64) -> Real {
    with_prec(Real::from(x))
}

pub fn from_bigint(x: &BigInt) -> Real {
    let (sign, bytes) = x.to_bytes_le();
    let mag = IBig::from(dashu_int::UBig::from_le_bytes(&bytes));
    let v = if sign == Sign::Minus { -mag } else { mag };
    with_prec(Real::from(v))
}

pub fn from_ratio(q: &BigRational) -> Real {
    from_bigint(q.numer()) / from_bigint(q.denom())
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn one() -> Real {
    from_u64(1)
}

pub fn zero() -> Real {
    with_prec(Real::ZERO)
}

/// `x·ln x` with the convention `0·ln 0 = 0`.
pub fn xlnx(x: &Real) -> Real {
    if *x == Real::ZERO {
        zero()
    } else {
        x.clone() * x.ln()
    }
}

/// Exact binary expansion of a finite float as a rational.
pub fn to_ratio(x: &Real) -> BigRational {
    let repr = x.repr();
    let sig = repr.significand();
    let exp = repr.exponent();
    let (sign, mag) = sig.clone().into_parts();
    let mut num = BigInt::from_bytes_le(Sign::Plus, &mag.to_le_bytes());
    if sign == dashu_int::Sign::Negative {
        num = -num;
    }
    if exp >= 0 {
        BigRational::from_integer(num << exp as usize)
    } else {
        BigRational::new(num, BigInt::from(1) << (-exp) as usize)
    }
}
