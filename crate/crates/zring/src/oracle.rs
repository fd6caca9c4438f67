//! Brute-force reference answers, used by tests to cross-check every other
//! module. Deliberately dumb: plain box scans that evaluate the form
//! x^2 + zxy + y^2 directly. Nothing here calls the solver, geometry,
//! classification or counting code.

use num_bigint::BigInt;

use crate::ring::{isqrt, ZContext, ZElem};

/// Search box |x|, |y| <= bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleWindow {
    pub bound: u64,
}

impl OracleWindow {
    pub fn new(bound: u64) -> Self {
        assert!(bound >= 1);
        OracleWindow { bound }
    }
}

fn form_value(z: i64, x: i64, y: i64) -> i128 {
    let (x, y, z) = (x as i128, y as i128, z as i128);
    x.checked_mul(x)
        .and_then(|xx| z.checked_mul(x).and_then(|zx| zx.checked_mul(y)).map(|m| (xx, m)))
        .and_then(|(xx, zxy)| {
            y.checked_mul(y)
                .and_then(|yy| xx.checked_add(zxy).and_then(|s| s.checked_add(yy)))
        })
        .expect("oracle window too large for exact i128 evaluation")
}

/// Every (x, y) in the box with x^2 + zxy + y^2 = M, sorted lexicographically.
pub fn brute_solutions(ctx: &ZContext, m: &BigInt, w: OracleWindow) -> Vec<ZElem> {
    let b = i64::try_from(w.bound).expect("oracle bound exceeds i64");
    let mut out = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            if BigInt::from(form_value(ctx.z(), x, y)) == *m {
                out.push(ZElem::new(x, y));
            }
        }
    }
    out.sort();
    out
}

/// Number of unordered pairs {x, y} with x, y >= 0, gcd(x, y) = 1 and
/// x^2 + zxy + y^2 = M, scanning x <= y <= floor(sqrt(M)).
///
/// The window suffices for z >= 0 and M > 0: nonnegative coordinates of a
/// solution are each at most sqrt(M).
pub fn brute_count_positive_primitive(ctx: &ZContext, m: &BigInt) -> u64 {
    assert!(ctx.z() >= 0, "positive-solution oracle expects z >= 0");
    let b: i64 = isqrt(m).try_into().expect("oracle bound exceeds i64");
    let mut count = 0;
    for x in 0..=b {
        for y in x..=b {
            if BigInt::from(form_value(ctx.z(), x, y)) == *m && gcd(x, y) == 1 {
                count += 1;
            }
        }
    }
    count
}

/// Unordered first-quadrant solutions {x, y}, 0 <= x <= y, together with
/// their primitivity; used by tests that count solutions per quadrant.
pub fn brute_first_quadrant_pairs(ctx: &ZContext, m: &BigInt) -> Vec<(ZElem, bool)> {
    assert!(ctx.z() >= 0);
    let b: i64 = isqrt(m.max(&BigInt::from(0))).try_into().expect("bound");
    let mut out = Vec::new();
    for x in 0..=b {
        for y in x..=b {
            if BigInt::from(form_value(ctx.z(), x, y)) == *m {
                out.push((ZElem::new(x, y), gcd(x, y) == 1));
            }
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
