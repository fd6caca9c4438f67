//! The ring Z[i_z]: pairs of integers under componentwise addition and the
//! z-product (a1, a2) * (b1, b2) = (a1 b1 - a2 b2, a1 b2 + a2 b1 + z a2 b2).
//!
//! All coordinates are arbitrary-precision integers. The parameter z itself
//! is a machine integer; `ZContext::new` rejects magnitudes that could make
//! the derived constants overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::{Error, Result};

/// Largest |z| accepted; keeps 2 +/- z and z^2 - 4 inside i64.
pub const MAX_Z: i64 = (1 << 31) - 1;

/// The ring parameter z together with the constants derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZContext {
    z: i64,
    two_minus_z: i64,
    two_plus_z: i64,
    disc: i64,
    is_degenerate: bool,
}

impl ZContext {
    /// Panics if |z| exceeds [`MAX_Z`].
    pub fn new(z: i64) -> Self {
        assert!(z.abs() <= MAX_Z, "|z| too large: {z}");
        ZContext {
            z,
            two_minus_z: 2 - z,
            two_plus_z: 2 + z,
            disc: z * z - 4,
            is_degenerate: z.abs() == 2,
        }
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn two_minus_z(&self) -> i64 {
        self.two_minus_z
    }

    pub fn two_plus_z(&self) -> i64 {
        self.two_plus_z
    }

    /// The discriminant z^2 - 4 of x^2 - zx + 1.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// True exactly when |z| = 2, the only case with zero divisors.
    pub fn is_degenerate(&self) -> bool {
        self.is_degenerate
    }

    /// The context for -z; `phi` maps elements between the two rings.
    pub fn mirrored(&self) -> ZContext {
        ZContext::new(-self.z)
    }

    /// z-product of two elements.
    pub fn mul(&self, a: &ZElem, b: &ZElem) -> ZElem {
        let re = &a.re * &b.re - &a.im * &b.im;
        let im = &a.re * &b.im + &a.im * &b.re + BigInt::from(self.z) * &a.im * &b.im;
        ZElem { re, im }
    }

    /// a^k by repeated squaring.
    pub fn pow(&self, a: &ZElem, k: u32) -> ZElem {
        let mut acc = ZElem::one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Conjugate (a1 + z a2, -a2). Involutive; fixes exactly the real axis.
    pub fn conj(&self, a: &ZElem) -> ZElem {
        ZElem {
            re: &a.re + BigInt::from(self.z) * &a.im,
            im: -&a.im,
        }
    }

    /// The value a1^2 + z a1 a2 + a2^2 taken by the norm form at `a`.
    pub fn norm(&self, a: &ZElem) -> BigInt {
        &a.re * &a.re + BigInt::from(self.z) * &a.re * &a.im + &a.im * &a.im
    }

    /// Exact division in Z[i_z]: Some(q) with den * q = num when q exists.
    ///
    /// A denominator of norm zero is reported as an error, not as None; for
    /// |z| != 2 that only happens for den = 0, for |z| = 2 the whole line of
    /// zero divisors is rejected.
    pub fn divide_exact(&self, num: &ZElem, den: &ZElem) -> Result<Option<ZElem>> {
        let n = self.norm(den);
        if n.is_zero() {
            return Err(Error::ZeroDivisor { z: self.z });
        }
        let prod = self.mul(num, &self.conj(den));
        let (qr, rr) = prod.re.div_rem(&n);
        let (qi, ri) = prod.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Ok(Some(ZElem { re: qr, im: qi }))
        } else {
            Ok(None)
        }
    }

    /// The ring isomorphism onto Z[i_{-z}]: (a1, a2) -> (a1, -a2).
    ///
    /// The image is meant to be interpreted in `self.mirrored()`; norms agree
    /// and conjugation commutes with the map.
    pub fn phi(&self, a: &ZElem) -> ZElem {
        ZElem {
            re: a.re.clone(),
            im: -&a.im,
        }
    }

    /// The 2x2 matrix [[a, -b], [b, a + zb]] representing multiplication by
    /// `a`; the determinant is the norm and the map is multiplicative.
    pub fn embed(&self, a: &ZElem) -> EmbeddingMatrix {
        EmbeddingMatrix {
            m11: a.re.clone(),
            m12: -&a.im,
            m21: a.im.clone(),
            m22: &a.re + BigInt::from(self.z) * &a.im,
        }
    }

    /// Units are exactly the elements of norm +-1; returns the inverse
    /// (sign(norm) * conjugate) when `a` is one.
    pub fn unit_inverse(&self, a: &ZElem) -> Option<ZElem> {
        let n = self.norm(a);
        if n == BigInt::one() {
            Some(self.conj(a))
        } else if n == -BigInt::one() {
            Some(-&self.conj(a))
        } else {
            None
        }
    }

    pub fn is_unit(&self, a: &ZElem) -> bool {
        self.unit_inverse(a).is_some()
    }
}

/// An element of Z[i_z], stored as (real part, imaginary part).
///
/// Equality is componentwise; identification up to units is a solver-level
/// notion, not an equality on this type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZElem {
    pub re: BigInt,
    pub im: BigInt,
}

impl ZElem {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        ZElem {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        ZElem::new(0, 0)
    }

    pub fn one() -> Self {
        ZElem::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Mirror conjugate: swap the two coordinates. Equals i_z * conj(self)
    /// in every Z[i_z].
    pub fn mirror_conj(&self) -> ZElem {
        ZElem {
            re: self.im.clone(),
            im: self.re.clone(),
        }
    }

    /// Scalar multiple k * self.
    pub fn scale(&self, k: &BigInt) -> ZElem {
        ZElem {
            re: k * &self.re,
            im: k * &self.im,
        }
    }

    /// gcd of the coordinates; zero only for the zero element.
    pub fn content(&self) -> BigInt {
        self.re.gcd(&self.im)
    }

    /// True when the coordinates are coprime.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The unordered-pair representative: coordinates sorted ascending.
    pub fn sorted_pair(&self) -> ZElem {
        if self.re <= self.im {
            self.clone()
        } else {
            self.mirror_conj()
        }
    }
}

impl fmt::Display for ZElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

impl Add for &ZElem {
    type Output = ZElem;
    fn add(self, rhs: &ZElem) -> ZElem {
        ZElem {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ZElem {
    type Output = ZElem;
    fn sub(self, rhs: &ZElem) -> ZElem {
        ZElem {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Neg for &ZElem {
    type Output = ZElem;
    fn neg(self) -> ZElem {
        ZElem {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// Oriented area a1 b2 - a2 b1 of the parallelogram spanned by `a` and `b`.
/// Bilinear, antisymmetric, independent of z.
pub fn oriented_area(a: &ZElem, b: &ZElem) -> BigInt {
    &a.re * &b.im - &a.im * &b.re
}

/// Matrix image of an element under the multiplication embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMatrix {
    pub m11: BigInt,
    pub m12: BigInt,
    pub m21: BigInt,
    pub m22: BigInt,
}

impl EmbeddingMatrix {
    pub fn det(&self) -> BigInt {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    pub fn matmul(&self, rhs: &EmbeddingMatrix) -> EmbeddingMatrix {
        EmbeddingMatrix {
            m11: &self.m11 * &rhs.m11 + &self.m12 * &rhs.m21,
            m12: &self.m11 * &rhs.m12 + &self.m12 * &rhs.m22,
            m21: &self.m21 * &rhs.m11 + &self.m22 * &rhs.m21,
            m22: &self.m21 * &rhs.m12 + &self.m22 * &rhs.m22,
        }
    }

    pub fn identity() -> EmbeddingMatrix {
        EmbeddingMatrix {
            m11: BigInt::one(),
            m12: BigInt::zero(),
            m21: BigInt::zero(),
            m22: BigInt::one(),
        }
    }
}

/// Floor of the square root; panics on negative input.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative {n}");
    n.sqrt()
}

/// Some(sqrt) when n is a perfect square (0 included), else None.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(re: i64, im: i64) -> ZElem {
        ZElem::new(re, im)
    }

    #[test]
    fn context_constants() {
        let ctx = ZContext::new(6);
        assert_eq!(ctx.two_minus_z(), -4);
        assert_eq!(ctx.two_plus_z(), 8);
        assert_eq!(ctx.disc(), 32);
        assert!(!ctx.is_degenerate());
        assert!(ZContext::new(-2).is_degenerate());
        assert!(ZContext::new(2).is_degenerate());
        assert_eq!(ZContext::new(0).disc(), -4);
    }

    #[test]
    fn addition_is_componentwise() {
        assert_eq!(&e(1, 4) + &e(0, 0), e(1, 4));
        assert_eq!(&e(1, 4) - &e(1, 4), e(0, 0));
        assert_eq!(&e(4, -1) + &e(-2, 1), e(2, 0));
    }

    #[test]
    fn z_product_examples() {
        assert_eq!(ZContext::new(0).mul(&e(0, 1), &e(0, 1)), e(-1, 0));
        // -7 = (4 - i_6)(-2 + i_6)
        assert_eq!(ZContext::new(6).mul(&e(4, -1), &e(-2, 1)), e(-7, 0));
        // (-1 + i_3)^2 = i_3
        assert_eq!(ZContext::new(3).mul(&e(-1, 1), &e(-1, 1)), e(0, 1));
    }

    #[test]
    fn mul_is_commutative_and_distributive() {
        let ctx = ZContext::new(5);
        let (a, b, c) = (e(3, -2), e(-7, 4), e(1, 9));
        assert_eq!(ctx.mul(&a, &b), ctx.mul(&b, &a));
        assert_eq!(
            ctx.mul(&a, &(&b + &c)),
            &ctx.mul(&a, &b) + &ctx.mul(&a, &c)
        );
        assert_eq!(
            ctx.mul(&ctx.mul(&a, &b), &c),
            ctx.mul(&a, &ctx.mul(&b, &c))
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(ZContext::new(1).conj(&e(1, 4)), e(5, -4));
        assert_eq!(ZContext::new(3).conj(&e(3, 1)), e(6, -1));
        let ctx = ZContext::new(11);
        assert_eq!(ctx.conj(&e(9, 0)), e(9, 0));
        assert_eq!(ctx.conj(&ctx.conj(&e(4, -5))), e(4, -5));
    }

    #[test]
    fn conjugation_is_a_ring_homomorphism() {
        let ctx = ZContext::new(-7);
        let (a, b) = (e(5, -3), e(-2, 11));
        assert_eq!(
            ctx.conj(&ctx.mul(&a, &b)),
            ctx.mul(&ctx.conj(&a), &ctx.conj(&b))
        );
        assert_eq!(ctx.conj(&(&a + &b)), &ctx.conj(&a) + &ctx.conj(&b));
    }

    #[test]
    fn area_respects_conjugation_and_mirroring() {
        let ctx = ZContext::new(4);
        let (a, b) = (e(3, 5), e(-2, 7));
        let area = oriented_area(&a, &b);
        assert_eq!(oriented_area(&ctx.conj(&b), &ctx.conj(&a)), area);
        assert_eq!(oriented_area(&b.mirror_conj(), &a.mirror_conj()), area);
        // the norm as an area
        assert_eq!(
            oriented_area(&a, &ctx.conj(&a).mirror_conj()),
            ctx.norm(&a)
        );
        assert_eq!(
            oriented_area(&a.mirror_conj(), &ctx.conj(&a)),
            -ctx.norm(&a)
        );
    }

    #[test]
    fn mirror_conjugate() {
        assert_eq!(e(2, 3).mirror_conj(), e(3, 2));
        assert_eq!(e(7, 7).mirror_conj(), e(7, 7));
        // mirror = i_z * conj, checked at z = 6
        let ctx = ZContext::new(6);
        let a = e(2, 3);
        assert_eq!(ctx.conj(&a), e(20, -3));
        assert_eq!(ctx.mul(&e(0, 1), &ctx.conj(&a)), a.mirror_conj());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(ZContext::new(1).norm(&e(1, 4)), BigInt::from(21));
        assert_eq!(ZContext::new(4).norm(&e(-1, 2)), BigInt::from(-3));
        assert_eq!(ZContext::new(39).norm(&e(5, -1)), BigInt::from(-169));
    }

    #[test]
    fn norm_is_real_part_of_a_conj_a() {
        let ctx = ZContext::new(-5);
        let a = e(13, -8);
        let p = ctx.mul(&a, &ctx.conj(&a));
        assert_eq!(p, ZElem::new(ctx.norm(&a), BigInt::zero()));
    }

    #[test]
    fn oriented_area_examples() {
        assert_eq!(oriented_area(&e(1, 0), &e(0, 1)), BigInt::one());
        // equals the norm of (2,3) at z = 6
        assert_eq!(oriented_area(&e(2, 3), &e(-3, 20)), BigInt::from(49));
        assert_eq!(oriented_area(&e(5, -9), &e(5, -9)), BigInt::zero());
        assert_eq!(
            oriented_area(&e(3, 4), &e(5, 6)),
            -oriented_area(&e(5, 6), &e(3, 4))
        );
    }

    #[test]
    fn divide_exact_examples() {
        let ctx = ZContext::new(6);
        assert_eq!(
            ctx.divide_exact(&e(-7, 0), &e(4, -1)).unwrap(),
            Some(e(-2, 1))
        );
        // (1 + i_6)^2 = 8 i_6
        assert_eq!(
            ctx.divide_exact(&e(0, 8), &e(1, 1)).unwrap(),
            Some(e(1, 1))
        );
        assert_eq!(ctx.divide_exact(&e(1, 1), &e(2, 0)).unwrap(), None);
    }

    #[test]
    fn divide_by_zero_divisor_is_an_error() {
        let ctx = ZContext::new(2);
        // (-1, 1) has norm 0 at z = 2 without being zero
        assert_eq!(ctx.norm(&e(-1, 1)), BigInt::zero());
        assert!(matches!(
            ctx.divide_exact(&e(4, 4), &e(-1, 1)),
            Err(Error::ZeroDivisor { z: 2 })
        ));
        assert!(ZContext::new(7)
            .divide_exact(&e(1, 1), &ZElem::zero())
            .is_err());
    }

    #[test]
    fn divide_round_trips_products() {
        let ctx = ZContext::new(-4);
        let d = e(3, -5);
        let q = e(-11, 2);
        let n = ctx.mul(&d, &q);
        assert_eq!(ctx.divide_exact(&n, &d).unwrap(), Some(q));
    }

    #[test]
    fn phi_preserves_norm_and_fixes_integers() {
        let ctx = ZContext::new(4);
        let a = e(-1, 2);
        let img = ctx.phi(&a);
        assert_eq!(img, e(-1, -2));
        assert_eq!(ctx.norm(&a), ctx.mirrored().norm(&img));
        assert_eq!(ctx.phi(&e(9, 0)), e(9, 0));
        // phi(i_1) = -i_{-1}
        assert_eq!(ZContext::new(1).phi(&e(0, 1)), e(0, -1));
    }

    #[test]
    fn phi_commutes_with_conjugation() {
        let ctx = ZContext::new(7);
        let a = e(12, -5);
        assert_eq!(ctx.phi(&ctx.conj(&a)), ctx.mirrored().conj(&ctx.phi(&a)));
    }

    #[test]
    fn embedding_matrix() {
        let ctx = ZContext::new(1);
        assert_eq!(ctx.embed(&ZElem::one()), EmbeddingMatrix::identity());
        assert_eq!(ctx.embed(&e(1, 4)).det(), BigInt::from(21));
        let (a, b) = (e(3, -2), e(-5, 7));
        assert_eq!(
            ctx.embed(&ctx.mul(&a, &b)),
            ctx.embed(&a).matmul(&ctx.embed(&b))
        );
    }

    #[test]
    fn unit_detection() {
        let ctx3 = ZContext::new(3);
        let g = e(-1, 1);
        let inv = ctx3.unit_inverse(&g).expect("norm -1 unit");
        assert_eq!(inv, e(-2, 1));
        assert_eq!(ctx3.mul(&g, &inv), ZElem::one());

        assert!(ZContext::new(6).is_unit(&e(0, 1)));
        assert!(!ZContext::new(0).is_unit(&e(1, 1)));
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(isqrt(&BigInt::from(48)), BigInt::from(6));
        assert_eq!(exact_sqrt(&BigInt::from(49)), Some(BigInt::from(7)));
        assert_eq!(exact_sqrt(&BigInt::from(50)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
        assert_eq!(exact_sqrt(&BigInt::from(0)), Some(BigInt::zero()));
    }

    #[test]
    fn content_and_primitivity() {
        assert_eq!(e(6, -9).content(), BigInt::from(3));
        assert!(e(2, 3).is_primitive());
        assert!(!e(7, 0).is_primitive());
        assert_eq!(e(3, 2).sorted_pair(), e(2, 3));
    }
}
