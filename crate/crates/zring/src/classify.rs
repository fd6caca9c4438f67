//! Classification of integer primes relative to Z[i_z], the list of special
//! elements, the representability shortcut for the gap 2-|z| < M < 2+|z|,
//! and construction of witnesses that a ring is not a unique factorization
//! domain.
//!
//! An integer prime is regular when it stays irreducible; an irregular prime
//! splits as +-(alpha * conj(alpha)) and is of type I when p itself is a
//! norm, of type II when only -p is. A special prime is an irregular prime
//! whose two irreducible factors are associated, equivalently p | 2 - z or
//! p | 2 + z.

use num_bigint::BigInt;

use crate::ring::{ZContext, ZElem};
use crate::solver::solve_canonical;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeClassification {
    Regular,
    /// p is a norm; `factor` is a canonical element with norm p.
    IrregularTypeI { factor: ZElem },
    /// only -p is a norm; `factor_of_negation` has norm -p.
    IrregularTypeII { factor_of_negation: ZElem },
    /// p is a norm and its factor is associated to its own conjugate.
    Special { factor: ZElem },
}

impl PrimeClassification {
    pub fn tag(&self) -> &'static str {
        match self {
            PrimeClassification::Regular => "regular",
            PrimeClassification::IrregularTypeI { .. } => "irregular-type-i",
            PrimeClassification::IrregularTypeII { .. } => "irregular-type-ii",
            PrimeClassification::Special { .. } => "special",
        }
    }

    pub fn factor(&self) -> Option<&ZElem> {
        match self {
            PrimeClassification::Regular => None,
            PrimeClassification::IrregularTypeI { factor }
            | PrimeClassification::Special { factor } => Some(factor),
            PrimeClassification::IrregularTypeII { factor_of_negation } => {
                Some(factor_of_negation)
            }
        }
    }
}

/// Trial-division primality for machine integers; |n| is tested.
pub fn is_prime_i64(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Classify the signed prime p in Z[i_z] by deciding both levels p and -p.
pub fn classify_prime(ctx: &ZContext, p: i64) -> Result<PrimeClassification> {
    if !is_prime_i64(p) {
        return Err(Error::NotPrime { p });
    }
    let level = BigInt::from(p);
    let pos = solve_canonical(ctx, &level)?;
    if pos.solvable {
        let factor = pos.canonical[0].elem.clone();
        let special = divides(p, ctx.two_minus_z()) || divides(p, ctx.two_plus_z());
        return Ok(if special {
            PrimeClassification::Special { factor }
        } else {
            PrimeClassification::IrregularTypeI { factor }
        });
    }
    let neg = solve_canonical(ctx, &(-&level))?;
    if neg.solvable {
        return Ok(PrimeClassification::IrregularTypeII {
            factor_of_negation: neg.canonical[0].elem.clone(),
        });
    }
    Ok(PrimeClassification::Regular)
}

fn divides(p: i64, n: i64) -> bool {
    p != 0 && n % p == 0
}

/// The special elements of Z[i_z] as signed integers, ascending.
pub fn special_elements(ctx: &ZContext) -> Vec<i64> {
    let mut out = match ctx.z().abs() {
        3 => vec![-5, 5],
        4 => vec![-3, -2],
        _ => [ctx.two_minus_z(), ctx.two_plus_z()]
            .into_iter()
            .filter(|&c| is_prime_i64(c))
            .collect(),
    };
    out.sort();
    out.dedup();
    out
}

/// Representability inside the gap 2 - |z| < M < 2 + |z|: exactly the
/// perfect squares.
pub fn representable_in_gap(ctx: &ZContext, m: &BigInt) -> Result<bool> {
    let za = BigInt::from(ctx.z().abs());
    let two = BigInt::from(2);
    if *m <= &two - &za || *m >= &two + &za {
        return Err(Error::OutsideGap { m: m.clone() });
    }
    Ok(crate::ring::exact_sqrt(m).is_some())
}

/// Witness that Z[i_z] is not a unique factorization domain: a rational
/// prime p that is irreducible (by the gap bound) yet divides the square of
/// 1 +- i_z without dividing the element itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonUfdWitness {
    pub z: i64,
    /// the irreducible rational prime, as a ring element (p, 0)
    pub irreducible_nonprime: ZElem,
    pub p: i64,
    /// base^2 = square and irreducible_nonprime * cofactor = square
    pub base: ZElem,
    pub square: ZElem,
    pub cofactor: ZElem,
    /// the composite of 2 - z, 2 + z whose prime divisor was used
    pub composite_side: i64,
}

impl NonUfdWitness {
    /// Re-check all three defining identities plus irreducibility of p from
    /// the gap bound |p| < |z| - 2.
    pub fn verify(&self, ctx: &ZContext) -> bool {
        if ctx.z() != self.z || !is_prime_i64(self.p) {
            return false;
        }
        if self.p.abs() >= ctx.z().abs() - 2 {
            return false;
        }
        let p_elem = ZElem::new(self.p, 0);
        if p_elem != self.irreducible_nonprime {
            return false;
        }
        ctx.mul(&self.base, &self.base) == self.square
            && ctx.mul(&p_elem, &self.cofactor) == self.square
            && ctx.divide_exact(&self.base, &p_elem) == Ok(None)
            && self.composite_side % self.p == 0
            && (self.composite_side == ctx.two_minus_z()
                || self.composite_side == ctx.two_plus_z())
    }
}

/// None for |z| <= 5 (those rings factor uniquely) and for rings where both
/// 2 - z and 2 + z are prime; otherwise a verified witness built from the
/// smallest prime divisor of a composite side.
pub fn non_ufd_witness(ctx: &ZContext) -> Result<Option<NonUfdWitness>> {
    let z = ctx.z();
    let w = z.abs();
    if w <= 5 {
        return Ok(None);
    }
    // prefer the 2 + |z| side when composite, else 2 - |z|
    let sides = [(2 + w, 1i64), (2 - w, -1i64)];
    let Some(&(side, im_sign)) = sides.iter().find(|&&(v, _)| !is_prime_i64(v)) else {
        return Ok(None);
    };
    let p = smallest_prime_divisor(side.unsigned_abs());
    // construct at |z|, then mirror the three elements back when z < 0
    let wctx = ZContext::new(w);
    let base = ZElem::new(1, im_sign);
    let square = wctx.mul(&base, &base);
    let cofactor = ZElem::new(0, square.im.clone() / p);
    let (base, square, cofactor) = if z < 0 {
        (wctx.phi(&base), wctx.phi(&square), wctx.phi(&cofactor))
    } else {
        (base, square, cofactor)
    };
    let witness = NonUfdWitness {
        z,
        irreducible_nonprime: ZElem::new(p, 0),
        p,
        base,
        square,
        cofactor,
        composite_side: side,
    };
    assert!(witness.verify(ctx), "constructed witness must verify");
    Ok(Some(witness))
}

fn smallest_prime_divisor(n: u64) -> i64 {
    assert!(n >= 2);
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return d as i64;
        }
        d += 2;
    }
    n as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(re: i64, im: i64) -> ZElem {
        ZElem::new(re, im)
    }

    #[test]
    fn primality() {
        assert!(is_prime_i64(2));
        assert!(is_prime_i64(-7));
        assert!(is_prime_i64(97));
        assert!(!is_prime_i64(1));
        assert!(!is_prime_i64(0));
        assert!(!is_prime_i64(-9));
        assert!(!is_prime_i64(91));
    }

    #[test]
    fn z6_spot_classifications() {
        let ctx = ZContext::new(6);
        match classify_prime(&ctx, -7).unwrap() {
            PrimeClassification::IrregularTypeI { factor } => {
                assert_eq!(ctx.norm(&factor), BigInt::from(-7));
            }
            other => panic!("-7 should be type I, got {other:?}"),
        }
        assert_eq!(
            classify_prime(&ctx, 7).unwrap().tag(),
            "irregular-type-ii"
        );
        assert_eq!(classify_prime(&ctx, 3).unwrap().tag(), "regular");
        assert_eq!(classify_prime(&ctx, -3).unwrap().tag(), "regular");
        assert!(classify_prime(&ctx, 6).is_err());
    }

    #[test]
    fn gaussian_two_is_special() {
        let ctx = ZContext::new(0);
        match classify_prime(&ctx, 2).unwrap() {
            PrimeClassification::Special { factor } => assert_eq!(factor, e(1, 1)),
            other => panic!("2 should be special in the Gaussian case, got {other:?}"),
        }
        // -2 is reducible (it is -(1+i)(1-i)) but only 2 is a norm, so it is
        // of type II rather than special
        assert_eq!(
            classify_prime(&ctx, -2).unwrap().tag(),
            "irregular-type-ii"
        );
    }

    #[test]
    fn special_element_tables() {
        assert_eq!(special_elements(&ZContext::new(0)), vec![2]);
        assert_eq!(special_elements(&ZContext::new(1)), vec![3]);
        assert_eq!(special_elements(&ZContext::new(2)), Vec::<i64>::new());
        assert_eq!(special_elements(&ZContext::new(3)), vec![-5, 5]);
        assert_eq!(special_elements(&ZContext::new(4)), vec![-3, -2]);
        assert_eq!(special_elements(&ZContext::new(5)), vec![-3, 7]);
        assert_eq!(special_elements(&ZContext::new(6)), Vec::<i64>::new());
        assert_eq!(special_elements(&ZContext::new(-5)), vec![-3, 7]);
        assert_eq!(special_elements(&ZContext::new(-3)), vec![-5, 5]);
    }

    #[test]
    fn gap_representability() {
        let ctx = ZContext::new(6);
        assert!(representable_in_gap(&ctx, &BigInt::from(4)).unwrap());
        assert!(!representable_in_gap(&ctx, &BigInt::from(5)).unwrap());
        assert!(!representable_in_gap(&ctx, &BigInt::from(-3)).unwrap());
        assert!(matches!(
            representable_in_gap(&ctx, &BigInt::from(9)),
            Err(Error::OutsideGap { .. })
        ));
    }

    #[test]
    fn ufd_witness_at_z6() {
        let ctx = ZContext::new(6);
        let w = non_ufd_witness(&ctx).unwrap().expect("z = 6 is not a UFD");
        assert_eq!(w.p, 2);
        assert_eq!(w.base, e(1, 1));
        assert_eq!(w.square, e(0, 8));
        assert_eq!(w.cofactor, e(0, 4));
        assert!(w.verify(&ctx));
    }

    #[test]
    fn ufd_witness_at_z7_uses_p3() {
        let ctx = ZContext::new(7);
        let w = non_ufd_witness(&ctx)
            .unwrap()
            .expect("2 + 7 = 9 is composite");
        assert_eq!(w.p, 3);
        assert_eq!(w.base, e(1, 1));
        assert_eq!(w.square, e(0, 9));
        assert_eq!(w.cofactor, e(0, 3));
        assert!(w.verify(&ctx));
    }

    #[test]
    fn no_witness_for_small_or_twin_prime_rings() {
        for z in [-5i64, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5] {
            assert!(non_ufd_witness(&ZContext::new(z)).unwrap().is_none());
        }
        // 2 - 39 = -37 and 2 + 39 = 41 are both prime: construction declines
        assert!(non_ufd_witness(&ZContext::new(39)).unwrap().is_none());
    }

    #[test]
    fn mirrored_witness() {
        let ctx = ZContext::new(-6);
        let w = non_ufd_witness(&ctx).unwrap().expect("z = -6 is not a UFD");
        assert!(w.verify(&ctx));
        assert_eq!(ctx.mul(&w.base, &w.base), w.square);
    }

    #[test]
    fn tampered_witness_fails() {
        let ctx = ZContext::new(6);
        let mut w = non_ufd_witness(&ctx).unwrap().unwrap();
        w.cofactor = e(0, 5);
        assert!(!w.verify(&ctx));
    }
}
