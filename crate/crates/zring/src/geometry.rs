//! Level-set geometry over exact integers: separating lines, branch
//! identification, the imaginary-unit shift maps, subbranch membership and
//! the partition of a branch into unit-shifted subbranches.
//!
//! Anchors may be lattice points or one of two symbolic basepoints whose
//! membership predicates reduce to integer sign tests after the common
//! positive irrational scale is cleared. For z <= -2 operations reduce to
//! -z >= 2 through the mirror isomorphism and map back, which is lossless.
//! |z| = 2 is excluded from the subbranch machinery: those level sets are
//! line pairs and the branch tags degrade to the two lines.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ring::{oriented_area, ZContext, ZElem};
use crate::{Error, Result};

/// Position of a point relative to a line through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    On,
    Below,
}

/// The line lambda1 * x + lambda2 * y = 0 with the orientation convention
/// lambda2 >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub lambda1: i64,
    pub lambda2: i64,
}

impl Line {
    pub fn new(lambda1: i64, lambda2: i64) -> Result<Self> {
        if lambda2 < 0 || (lambda1 == 0 && lambda2 == 0) {
            return Err(Error::BadLine);
        }
        Ok(Line { lambda1, lambda2 })
    }
}

/// Sign of lambda1 * b1 + lambda2 * b2 mapped to a side.
pub fn line_side(l: &Line, b: &ZElem) -> Side {
    let v = BigInt::from(l.lambda1) * &b.re + BigInt::from(l.lambda2) * &b.im;
    if v.is_positive() {
        Side::Above
    } else if v.is_negative() {
        Side::Below
    } else {
        Side::On
    }
}

/// Connected component of a level set containing a given point.
///
/// `Whole` for |z| <= 1 (one component). For |z| >= 2 and M > 0 the two
/// hyperbola or line branches are `Upper`/`Lower` (side of the separating
/// diagonal, after mirror reduction to z >= 0). For |z| >= 3 and M < 0 the
/// branches sit in two opposite quadrants of the mirror-reduced picture.
/// For |z| = 2 and M a positive square the components are the two parallel
/// lines `LinePlus`/`LineMinus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchId {
    Whole,
    Upper,
    Lower,
    QuadTwo,
    QuadFour,
    LinePlus,
    LineMinus,
}

/// Branch of `b` on the level set of `m`. `b` must lie on that level set.
pub fn branch_of(ctx: &ZContext, m: &BigInt, b: &ZElem) -> Result<BranchId> {
    if m.is_zero() {
        return Err(Error::ZeroLevel);
    }
    let norm = ctx.norm(b);
    if norm != *m {
        return Err(Error::NormMismatch {
            norm,
            expected: m.clone(),
        });
    }
    let z = ctx.z();
    if z.abs() <= 1 {
        return Ok(BranchId::Whole);
    }
    // diagonal coordinate of the mirror-reduced picture
    let d = if z >= 0 { &b.re + &b.im } else { &b.re - &b.im };
    if z.abs() == 2 {
        return Ok(if d.is_positive() {
            BranchId::LinePlus
        } else {
            BranchId::LineMinus
        });
    }
    if m.is_positive() {
        Ok(if d.is_positive() {
            BranchId::Upper
        } else {
            BranchId::Lower
        })
    } else {
        Ok(if b.re.is_negative() {
            BranchId::QuadTwo
        } else {
            BranchId::QuadFour
        })
    }
}

/// i_z^n * b. One positive step is (a, b) -> (-b, a + zb), one inverse step
/// (a, b) -> (az + b, -a). Norm-preserving; for z >= 0 it also preserves the
/// branch of every level set.
pub fn apply_imul(ctx: &ZContext, b: &ZElem, n: i64) -> ZElem {
    let z = BigInt::from(ctx.z());
    let mut cur = b.clone();
    if n >= 0 {
        for _ in 0..n {
            cur = ZElem {
                re: -&cur.im,
                im: &cur.re + &z * &cur.im,
            };
        }
    } else {
        for _ in 0..(-n) {
            cur = ZElem {
                re: &cur.re * &z + &cur.im,
                im: -&cur.re,
            };
        }
    }
    cur
}

/// (-i_z)^n * b, the negative-direction shift; preserves branches for z <= 0.
pub fn apply_imul_neg(ctx: &ZContext, b: &ZElem, n: i64) -> ZElem {
    let shifted = apply_imul(ctx, b, n);
    if n & 1 == 0 {
        shifted
    } else {
        -&shifted
    }
}

/// The branch-preserving shift for the sign of z: i_z^n for z >= 0 and
/// (-i_z)^n for z < 0.
pub fn apply_shift(ctx: &ZContext, b: &ZElem, n: i64) -> ZElem {
    if ctx.z() >= 0 {
        apply_imul(ctx, b, n)
    } else {
        apply_imul_neg(ctx, b, n)
    }
}

/// Subbranch basepoint: a lattice element, or one of the two symbolic
/// canonical anchors whose sign predicates reduce to integer tests.
///
/// `CanonPos` stands for sqrt(M) on the real axis (level M > 0); `CanonNeg`
/// for the vertex-direction point c * (1 - i_z) with c = sqrt(|M| / (z - 2))
/// (level M < 0, |z| >= 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anchor {
    Lattice(ZElem),
    CanonPos { level: BigInt },
    CanonNeg { level: BigInt },
}

impl Anchor {
    /// The level set the anchor lives on.
    pub fn level(&self, ctx: &ZContext) -> BigInt {
        match self {
            Anchor::Lattice(a) => ctx.norm(a),
            Anchor::CanonPos { level } | Anchor::CanonNeg { level } => level.clone(),
        }
    }

    fn validate(&self, ctx: &ZContext) -> Result<()> {
        match self {
            Anchor::Lattice(a) => {
                if ctx.norm(a).is_zero() {
                    return Err(Error::DegenerateAnchor);
                }
            }
            Anchor::CanonPos { level } => {
                if !level.is_positive() {
                    return Err(Error::DegenerateAnchor);
                }
            }
            Anchor::CanonNeg { level } => {
                if !level.is_negative() {
                    return Err(Error::DegenerateAnchor);
                }
                if ctx.z().abs() < 3 {
                    return Err(Error::UnsupportedZ { z: ctx.z() });
                }
            }
        }
        Ok(())
    }

    /// Lattice direction vector of the anchor with the positive irrational
    /// scale cleared. Only meaningful after mirror reduction to z >= 0.
    fn proxy(&self) -> ZElem {
        match self {
            Anchor::Lattice(a) => a.clone(),
            Anchor::CanonPos { .. } => ZElem::new(1, 0),
            Anchor::CanonNeg { .. } => ZElem::new(1, -1),
        }
    }

    fn mirrored(&self, ctx: &ZContext) -> Anchor {
        match self {
            Anchor::Lattice(a) => Anchor::Lattice(ctx.phi(a)),
            other => other.clone(),
        }
    }

    fn branch(&self, ctx: &ZContext) -> Result<BranchId> {
        match self {
            Anchor::Lattice(a) => branch_of(ctx, &ctx.norm(a), a),
            Anchor::CanonPos { .. } => Ok(if ctx.z().abs() <= 1 {
                BranchId::Whole
            } else {
                BranchId::Upper
            }),
            Anchor::CanonNeg { .. } => Ok(BranchId::QuadFour),
        }
    }
}

/// Membership of `b` in the half-open subbranch based at `anchor`.
pub fn in_subbranch(ctx: &ZContext, anchor: &Anchor, b: &ZElem) -> Result<bool> {
    let z = ctx.z();
    if z.abs() == 2 {
        return Err(Error::UnsupportedZ { z });
    }
    anchor.validate(ctx)?;
    let level = anchor.level(ctx);
    let norm = ctx.norm(b);
    if norm != level {
        return Err(Error::NormMismatch {
            norm,
            expected: level,
        });
    }
    Ok(match anchor {
        Anchor::Lattice(a) => {
            let first = oriented_area(a, b);
            let shifted = apply_shift(ctx, a, 1);
            let second = oriented_area(&shifted, b);
            // signs swap with the orientation of the level, which flips with
            // each of sign(z) and sign(M)
            if (z >= 0) == level.is_positive() {
                !first.is_negative() && second.is_negative()
            } else {
                !first.is_positive() && second.is_positive()
            }
        }
        Anchor::CanonPos { .. } => {
            if z >= 0 {
                b.re.is_positive() && !b.im.is_negative()
            } else {
                b.re.is_positive() && !b.im.is_positive()
            }
        }
        Anchor::CanonNeg { .. } => {
            if z >= 3 {
                let diag = &b.re + &b.im;
                let steep = &b.im + BigInt::from(z - 1) * &b.re;
                !diag.is_positive() && steep.is_positive()
            } else {
                let diag = &b.re - &b.im;
                let steep = -&b.im + BigInt::from(-z - 1) * &b.re;
                !diag.is_positive() && steep.is_positive()
            }
        }
    })
}

/// Membership of `b` in the closed arc of a branch bounded by `a1` and `a2`
/// (endpoints included): the two oriented areas may not share a strict sign.
pub fn in_closed_branch(ctx: &ZContext, a1: &ZElem, a2: &ZElem, b: &ZElem) -> Result<bool> {
    if ctx.z().abs() < 2 {
        return Err(Error::UnsupportedZ { z: ctx.z() });
    }
    let m = ctx.norm(a1);
    if m.is_zero() {
        return Err(Error::ZeroLevel);
    }
    let id = branch_of(ctx, &m, a1)?;
    if branch_of(ctx, &m, a2)? != id || branch_of(ctx, &m, b)? != id {
        return Err(Error::BranchMismatch);
    }
    let p = oriented_area(a1, b) * oriented_area(a2, b);
    Ok(!p.is_positive())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Position of an element in the partition of its level set by unit-shifted
/// subbranches: `b` lies in the subbranch based at shift^j(sign * anchor),
/// equivalently shift^(-j)(sign * b) lies in the anchor subbranch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionIndex {
    pub shift: i64,
    pub sign: Sign,
}

/// Locate `b` in the subbranch partition, searching shifts |j| <= window.
///
/// Returns Ok(None) when the window is exhausted, which cannot happen once
/// the window exceeds the shift distance of `b` from the anchor; the
/// distance is bounded by the bit length of the initial oriented area for
/// |z| >= 3 and by the group order for |z| <= 1.
pub fn locate_in_partition(
    ctx: &ZContext,
    anchor: &Anchor,
    b: &ZElem,
    window: u64,
) -> Result<Option<PartitionIndex>> {
    let z = ctx.z();
    if z.abs() == 2 {
        return Err(Error::UnsupportedZ { z });
    }
    if z < 0 {
        let mctx = ctx.mirrored();
        return locate_in_partition(&mctx, &anchor.mirrored(ctx), &ctx.phi(b), window);
    }
    anchor.validate(ctx)?;
    let level = anchor.level(ctx);
    let norm = ctx.norm(b);
    if norm != level {
        return Err(Error::NormMismatch {
            norm,
            expected: level,
        });
    }

    if z <= 1 {
        let order = if z == 0 { 4 } else { 6 };
        for j in 0..order {
            if in_subbranch(ctx, anchor, &apply_imul(ctx, b, -j))? {
                return Ok(Some(PartitionIndex {
                    shift: j,
                    sign: Sign::Plus,
                }));
            }
        }
        return Ok(None);
    }

    // z >= 3: pick the sign putting b on the anchor branch, then walk the
    // oriented-area recurrence c_{j+1} = z c_j - c_{j-1} outward from j = 0.
    let sign = if branch_of(ctx, &level, b)? == anchor.branch(ctx)? {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let oriented = match sign {
        Sign::Plus => b.clone(),
        Sign::Minus => -b,
    };
    let u = anchor.proxy();
    let pos_level = level.is_positive();
    let member = |c_j: &BigInt, c_next: &BigInt| {
        if pos_level {
            !c_j.is_negative() && c_next.is_negative()
        } else {
            !c_j.is_positive() && c_next.is_positive()
        }
    };

    let c0 = oriented_area(&u, &oriented);
    let c1 = oriented_area(&apply_imul(ctx, &u, 1), &oriented);
    if member(&c0, &c1) {
        return Ok(Some(PartitionIndex { shift: 0, sign }));
    }
    let zb = BigInt::from(z);
    let (mut fwd_lo, mut fwd_hi) = (c0.clone(), c1.clone());
    let (mut bwd_lo, mut bwd_hi) = (c0, c1);
    for step in 1..=i64::try_from(window).unwrap_or(i64::MAX) {
        let prev = &zb * &bwd_lo - &bwd_hi;
        bwd_hi = std::mem::replace(&mut bwd_lo, prev);
        if member(&bwd_lo, &bwd_hi) {
            return Ok(Some(PartitionIndex { shift: -step, sign }));
        }
        let next = &zb * &fwd_hi - &fwd_lo;
        fwd_lo = std::mem::replace(&mut fwd_hi, next);
        if member(&fwd_lo, &fwd_hi) {
            return Ok(Some(PartitionIndex { shift: step, sign }));
        }
    }
    Ok(None)
}

/// A window always sufficient for `locate_in_partition` at |z| >= 3: the
/// area recurrence grows at ratio >= z - 1 >= 2 away from the containing
/// subbranch, so the distance is at most the bit length of the starting
/// areas plus slack.
pub fn partition_window(ctx: &ZContext, anchor: &Anchor, b: &ZElem) -> u64 {
    let u = match ctx.z() >= 0 {
        true => anchor.proxy(),
        false => anchor.mirrored(ctx).proxy(),
    };
    let oriented = if ctx.z() >= 0 { b.clone() } else { ctx.phi(b) };
    let c0 = oriented_area(&u, &oriented);
    let c1 = oriented_area(&apply_imul(&ZContext::new(ctx.z().abs()), &u, 1), &oriented);
    c0.bits() + c1.bits() + 16
}
