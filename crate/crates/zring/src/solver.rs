//! Deciding x^2 + zxy + y^2 = M and enumerating one representative per
//! association class of solutions.
//!
//! The canonical representatives are the lattice points of the subbranch
//! based at the canonical anchor: sqrt(M) on the real axis for M > 0 and the
//! vertex-direction point for M < 0, both after mirror reduction to z >= 0.
//! For M > 0 this makes "canonical" coincide with the positive solutions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::geometry::{
    apply_shift, branch_of, in_subbranch, locate_in_partition, partition_window, Anchor,
    PartitionIndex, Sign,
};
use crate::ring::{exact_sqrt, isqrt, oriented_area, ZContext, ZElem};
use crate::units::cyclic_order;
use crate::{Error, Result};

/// One canonical representative together with its primitivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSolution {
    pub elem: ZElem,
    pub primitive: bool,
}

/// The solution family for |z| = 2 and M a positive square: all lattice
/// points on the two lines |x + sign(z) y| = root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricLine {
    pub root: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionReport {
    pub z: i64,
    pub m: BigInt,
    pub canonical: Vec<CanonicalSolution>,
    pub parametric_line: Option<ParametricLine>,
    pub solvable: bool,
}

/// Solutions of the zero level set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroLevelSolutions {
    OriginOnly,
    /// |z| = 2: the full line of zero divisors spanned by `direction`.
    ZeroDivisorLine { direction: ZElem },
}

/// Lemma-level answer for M = 0, which `solve_canonical` rejects.
pub fn zero_level_solutions(ctx: &ZContext) -> ZeroLevelSolutions {
    match ctx.z() {
        2 => ZeroLevelSolutions::ZeroDivisorLine {
            direction: ZElem::new(-1, 1),
        },
        -2 => ZeroLevelSolutions::ZeroDivisorLine {
            direction: ZElem::new(1, 1),
        },
        _ => ZeroLevelSolutions::OriginOnly,
    }
}

fn canonical_entry(elem: ZElem) -> CanonicalSolution {
    let primitive = elem.is_primitive();
    CanonicalSolution { elem, primitive }
}

/// Decide solvability and list the canonical system of representatives.
pub fn solve_canonical(ctx: &ZContext, m: &BigInt) -> Result<SolutionReport> {
    if m.is_zero() {
        return Err(Error::ZeroLevel);
    }
    if ctx.z() < 0 {
        let mirrored = solve_canonical(&ctx.mirrored(), m)?;
        let canonical = mirrored
            .canonical
            .into_iter()
            .map(|c| canonical_entry(ctx.phi(&c.elem)))
            .collect::<Vec<_>>();
        let mut canonical = canonical;
        canonical.sort_by(|a, b| a.elem.cmp(&b.elem));
        return Ok(SolutionReport {
            z: ctx.z(),
            m: m.clone(),
            canonical,
            parametric_line: mirrored.parametric_line,
            solvable: mirrored.solvable,
        });
    }

    let z = ctx.z();
    let mut canonical: Vec<ZElem> = Vec::new();
    let mut parametric_line = None;

    if z == 2 {
        if let Some(root) = exact_sqrt(m) {
            parametric_line = Some(ParametricLine { root });
        }
    } else if m.is_positive() {
        // positive levels: x in [1, floor(sqrt(M))], y >= 0 from the
        // quadratic with discriminant (z^2 - 4) x^2 + 4M
        let disc_z = BigInt::from(ctx.disc());
        let four_m = m * 4;
        let x_max = isqrt(m);
        let mut x = BigInt::one();
        while x <= x_max {
            let d = &disc_z * &x * &x + &four_m;
            if let Some(s) = exact_sqrt(&d) {
                let num = &s - BigInt::from(z) * &x;
                if !num.is_negative() && (&num % 2u8).is_zero() {
                    canonical.push(ZElem {
                        re: x.clone(),
                        im: num / 2,
                    });
                }
            }
            x += 1;
        }
    } else if z >= 3 {
        // negative levels: y ranges over the integers with
        // |M| <= (z - 2) y^2 <= (z - 1)^2 |M|, x from the quadratic in x
        let abs_m = -m;
        let zm2 = BigInt::from(z - 2);
        let upper = BigInt::from(z - 1) * BigInt::from(z - 1) * &abs_m;
        let mut t_lo = isqrt(&(&abs_m / &zm2));
        while &zm2 * &t_lo * &t_lo < abs_m {
            t_lo += 1;
        }
        while t_lo.is_positive() && &zm2 * (&t_lo - 1u8) * (&t_lo - 1u8) >= abs_m {
            t_lo -= 1;
        }
        let mut t_hi = isqrt(&(&upper / &zm2));
        while &zm2 * (&t_hi + 1u8) * (&t_hi + 1u8) <= upper {
            t_hi += 1;
        }
        while &zm2 * &t_hi * &t_hi > upper {
            t_hi -= 1;
        }
        let disc_z = BigInt::from(ctx.disc());
        let four_m = m * 4;
        let anchor = Anchor::CanonNeg { level: m.clone() };
        let mut t = t_lo;
        while t <= t_hi {
            let y = -&t;
            let d = &disc_z * &y * &y + &four_m;
            if let Some(s) = exact_sqrt(&d) {
                let base = BigInt::from(-z) * &y;
                for root in [&base + &s, &base - &s] {
                    if (&root % 2u8).is_zero() {
                        let cand = ZElem {
                            re: root / 2,
                            im: y.clone(),
                        };
                        if in_subbranch(ctx, &anchor, &cand)? {
                            canonical.push(cand);
                        }
                    }
                }
            }
            t += 1;
        }
    }
    // remaining cases (z <= 1 with M < 0, z = 2 nonsquare) are unsolvable

    canonical.sort();
    canonical.dedup();
    let solvable = !canonical.is_empty() || parametric_line.is_some();
    Ok(SolutionReport {
        z,
        m: m.clone(),
        canonical: canonical.into_iter().map(canonical_entry).collect(),
        parametric_line,
        solvable,
    })
}

/// A box bound that contains every canonical representative (and, for
/// bounded level sets, every solution); tests widen it before scanning.
pub fn enumeration_bound(ctx: &ZContext, m: &BigInt) -> BigInt {
    let z = ctx.z().abs();
    if m.is_positive() {
        isqrt(&(m * 2u8)) + 1
    } else if z >= 3 {
        let abs_m = -m;
        let t_hi = isqrt(&(BigInt::from(z - 1) * BigInt::from(z - 1) * &abs_m
            / BigInt::from(z - 2)))
            + 1;
        BigInt::from(z) * t_hi + 1
    } else {
        BigInt::one()
    }
}

/// Normal form of `g` under unit multiplication: the canonical
/// representative of its association class together with the unit indices
/// (k, n) such that (-1)^k * gen^n * g is that representative.
pub fn normalize_to_canonical(ctx: &ZContext, g: &ZElem) -> Result<(ZElem, u8, i64)> {
    let z = ctx.z();
    if z.abs() == 2 {
        return Err(Error::UnsupportedZ { z });
    }
    let m = ctx.norm(g);
    if m.is_zero() {
        return Err(Error::ZeroLevel);
    }
    if z < 0 {
        let (canonical, k, n) = normalize_to_canonical(&ctx.mirrored(), &ctx.phi(g))?;
        return Ok((ctx.mirrored().phi(&canonical), k, n));
    }
    let anchor = if m.is_positive() {
        Anchor::CanonPos { level: m.clone() }
    } else {
        Anchor::CanonNeg { level: m.clone() }
    };
    let window = partition_window(ctx, &anchor, g);
    let PartitionIndex { shift, sign } = locate_in_partition(ctx, &anchor, g, window)?
        .expect("partition window is always sufficient");
    let oriented = match sign {
        Sign::Plus => g.clone(),
        Sign::Minus => -g,
    };
    let canonical = apply_shift(ctx, &oriented, -shift);
    let k = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    let n = match cyclic_order(ctx) {
        Some(order) => (-shift).rem_euclid(order),
        // at |z| = 3 the generator squares to i_z, so the shift doubles
        None if z == 3 => -2 * shift,
        None => -shift,
    };
    Ok((canonical, k, n))
}

/// Window scanned by the solver, recorded in a no-solution certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// M < 0 with |z| <= 2: the level set is empty over the reals.
    EmptyLevelSet,
    /// |z| = 2 and M > 0 not a perfect square: the level lines miss the grid.
    NonsquareLine { floor_root: BigInt },
    /// A scanned coordinate window covering the canonical subbranch, plus
    /// the arc bound |<a1, a2>| >= |M| cleared of the irrational scale:
    /// the stored proxy area and proxy norm satisfy |area| >= |norm|.
    ScannedArc {
        scan_imaginary: bool,
        lo: BigInt,
        hi: BigInt,
        proxy_area: BigInt,
        proxy_norm: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoSolutionCertificate {
    pub z: i64,
    pub m: BigInt,
    pub kind: CertificateKind,
}

impl NoSolutionCertificate {
    /// Re-check the certificate from its recorded data: the window data must
    /// be internally consistent and replaying the window must find nothing.
    pub fn verify(&self, ctx: &ZContext) -> bool {
        if ctx.z() != self.z || self.m.is_zero() {
            return false;
        }
        let z = self.z.abs();
        match &self.kind {
            CertificateKind::EmptyLevelSet => z <= 2 && self.m.is_negative(),
            CertificateKind::NonsquareLine { floor_root } => {
                z == 2
                    && self.m.is_positive()
                    && *floor_root == isqrt(&self.m)
                    && floor_root * floor_root != self.m
            }
            CertificateKind::ScannedArc {
                scan_imaginary,
                lo,
                hi,
                proxy_area,
                proxy_norm,
            } => {
                if proxy_area.abs() < proxy_norm.abs() || proxy_norm.is_zero() {
                    return false;
                }
                let rctx = ZContext::new(z);
                let m = &self.m;
                let anchor = if m.is_positive() {
                    Anchor::CanonPos { level: m.clone() }
                } else {
                    Anchor::CanonNeg { level: m.clone() }
                };
                // the arc endpoints are the anchor and its unit shift, whose
                // cleared oriented area must be what the certificate claims
                let u = match anchor {
                    Anchor::CanonPos { .. } => ZElem::new(1, 0),
                    Anchor::CanonNeg { .. } => ZElem::new(1, -1),
                    Anchor::Lattice(_) => unreachable!(),
                };
                if oriented_area(&u, &apply_shift(&rctx, &u, 1)) != *proxy_area
                    || rctx.norm(&u) != *proxy_norm
                {
                    return false;
                }
                // replay: no window coordinate yields a subbranch member
                let disc_z = BigInt::from(rctx.disc());
                let four_m = m * 4;
                let mut t = lo.clone();
                while t <= *hi {
                    let d = &disc_z * &t * &t + &four_m;
                    if let Some(s) = exact_sqrt(&d) {
                        let base = BigInt::from(-z) * &t;
                        for root in [&base + &s, &base - &s] {
                            if (&root % 2u8).is_zero() {
                                let cand = if *scan_imaginary {
                                    ZElem {
                                        re: root / 2,
                                        im: t.clone(),
                                    }
                                } else {
                                    ZElem {
                                        re: t.clone(),
                                        im: root / 2,
                                    }
                                };
                                if in_subbranch(&rctx, &anchor, &cand).unwrap_or(false) {
                                    return false;
                                }
                            }
                        }
                    }
                    t += 1;
                }
                true
            }
        }
    }
}

/// A re-checkable record of why x^2 + zxy + y^2 = M has no solution;
/// None when it does have one.
pub fn no_solution_certificate(
    ctx: &ZContext,
    m: &BigInt,
) -> Result<Option<NoSolutionCertificate>> {
    if m.is_zero() {
        return Err(Error::ZeroLevel);
    }
    let report = solve_canonical(ctx, m)?;
    if report.solvable {
        return Ok(None);
    }
    let z = ctx.z();
    let kind = if m.is_negative() && z.abs() <= 2 {
        CertificateKind::EmptyLevelSet
    } else if z.abs() == 2 {
        CertificateKind::NonsquareLine {
            floor_root: isqrt(m),
        }
    } else if m.is_positive() {
        CertificateKind::ScannedArc {
            scan_imaginary: false,
            lo: BigInt::one(),
            hi: isqrt(m),
            proxy_area: BigInt::one(),
            proxy_norm: BigInt::one(),
        }
    } else {
        let w = z.abs();
        let abs_m = -m;
        let zm2 = BigInt::from(w - 2);
        let upper = BigInt::from(w - 1) * BigInt::from(w - 1) * &abs_m;
        let mut t_hi = isqrt(&(&upper / &zm2));
        while &zm2 * (&t_hi + 1u8) * (&t_hi + 1u8) <= upper {
            t_hi += 1;
        }
        while &zm2 * &t_hi * &t_hi > upper {
            t_hi -= 1;
        }
        CertificateKind::ScannedArc {
            scan_imaginary: true,
            lo: -t_hi,
            hi: BigInt::zero(),
            proxy_area: BigInt::from(2 - w),
            proxy_norm: BigInt::from(2 - w),
        }
    };
    Ok(Some(NoSolutionCertificate {
        z,
        m: m.clone(),
        kind,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrantSolutions {
    pub elems: Vec<ZElem>,
    pub truncated: bool,
}

fn in_quadrant(e: &ZElem, q: u8) -> bool {
    match q {
        1 => !e.re.is_negative() && !e.im.is_negative(),
        2 => !e.re.is_positive() && !e.im.is_negative(),
        3 => !e.re.is_positive() && !e.im.is_positive(),
        4 => !e.re.is_negative() && !e.im.is_positive(),
        _ => false,
    }
}

/// Solutions carrying the sign pattern of the chosen (closed) quadrant,
/// generated by unit-shifting the canonical representatives. Quadrants that
/// host a whole hyperbola branch are infinite; output stops at `limit` with
/// the truncation flag set.
pub fn solutions_in_quadrant(
    ctx: &ZContext,
    m: &BigInt,
    quadrant: u8,
    limit: usize,
) -> Result<QuadrantSolutions> {
    if !(1..=4).contains(&quadrant) {
        return Err(Error::BadQuadrant(quadrant));
    }
    let z = ctx.z();
    if z.abs() == 2 {
        return Err(Error::UnsupportedZ { z });
    }
    if z < 0 {
        // mirror swaps quadrants 1<->4 and 2<->3
        let mq = [4u8, 3, 2, 1][(quadrant - 1) as usize];
        let inner = solutions_in_quadrant(&ctx.mirrored(), m, mq, limit)?;
        return Ok(QuadrantSolutions {
            elems: inner.elems.iter().map(|e| ctx.phi(e)).collect(),
            truncated: inner.truncated,
        });
    }
    let report = solve_canonical(ctx, m)?;
    let reps: Vec<ZElem> = report.canonical.into_iter().map(|c| c.elem).collect();
    if reps.is_empty() {
        return Ok(QuadrantSolutions {
            elems: Vec::new(),
            truncated: false,
        });
    }

    let mut out: Vec<ZElem> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |e: ZElem, out: &mut Vec<ZElem>| -> bool {
        if in_quadrant(&e, quadrant) && seen.insert(e.clone()) {
            out.push(e);
        }
        out.len() >= limit
    };

    if z <= 1 {
        let order = cyclic_order(ctx).unwrap();
        let mut truncated = false;
        'outer: for n in 0..order {
            for rep in &reps {
                for sgn in [1i64, -1] {
                    let shifted = apply_shift(ctx, rep, n);
                    let e = if sgn == 1 { shifted } else { -&shifted };
                    if push(e, &mut out) {
                        // check whether anything else would still qualify
                        truncated = remaining_exists(ctx, &reps, order, quadrant, &seen);
                        break 'outer;
                    }
                }
            }
        }
        return Ok(QuadrantSolutions {
            elems: out,
            truncated,
        });
    }

    // z >= 3: walk rings n = 0, +-1, +-2, ... of (-1)^k I^n(rep). A shifted
    // point that lands strictly inside quadrant 2 keeps moving deeper into
    // it under further positive shifts (and symmetrically for the other
    // sign/direction combinations), so a combination is dropped once it
    // escapes into an absorbing quadrant different from the target.
    #[derive(Clone)]
    struct Walker {
        cur: ZElem,
        step: i64,  // +1 or -1
        sign: i64,  // global sign applied to the orbit
        active: bool,
    }
    let m_positive = m.is_positive();
    let absorbing = move |w: &Walker| -> u8 {
        // quadrant eventually trapping this walker (open part); negative
        // levels confine each branch to its quadrant from the start
        if m_positive {
            match (w.step, w.sign) {
                (1, 1) | (-1, -1) => 2,
                _ => 4,
            }
        } else if w.sign == 1 {
            4
        } else {
            2
        }
    };
    let escaped = |e: &ZElem, q: u8| -> bool {
        match q {
            2 => e.re.is_negative() && e.im.is_positive(),
            4 => e.re.is_positive() && e.im.is_negative(),
            _ => unreachable!(),
        }
    };
    let mut walkers: Vec<Walker> = Vec::new();
    for rep in &reps {
        for sign in [1i64, -1] {
            let e = if sign == 1 { rep.clone() } else { -rep };
            if push(e, &mut out) {
                return Ok(QuadrantSolutions {
                    elems: out,
                    truncated: true,
                });
            }
            for step in [1i64, -1] {
                walkers.push(Walker {
                    cur: if sign == 1 { rep.clone() } else { -rep },
                    step,
                    sign,
                    active: true,
                });
            }
        }
    }
    while walkers.iter().any(|w| w.active) {
        for i in 0..walkers.len() {
            if !walkers[i].active {
                continue;
            }
            let step = walkers[i].step;
            let next = apply_shift(ctx, &walkers[i].cur, step);
            walkers[i].cur = next.clone();
            let trap = absorbing(&walkers[i]);
            if escaped(&next, trap) && trap != quadrant {
                walkers[i].active = false;
            }
            if push(next, &mut out) {
                return Ok(QuadrantSolutions {
                    elems: out,
                    truncated: true,
                });
            }
        }
    }
    Ok(QuadrantSolutions {
        elems: out,
        truncated: false,
    })
}

fn remaining_exists(
    ctx: &ZContext,
    reps: &[ZElem],
    order: i64,
    quadrant: u8,
    seen: &std::collections::HashSet<ZElem>,
) -> bool {
    for n in 0..order {
        for rep in reps {
            for sgn in [1i64, -1] {
                let shifted = apply_shift(ctx, rep, n);
                let e = if sgn == 1 { shifted } else { -&shifted };
                if in_quadrant(&e, quadrant) && !seen.contains(&e) {
                    return true;
                }
            }
        }
    }
    false
}

/// Convenience wrapper asserting an element really solves the equation.
pub fn check_solution(ctx: &ZContext, m: &BigInt, e: &ZElem) -> bool {
    ctx.norm(e) == *m
}

/// Sanity helper used by the CLI and tests: branch of the first canonical
/// representative, when one exists.
pub fn canonical_branch(ctx: &ZContext, report: &SolutionReport) -> Option<crate::geometry::BranchId> {
    report
        .canonical
        .first()
        .and_then(|c| branch_of(ctx, &report.m, &c.elem).ok())
}
