//! Unit groups of Z[i_z]: cyclic of order 4 (z = 0) or 6 (z = +-1), and
//! {+-1} x Z otherwise, with the infinite-order generator i_z for |z| = 2 or
//! |z| >= 4 and -1 + sign(z) i_z for |z| = 3. Norm -1 units exist exactly
//! for z = +-3, where odd generator exponents produce them.

use crate::ring::{ZContext, ZElem};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitGroupStructure {
    Cyclic { order: u8 },
    SignTimesInfinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupDescriptor {
    pub structure: UnitGroupStructure,
    pub generators: Vec<ZElem>,
    pub has_negative_norm_units: bool,
}

/// The generator whose powers (together with -1) produce every unit; for the
/// cyclic groups this is the generator itself.
pub fn infinite_generator(ctx: &ZContext) -> ZElem {
    let z = ctx.z();
    let s = z.signum();
    match z.abs() {
        0 => ZElem::new(0, 1),
        1 | 2 => ZElem::new(0, s),
        3 => ZElem::new(-1, s),
        _ => ZElem::new(0, s),
    }
}

pub fn unit_group(ctx: &ZContext) -> UnitGroupDescriptor {
    let z = ctx.z();
    match z.abs() {
        0 => UnitGroupDescriptor {
            structure: UnitGroupStructure::Cyclic { order: 4 },
            generators: vec![ZElem::new(0, 1)],
            has_negative_norm_units: false,
        },
        1 => UnitGroupDescriptor {
            structure: UnitGroupStructure::Cyclic { order: 6 },
            generators: vec![infinite_generator(ctx)],
            has_negative_norm_units: false,
        },
        _ => UnitGroupDescriptor {
            structure: UnitGroupStructure::SignTimesInfinite,
            generators: vec![ZElem::new(-1, 0), infinite_generator(ctx)],
            has_negative_norm_units: z.abs() == 3,
        },
    }
}

/// Order of the cyclic unit group, when finite.
pub fn cyclic_order(ctx: &ZContext) -> Option<i64> {
    match ctx.z().abs() {
        0 => Some(4),
        1 => Some(6),
        _ => None,
    }
}

/// The unit (-1)^k g^n in normal form, g the generator from
/// [`infinite_generator`]; for cyclic groups n is reduced modulo the order.
pub fn unit_from_indices(ctx: &ZContext, k: u8, n: i64) -> ZElem {
    let g = infinite_generator(ctx);
    let n = match cyclic_order(ctx) {
        Some(order) => n.rem_euclid(order),
        None => n,
    };
    let mut u = generator_power(ctx, &g, n);
    if k & 1 == 1 {
        u = -&u;
    }
    u
}

fn generator_power(ctx: &ZContext, g: &ZElem, n: i64) -> ZElem {
    let base = if n >= 0 {
        g.clone()
    } else {
        ctx.unit_inverse(g).expect("generator is a unit")
    };
    let mut acc = ZElem::one();
    for _ in 0..n.unsigned_abs() {
        acc = ctx.mul(&acc, &base);
    }
    acc
}

/// All units (-1)^k g^n with n in the given range, deduplicated; for cyclic
/// groups the full group is returned regardless of the range.
pub fn enumerate_units(ctx: &ZContext, n_lo: i64, n_hi: i64) -> Result<Vec<ZElem>> {
    if n_lo > n_hi {
        return Err(Error::EmptyRange);
    }
    let mut out: Vec<ZElem> = Vec::new();
    match cyclic_order(ctx) {
        Some(order) => {
            for n in 0..order {
                let u = unit_from_indices(ctx, 0, n);
                if !out.contains(&u) {
                    out.push(u);
                }
            }
        }
        None => {
            for k in 0..2u8 {
                for n in n_lo..=n_hi {
                    let u = unit_from_indices(ctx, k, n);
                    if !out.contains(&u) {
                        out.push(u);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// True when some unit of the ring has norm -1; equivalent to z in {-3, 3}.
pub fn has_negative_norm_units(ctx: &ZContext) -> bool {
    ctx.z().abs() == 3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_solutions, OracleWindow};
    use num_bigint::BigInt;
    use num_traits::One;

    fn e(re: i64, im: i64) -> ZElem {
        ZElem::new(re, im)
    }

    #[test]
    fn descriptors() {
        let d0 = unit_group(&ZContext::new(0));
        assert_eq!(d0.structure, UnitGroupStructure::Cyclic { order: 4 });
        assert_eq!(d0.generators, vec![e(0, 1)]);

        let d3 = unit_group(&ZContext::new(3));
        assert_eq!(d3.structure, UnitGroupStructure::SignTimesInfinite);
        assert_eq!(d3.generators, vec![e(-1, 0), e(-1, 1)]);
        assert!(d3.has_negative_norm_units);

        let d6 = unit_group(&ZContext::new(6));
        assert_eq!(d6.generators, vec![e(-1, 0), e(0, 1)]);
        assert!(!d6.has_negative_norm_units);

        let dm3 = unit_group(&ZContext::new(-3));
        assert_eq!(dm3.generators, vec![e(-1, 0), e(-1, -1)]);
        assert!(dm3.has_negative_norm_units);
    }

    #[test]
    fn generator_powers() {
        assert_eq!(unit_from_indices(&ZContext::new(3), 0, 3), e(-1, 2));
        assert_eq!(unit_from_indices(&ZContext::new(3), 0, -1), e(-2, 1));
        assert_eq!(unit_from_indices(&ZContext::new(9), 0, 0), e(1, 0));
        // i_1^2 = i_1 - 1
        assert_eq!(unit_from_indices(&ZContext::new(1), 0, 2), e(-1, 1));
        // cyclic reduction
        assert_eq!(
            unit_from_indices(&ZContext::new(1), 0, 8),
            unit_from_indices(&ZContext::new(1), 0, 2)
        );
    }

    #[test]
    fn enumerate_small_groups() {
        let u1 = enumerate_units(&ZContext::new(1), -10, 10).unwrap();
        let expect: Vec<ZElem> = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
            .iter()
            .map(|&(a, b)| e(a, b))
            .collect();
        assert_eq!(u1.len(), 6);
        for x in &expect {
            assert!(u1.contains(x));
        }
        assert_eq!(enumerate_units(&ZContext::new(0), 0, 0).unwrap().len(), 4);
    }

    #[test]
    fn enumerate_z3_window() {
        let us = enumerate_units(&ZContext::new(3), -1, 1).unwrap();
        assert_eq!(us.len(), 6);
        assert!(us.contains(&e(-1, 1)));
        assert!(us.contains(&e(-2, 1)));
        let ctx = ZContext::new(3);
        for u in &us {
            assert!(ctx.is_unit(u));
        }
    }

    #[test]
    fn norm_minus_one_only_at_odd_exponents_of_z3() {
        let ctx = ZContext::new(3);
        for n in -6..=6 {
            let u = unit_from_indices(&ctx, 0, n);
            let norm = ctx.norm(&u);
            if n % 2 == 0 {
                assert!(norm.is_one(), "n={n}");
            } else {
                assert_eq!(norm, BigInt::from(-1), "n={n}");
            }
        }
    }

    #[test]
    fn infinite_generator_has_no_small_order() {
        for z in [2i64, 3, 4, 7, -2, -3, -5] {
            let ctx = ZContext::new(z);
            let mut seen = std::collections::HashSet::new();
            for n in -12..=12 {
                assert!(seen.insert(unit_from_indices(&ctx, 0, n)), "z={z} n={n}");
            }
        }
    }

    #[test]
    fn exhaustive_against_oracle_for_finite_groups() {
        for z in [-1i64, 0, 1] {
            let ctx = ZContext::new(z);
            let mut expected = brute_solutions(&ctx, &BigInt::one(), OracleWindow::new(2));
            expected.extend(brute_solutions(&ctx, &BigInt::from(-1), OracleWindow::new(2)));
            let mut got = enumerate_units(&ctx, 0, 0).unwrap();
            expected.sort();
            got.sort();
            assert_eq!(got, expected, "z={z}");
        }
    }

    #[test]
    fn mirror_relates_generators() {
        for z in [1i64, 2, 3, 4, 6] {
            let ctx = ZContext::new(z);
            let m = ctx.mirrored();
            assert_eq!(ctx.phi(&infinite_generator(&ctx)), infinite_generator(&m));
        }
    }
}
