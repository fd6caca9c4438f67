//! Command-line front end. Every subcommand maps onto one library call and
//! serializes a `CommandResult`-shaped JSON object
//! {"command", "z", "inputs", "result", "warnings"} with sorted keys, ring
//! elements as [re, im] decimal strings and verdicts as lowercase hyphenated
//! tags, so identical argv yields byte-identical output. `classify-table`
//! can emit CSV instead, and `plot` writes an SVG file.
//!
//! Exit status: 0 on success, 1 on domain errors (with a machine-readable
//! error object), 2 on usage errors.

use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::classify::{
    classify_prime, is_prime_i64, non_ufd_witness, special_elements, PrimeClassification,
};
use crate::count::{
    count_from_report, zring_factorize, DEFAULT_FACTOR_BOUND,
};
use crate::geometry::{in_subbranch, Anchor};
use crate::oracle::{brute_count_positive_primitive, brute_solutions, OracleWindow};
use crate::ring::{ZContext, ZElem};
use crate::solver::{
    enumeration_bound, no_solution_certificate, solutions_in_quadrant, solve_canonical,
    zero_level_solutions, CertificateKind, NoSolutionCertificate, SolutionReport,
    ZeroLevelSolutions,
};
use crate::units::{enumerate_units, unit_group, UnitGroupStructure};

#[derive(Parser)]
#[command(name = "zring", version, disable_help_subcommand = true)]
#[command(about = "Exact arithmetic and solvers for x^2 + zxy + y^2 = M")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// ring parameter z
    #[arg(long, allow_hyphen_values = true)]
    z: i64,
    /// re-check the result against the brute-force oracle
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide solvability of x^2 + zxy + y^2 = M and list the canonical
    /// solutions (with a no-solution certificate otherwise)
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// emit JSON (the default; present for symmetry)
        #[arg(long)]
        json: bool,
    },
    /// Solutions carrying the sign pattern of one quadrant
    Quadrant {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        quadrant: u8,
        #[arg(long, default_value_t = 16)]
        limit: usize,
    },
    /// Classify a signed integer prime relative to Z[i_z]
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Classify every signed prime in a range; CSV columns
    /// p, verdict, factor_re, factor_im
    ClassifyTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        range_lo: i64,
        #[arg(long, allow_hyphen_values = true)]
        range_hi: i64,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Unit group structure and an enumeration window
    Units {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        range_lo: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        range_hi: i64,
    },
    /// Number of positive primitive solutions of x^2 + zxy + y^2 = M
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, default_value_t = DEFAULT_FACTOR_BOUND)]
        factor_bound: u64,
    },
    /// Factor M over Z[i_z] and report whether it qualifies
    Factor {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, default_value_t = DEFAULT_FACTOR_BOUND)]
        factor_bound: u64,
    },
    /// Witness that Z[i_z] is not a unique factorization domain
    NonUfd {
        #[command(flatten)]
        common: Common,
    },
    /// Emit the level set, its lattice solutions and the separating line
    /// as an SVG file
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        out: String,
    },
}

/// Run the CLI on an argv slice (including the program name). Returns the
/// exit status and the text for stdout; status 2 carries a usage message
/// meant for stderr.
pub fn run(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            return (code, err.to_string());
        }
    };
    match dispatch(cli) {
        Ok(value) => (0, pretty(&value)),
        Err(err) => (1, pretty(&err)),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn wrap(command: &str, z: i64, inputs: Value, result: Value, warnings: Vec<String>) -> Value {
    json!({
        "command": command,
        "z": z,
        "inputs": inputs,
        "result": result,
        "warnings": warnings,
    })
}

fn fail(command: &str, z: i64, message: String) -> Value {
    json!({
        "command": command,
        "z": z,
        "error": message,
    })
}

fn elem_json(e: &ZElem) -> Value {
    json!([e.re.to_string(), e.im.to_string()])
}

fn parse_m(command: &str, z: i64, m: &str) -> Result<BigInt, Value> {
    BigInt::from_str(m).map_err(|_| fail(command, z, format!("not an integer: {m}")))
}

type CmdResult = Result<Value, Value>;

fn dispatch(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Solve { common, m, .. } => cmd_solve(common, &m),
        Cmd::Quadrant {
            common,
            m,
            quadrant,
            limit,
        } => cmd_quadrant(common, &m, quadrant, limit),
        Cmd::Classify { common, p } => cmd_classify(common, p),
        Cmd::ClassifyTable {
            common,
            range_lo,
            range_hi,
            csv,
            out,
        } => cmd_classify_table(common, range_lo, range_hi, csv, out),
        Cmd::Units {
            common,
            range_lo,
            range_hi,
        } => cmd_units(common, range_lo, range_hi),
        Cmd::Count {
            common,
            m,
            factor_bound,
        } => cmd_count(common, &m, factor_bound),
        Cmd::Factor {
            common,
            m,
            factor_bound,
        } => cmd_factor(common, &m, factor_bound),
        Cmd::NonUfd { common } => cmd_non_ufd(common),
        Cmd::Plot { common, m, out } => cmd_plot(common, &m, &out),
    }
}

fn oracle_box(ctx: &ZContext, m: &BigInt, cap: u64) -> OracleWindow {
    let bound = enumeration_bound(ctx, m);
    let bound = u64::try_from(&bound * 2).unwrap_or(cap).clamp(1, cap);
    OracleWindow::new(bound)
}

fn certificate_json(cert: &NoSolutionCertificate) -> Value {
    match &cert.kind {
        CertificateKind::EmptyLevelSet => json!({
            "kind": "empty-level-set",
            "m": cert.m.to_string(),
        }),
        CertificateKind::NonsquareLine { floor_root } => json!({
            "kind": "nonsquare-line",
            "m": cert.m.to_string(),
            "floor_root": floor_root.to_string(),
        }),
        CertificateKind::ScannedArc {
            scan_imaginary,
            lo,
            hi,
            proxy_area,
            proxy_norm,
        } => json!({
            "kind": "scanned-arc",
            "m": cert.m.to_string(),
            "scan_axis": if *scan_imaginary { "imaginary" } else { "real" },
            "window": [lo.to_string(), hi.to_string()],
            "proxy_area": proxy_area.to_string(),
            "proxy_norm": proxy_norm.to_string(),
        }),
    }
}

fn solve_json(ctx: &ZContext, report: &SolutionReport) -> Result<Value, crate::Error> {
    let canonical: Vec<Value> = report
        .canonical
        .iter()
        .map(|c| {
            json!({
                "elem": elem_json(&c.elem),
                "primitive": c.primitive,
            })
        })
        .collect();
    let parametric = report.parametric_line.as_ref().map(|p| {
        let sign = if ctx.z() > 0 { "+" } else { "-" };
        json!({
            "root": p.root.to_string(),
            "family": format!("all (x, y) with |x {sign} y| = {}", p.root),
        })
    });
    let certificate = if report.solvable {
        None
    } else {
        no_solution_certificate(ctx, &report.m)?.map(|c| certificate_json(&c))
    };
    Ok(json!({
        "solvable": report.solvable,
        "canonical": canonical,
        "parametric_line": parametric,
        "certificate": certificate,
    }))
}

fn cmd_solve(common: Common, m_raw: &str) -> CmdResult {
    let cmd = "solve";
    let z = common.z;
    let ctx = ZContext::new(z);
    let m = parse_m(cmd, z, m_raw)?;
    let inputs = json!({ "m": m.to_string() });
    if m.is_zero() {
        let result = match zero_level_solutions(&ctx) {
            ZeroLevelSolutions::OriginOnly => json!({
                "solvable": true,
                "zero_level": "origin-only",
            }),
            ZeroLevelSolutions::ZeroDivisorLine { direction } => json!({
                "solvable": true,
                "zero_level": { "line_direction": elem_json(&direction) },
            }),
        };
        return Ok(wrap(cmd, z, inputs, result, vec![]));
    }
    let report = solve_canonical(&ctx, &m).map_err(|e| fail(cmd, z, e.to_string()))?;
    let mut warnings = Vec::new();
    if common.verify {
        verify_solve(&ctx, &report).map_err(|e| fail(cmd, z, e))?;
        warnings.push("verified against the brute-force oracle".into());
    }
    let result = solve_json(&ctx, &report).map_err(|e| fail(cmd, z, e.to_string()))?;
    Ok(wrap(cmd, z, inputs, result, warnings))
}

fn verify_solve(ctx: &ZContext, report: &SolutionReport) -> Result<(), String> {
    for c in &report.canonical {
        if ctx.norm(&c.elem) != report.m {
            return Err(format!("verification failed: {} has wrong norm", c.elem));
        }
    }
    if ctx.z().abs() == 2 || report.m.is_zero() {
        return Ok(());
    }
    let window = oracle_box(ctx, &report.m, 1500);
    let anchor = if report.m.is_positive() {
        Anchor::CanonPos {
            level: report.m.clone(),
        }
    } else {
        Anchor::CanonNeg {
            level: report.m.clone(),
        }
    };
    let mut expect: Vec<ZElem> = Vec::new();
    if !(report.m.is_negative() && ctx.z().abs() < 3) {
        for s in brute_solutions(ctx, &report.m, window) {
            if in_subbranch(ctx, &anchor, &s).map_err(|e| e.to_string())? {
                expect.push(s);
            }
        }
    }
    let got: Vec<ZElem> = report.canonical.iter().map(|c| c.elem.clone()).collect();
    let bound = BigInt::from(window.bound);
    let in_window =
        |e: &ZElem| e.re.abs() <= bound && e.im.abs() <= bound;
    let got_in: Vec<&ZElem> = got.iter().filter(|e| in_window(e)).collect();
    if got_in.len() != expect.len() || !expect.iter().all(|e| got.contains(e)) {
        return Err("verification failed: canonical set disagrees with the oracle".into());
    }
    Ok(())
}

fn cmd_quadrant(common: Common, m_raw: &str, quadrant: u8, limit: usize) -> CmdResult {
    let cmd = "quadrant";
    let z = common.z;
    let ctx = ZContext::new(z);
    let m = parse_m(cmd, z, m_raw)?;
    let inputs = json!({
        "m": m.to_string(),
        "quadrant": quadrant,
        "limit": limit,
    });
    if m.is_zero() {
        return Err(fail(cmd, z, crate::Error::ZeroLevel.to_string()));
    }
    let got = solutions_in_quadrant(&ctx, &m, quadrant, limit)
        .map_err(|e| fail(cmd, z, e.to_string()))?;
    let mut warnings = Vec::new();
    if common.verify {
        for e in &got.elems {
            if ctx.norm(e) != m {
                return Err(fail(cmd, z, format!("verification failed: {e} wrong norm")));
            }
        }
        let window = oracle_box(&ctx, &m, 1200);
        let oracle = brute_solutions(&ctx, &m, window);
        let bound = BigInt::from(window.bound);
        for e in &got.elems {
            if e.re.abs() <= bound && e.im.abs() <= bound && !oracle.contains(e) {
                return Err(fail(cmd, z, format!("verification failed: {e} not found by oracle")));
            }
        }
        warnings.push("verified against the brute-force oracle".into());
    }
    let result = json!({
        "solutions": got.elems.iter().map(elem_json).collect::<Vec<_>>(),
        "truncated": got.truncated,
    });
    Ok(wrap(cmd, z, inputs, result, warnings))
}

fn classification_json(c: &PrimeClassification) -> Value {
    json!({
        "verdict": c.tag(),
        "factor": c.factor().map(elem_json),
    })
}

fn verify_classification(ctx: &ZContext, p: i64, c: &PrimeClassification) -> Result<(), String> {
    let level = BigInt::from(p);
    let window = oracle_box(ctx, &level, 800);
    let pos = !brute_solutions(ctx, &level, window).is_empty();
    let neg = !brute_solutions(ctx, &(-&level), oracle_box(ctx, &(-&level), 800)).is_empty();
    let ok = match c {
        PrimeClassification::Regular => !pos && !neg,
        PrimeClassification::IrregularTypeI { factor } => pos && ctx.norm(factor) == level,
        PrimeClassification::IrregularTypeII { factor_of_negation } => {
            !pos && neg && ctx.norm(factor_of_negation) == -level
        }
        PrimeClassification::Special { factor } => {
            pos && ctx.norm(factor) == level
                && (divides(p, ctx.two_minus_z()) || divides(p, ctx.two_plus_z()))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(format!("verification failed for p = {p}"))
    }
}

fn divides(p: i64, n: i64) -> bool {
    p != 0 && n % p == 0
}

fn cmd_classify(common: Common, p: i64) -> CmdResult {
    let cmd = "classify";
    let z = common.z;
    let ctx = ZContext::new(z);
    let inputs = json!({ "p": p });
    let c = classify_prime(&ctx, p).map_err(|e| fail(cmd, z, e.to_string()))?;
    let mut warnings = Vec::new();
    if common.verify {
        verify_classification(&ctx, p, &c).map_err(|e| fail(cmd, z, e))?;
        warnings.push("verified against the brute-force oracle".into());
    }
    let mut result = classification_json(&c);
    result["p"] = json!(p);
    result["special_elements"] = json!(special_elements(&ctx));
    Ok(wrap(cmd, z, inputs, result, warnings))
}

fn cmd_classify_table(
    common: Common,
    range_lo: i64,
    range_hi: i64,
    csv: bool,
    out: Option<String>,
) -> CmdResult {
    let cmd = "classify-table";
    let z = common.z;
    let ctx = ZContext::new(z);
    if range_lo > range_hi {
        return Err(fail(cmd, z, "empty range".into()));
    }
    let mut rows = Vec::new();
    for p in range_lo..=range_hi {
        if !is_prime_i64(p) {
            continue;
        }
        let c = classify_prime(&ctx, p).map_err(|e| fail(cmd, z, e.to_string()))?;
        if common.verify {
            verify_classification(&ctx, p, &c).map_err(|e| fail(cmd, z, e))?;
        }
        rows.push((p, c));
    }
    let inputs = json!({ "range_lo": range_lo, "range_hi": range_hi });
    if csv {
        let mut text = String::from("p,verdict,factor_re,factor_im\n");
        for (p, c) in &rows {
            let (fr, fi) = match c.factor() {
                Some(f) => (f.re.to_string(), f.im.to_string()),
                None => (String::new(), String::new()),
            };
            text.push_str(&format!("{p},{},{fr},{fi}\n", c.tag()));
        }
        if let Some(path) = out {
            std::fs::write(&path, &text).map_err(|e| fail(cmd, z, e.to_string()))?;
            let result = json!({ "rows": rows.len(), "out": path });
            return Ok(wrap(cmd, z, inputs, result, vec![]));
        }
        // raw CSV on stdout
        return Ok(Value::String(text));
    }
    let result = json!({
        "rows": rows
            .iter()
            .map(|(p, c)| {
                let mut v = classification_json(c);
                v["p"] = json!(p);
                v
            })
            .collect::<Vec<_>>(),
    });
    Ok(wrap(cmd, z, inputs, result, vec![]))
}

fn cmd_units(common: Common, range_lo: i64, range_hi: i64) -> CmdResult {
    let cmd = "units";
    let z = common.z;
    let ctx = ZContext::new(z);
    let d = unit_group(&ctx);
    let units = enumerate_units(&ctx, range_lo, range_hi)
        .map_err(|e| fail(cmd, z, e.to_string()))?;
    let mut warnings = Vec::new();
    if common.verify {
        for u in &units {
            if !ctx.is_unit(u) {
                return Err(fail(cmd, z, format!("verification failed: {u} is not a unit")));
            }
        }
        warnings.push("verified: every element has norm +-1".into());
    }
    let structure = match d.structure {
        UnitGroupStructure::Cyclic { order } => format!("cyclic-{order}"),
        UnitGroupStructure::SignTimesInfinite => "sign-times-infinite".into(),
    };
    let result = json!({
        "structure": structure,
        "generators": d.generators.iter().map(elem_json).collect::<Vec<_>>(),
        "has_negative_norm_units": d.has_negative_norm_units,
        "units": units.iter().map(elem_json).collect::<Vec<_>>(),
    });
    let inputs = json!({ "range_lo": range_lo, "range_hi": range_hi });
    Ok(wrap(cmd, z, inputs, result, warnings))
}

fn cmd_count(common: Common, m_raw: &str, factor_bound: u64) -> CmdResult {
    let cmd = "count";
    let z = common.z;
    let ctx = ZContext::new(z);
    let m = parse_m(cmd, z, m_raw)?;
    let inputs = json!({ "m": m.to_string(), "factor_bound": factor_bound });
    if z < 0 || z == 2 || m < BigInt::from(2) {
        return Err(fail(
            cmd,
            z,
            "count requires z >= 0, z != 2 and M >= 2".into(),
        ));
    }
    let report =
        zring_factorize(&ctx, &m, factor_bound).map_err(|e| fail(cmd, z, e.to_string()))?;
    let pc = count_from_report(&report);
    let mut warnings = Vec::new();
    if pc.ufd_conditional {
        warnings.push(
            "zero count relies on unique factorization, which is only known for |z| <= 5"
                .into(),
        );
    }
    if common.verify {
        let oracle = brute_count_positive_primitive(&ctx, &m);
        if BigInt::from(oracle) != pc.count {
            return Err(fail(
                cmd,
                z,
                format!(
                    "verification failed: counted {} but the oracle finds {}",
                    pc.count, oracle
                ),
            ));
        }
        warnings.push("verified against the brute-force oracle".into());
    }
    let result = json!({
        "count": pc.count.to_string(),
        "qualifies": report.qualifies,
        "reason": report.disqualification_reason,
        "ufd_conditional": pc.ufd_conditional,
    });
    Ok(wrap(cmd, z, inputs, result, warnings))
}

fn cmd_factor(common: Common, m_raw: &str, factor_bound: u64) -> CmdResult {
    let cmd = "factor";
    let z = common.z;
    let ctx = ZContext::new(z);
    let m = parse_m(cmd, z, m_raw)?;
    let inputs = json!({ "m": m.to_string(), "factor_bound": factor_bound });
    let report =
        zring_factorize(&ctx, &m, factor_bound).map_err(|e| fail(cmd, z, e.to_string()))?;
    let mut warnings = Vec::new();
    if report.ufd_conditional {
        warnings.push(
            "disqualification through a regular divisor relies on unique factorization".into(),
        );
    }
    if common.verify && report.qualifies {
        // the factor norms must multiply (with exponents) to M, up to a
        // norm -1 unit at |z| = 3
        let mut prod = BigInt::from(1);
        for (e, k) in &report.zring_factors {
            prod *= ctx.norm(e).pow(*k);
        }
        if prod != m && !(ctx.z().abs() == 3 && prod == -&m) {
            return Err(fail(cmd, z, "verification failed: norm product mismatch".into()));
        }
        warnings.push("verified: factor norms multiply to M".into());
    }
    let result = json!({
        "qualifies": report.qualifies,
        "reason": report.disqualification_reason,
        "rational_factorization": report
            .rational_factorization
            .iter()
            .map(|(p, e)| json!([p, e]))
            .collect::<Vec<_>>(),
        "zring_factors": report
            .zring_factors
            .iter()
            .map(|(f, e)| json!({ "factor": elem_json(f), "exponent": e }))
            .collect::<Vec<_>>(),
        "special_part": report
            .special_part
            .iter()
            .map(|(p, e)| json!([p, e]))
            .collect::<Vec<_>>(),
    });
    Ok(wrap(cmd, z, inputs, result, warnings))
}

fn cmd_non_ufd(common: Common) -> CmdResult {
    let cmd = "non-ufd";
    let z = common.z;
    let ctx = ZContext::new(z);
    let witness = non_ufd_witness(&ctx).map_err(|e| fail(cmd, z, e.to_string()))?;
    let mut warnings = Vec::new();
    if let Some(w) = &witness {
        if common.verify {
            if !w.verify(&ctx) {
                return Err(fail(cmd, z, "verification failed: witness identities".into()));
            }
            warnings.push("verified: witness identities re-checked".into());
        }
    }
    let result = match witness {
        Some(w) => json!({
            "witness": {
                "p": w.p,
                "irreducible_nonprime": elem_json(&w.irreducible_nonprime),
                "base": elem_json(&w.base),
                "square": elem_json(&w.square),
                "cofactor": elem_json(&w.cofactor),
                "composite_side": w.composite_side,
                "identity": format!(
                    "base^2 = square = {} * cofactor, yet {} does not divide base",
                    w.p, w.p
                ),
            },
        }),
        None => json!({ "witness": null }),
    };
    Ok(wrap(cmd, z, inputs_empty(), result, warnings))
}

fn inputs_empty() -> Value {
    json!({})
}

fn cmd_plot(common: Common, m_raw: &str, out: &str) -> CmdResult {
    let cmd = "plot";
    let z = common.z;
    let ctx = ZContext::new(z);
    let m = parse_m(cmd, z, m_raw)?;
    if m.is_zero() {
        return Err(fail(cmd, z, crate::Error::ZeroLevel.to_string()));
    }
    let mut dots: Vec<ZElem> = Vec::new();
    if ctx.z().abs() != 2 {
        for q in 1..=4u8 {
            if let Ok(sols) = solutions_in_quadrant(&ctx, &m, q, 64) {
                for e in sols.elems {
                    if !dots.contains(&e) {
                        dots.push(e);
                    }
                }
            }
        }
    } else {
        let window = oracle_box(&ctx, &m, 40);
        dots = brute_solutions(&ctx, &m, window);
    }
    if common.verify {
        for e in &dots {
            if ctx.norm(e) != m {
                return Err(fail(cmd, z, format!("verification failed: {e} wrong norm")));
            }
        }
    }
    let svg = plot::render(&ctx, &m, &dots);
    std::fs::write(out, &svg).map_err(|e| fail(cmd, z, e.to_string()))?;
    let inputs = json!({ "m": m.to_string(), "out": out });
    let result = json!({
        "out": out,
        "lattice_points": dots.len(),
        "bytes": svg.len(),
    });
    Ok(wrap(cmd, z, inputs, result, vec![]))
}

/// SVG rendering of a level set. This is the one place real-valued sampling
/// is allowed; nothing here feeds back into the exact logic.
mod plot {
    use super::*;

    const SIZE: f64 = 640.0;
    const SAMPLES_PER_BRANCH: usize = 256;

    fn world_radius(m: &BigInt, dots: &[ZElem]) -> f64 {
        let m_f: f64 = m.to_string().parse().unwrap_or(1.0);
        let mut r: f64 = (2.0 * m_f.abs()).sqrt().max(5.0);
        for d in dots {
            let x: f64 = d.re.to_string().parse().unwrap_or(0.0);
            let y: f64 = d.im.to_string().parse().unwrap_or(0.0);
            r = r.max(x.abs()).max(y.abs());
        }
        // do not let far-flung orbit points blow up the picture
        let cap = (2.0 * m_f.abs()).sqrt().max(5.0) * 8.0;
        (r.min(cap)) * 1.2
    }

    fn to_screen(x: f64, y: f64, r: f64) -> (f64, f64) {
        let s = SIZE / (2.0 * r);
        (SIZE / 2.0 + x * s, SIZE / 2.0 - y * s)
    }

    /// Sample the level set x^2 + zxy + y^2 = M in polar form:
    /// r(t)^2 * (1 + z cos t sin t) = M.
    fn branches(z: f64, m: f64, radius: f64) -> Vec<Vec<(f64, f64)>> {
        let coarse = 4096;
        let valid = |t: f64| -> Option<(f64, f64)> {
            let f = 1.0 + z * t.cos() * t.sin();
            if f.abs() < 1e-12 || (m / f) <= 0.0 {
                return None;
            }
            let r = (m / f).sqrt();
            if r > radius * 2.0 {
                return None;
            }
            Some((r * t.cos(), r * t.sin()))
        };
        // find maximal valid angle runs, then resample each uniformly
        let mut runs: Vec<(f64, f64)> = Vec::new();
        let step = std::f64::consts::TAU / coarse as f64;
        let mut start: Option<f64> = None;
        for i in 0..=coarse {
            let t = i as f64 * step;
            match (valid(t).is_some(), start) {
                (true, None) => start = Some(t),
                (false, Some(s)) => {
                    runs.push((s, t - step));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, std::f64::consts::TAU));
        }
        runs.iter()
            .filter(|(a, b)| b > a)
            .map(|&(a, b)| {
                (0..SAMPLES_PER_BRANCH)
                    .filter_map(|i| {
                        let t = a + (b - a) * i as f64 / (SAMPLES_PER_BRANCH - 1) as f64;
                        valid(t)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn render(ctx: &ZContext, m: &BigInt, dots: &[ZElem]) -> String {
        let radius = world_radius(m, dots);
        let z_f = ctx.z() as f64;
        let m_f: f64 = m.to_string().parse().unwrap_or(1.0);
        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
            SIZE
        ));
        svg.push_str(&format!(
            "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
            SIZE
        ));
        // axes
        let (x0, y0) = to_screen(-radius, 0.0, radius);
        let (x1, y1) = to_screen(radius, 0.0, radius);
        svg.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n"
        ));
        let (x0, y0) = to_screen(0.0, -radius, radius);
        let (x1, y1) = to_screen(0.0, radius, radius);
        svg.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n"
        ));
        // separating line z x + 2 y = 0, dashed, along direction (2, -z)
        let len = (4.0 + z_f * z_f).sqrt();
        let (dx, dy) = (2.0 / len, -z_f / len);
        let (x0, y0) = to_screen(-radius * dx, -radius * dy, radius);
        let (x1, y1) = to_screen(radius * dx, radius * dy, radius);
        svg.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" stroke=\"#333\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n"
        ));
        // level set
        for branch in branches(z_f, m_f, radius) {
            if branch.len() < 2 {
                continue;
            }
            let pts: Vec<String> = branch
                .iter()
                .map(|&(x, y)| {
                    let (sx, sy) = to_screen(x, y, radius);
                    format!("{sx:.2},{sy:.2}")
                })
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9f\" stroke-width=\"2\"/>\n",
                pts.join(" ")
            ));
        }
        // lattice solutions
        for d in dots {
            let x: f64 = d.re.to_string().parse().unwrap_or(0.0);
            let y: f64 = d.im.to_string().parse().unwrap_or(0.0);
            if x.abs() > radius || y.abs() > radius {
                continue;
            }
            let (sx, sy) = to_screen(x, y, radius);
            svg.push_str(&format!(
                "<circle cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"4\" fill=\"#c1121f\"/>\n"
            ));
        }
        svg.push_str(&format!(
            "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\">x^2 + {}xy + y^2 = {}</text>\n",
            ctx.z(),
            m
        ));
        svg.push_str("</svg>\n");
        svg
    }
}
