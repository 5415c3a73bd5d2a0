//! The `hsymp` command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | invalid input: unreadable or malformed files, failed validation, bad arguments, `t` outside the arc |
//! | 3 | eigenvalue inside the ambiguity window around `-1` |
//! | 4 | triple index sum not within tolerance of an integer |
//! | 5 | torus sweep row with `delta >= 1e-9` |
//! | 6 | rank decision too close to the threshold, or a reduction collapsed |
//! | 7 | mapping torus condition fails |
//! | 8 | closed-form logarithm argument on the branch cut |
//! | 9 | internal numerical failure (solver, inconsistent rank and spectrum) |
//!
//! Every failure writes one JSON object `{"error", "message", "exit_code"}`
//! to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bordism::{compose, reduce};
use crate::error::Error;
use crate::hermsymp::{validate_space, HermitianSymplecticSpace, Lagrangian, Tolerances};
use crate::json::{parse, JsonComplex, LagrangianJson, RelationJson, SpaceJson};
use crate::knotcalc::{
    chern_simons, format_rational, mapping_torus_condition, parse_rational,
    rho_difference_detailed, torus_twisted_cohomology, trefoil_arc_point, GluingMatrix,
};
use crate::maslov::{m_invariant_detailed, triple_sum};
use crate::torus::{linspace, torus_m_sweep, IntegerPair};

pub const SWEEP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "hsymp",
    version,
    about = "Hermitian symplectic calculus: m invariant, Maslov triple index, reduction"
)]
pub struct Cli {
    /// Threshold for algebraic identities.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_alg: f64,
    /// Singular value threshold for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_rank: f64,
    /// Write results to stdout as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// m(V, W), dim(V cap W) and the spectrum of -phi(V) phi(W)^*.
    M {
        space: PathBuf,
        v: PathBuf,
        w: PathBuf,
    },
    /// Maslov triple index m(U, V) + m(V, W) + m(W, U).
    Triple {
        space: PathBuf,
        u: PathBuf,
        v: PathBuf,
        w: PathBuf,
    },
    /// Push a Lagrangian of the source across a relation; prints a Lagrangian.
    Reduce { relation: PathBuf, w: PathBuf },
    /// Compose two relations; prints a relation.
    Compose { first: PathBuf, second: PathBuf },
    /// Closed form against the generic algorithm on the flat torus, as CSV.
    #[command(name = "torus-sweep")]
    TorusSweep {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        big_a: i64,
        #[arg(allow_negative_numbers = true)]
        big_b: i64,
        #[arg(allow_negative_numbers = true)]
        t_min: f64,
        #[arg(allow_negative_numbers = true)]
        t_max: f64,
        #[arg(allow_negative_numbers = true)]
        steps: usize,
    },
    /// Twisted cohomology, extension condition and Chern-Simons value at a
    /// point of the trefoil arc.
    Trefoil {
        /// Arc parameter as `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// 4 (cs(t1) - cs(t2)) mod 1.
    #[command(name = "rho-diff")]
    RhoDiff {
        #[arg(long, allow_hyphen_values = true)]
        t1: String,
        #[arg(long, allow_hyphen_values = true)]
        t2: String,
    },
    /// Check a space and, optionally, Lagrangians in it.
    Validate {
        space: PathBuf,
        lagrangians: Vec<PathBuf>,
    },
}

/// A failure ready to be reported.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = exit_code(&e);
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
            code,
        }
    }
}

impl Failure {
    fn new(kind: &str, message: impl Into<String>, code: i32) -> Self {
        Failure {
            kind: kind.to_string(),
            message: message.into(),
            code,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EigenvalueAmbiguity { .. } => 3,
        Error::NonIntegerSum { .. } => 4,
        Error::RankCollapse { .. } | Error::IllConditioned { .. } => 6,
        Error::ConditionFailed { .. } => 7,
        Error::BranchCut { .. } => 8,
        Error::IntersectionMismatch { .. } | Error::Eigensolver | Error::NonComplex { .. } => 9,
        _ => 2,
    }
}

/// `%.15g`.
pub fn format_g15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new("Io", format!("{}: {e}", path.display()), 2))
}

struct Context {
    tol: Tolerances,
    json: bool,
}

impl Context {
    fn space(&self, path: &Path) -> Result<Arc<HermitianSymplecticSpace>, Failure> {
        let s: SpaceJson = parse(&read(path)?, &path.display().to_string())?;
        Ok(Arc::new(s.to_space(self.tol)?))
    }

    fn lagrangian(
        &self,
        space: &Arc<HermitianSymplecticSpace>,
        path: &Path,
    ) -> Result<Lagrangian, Failure> {
        let l: LagrangianJson = parse(&read(path)?, &path.display().to_string())?;
        Ok(l.to_lagrangian(space)?)
    }

    fn relation(&self, path: &Path) -> Result<crate::bordism::BordismRelation, Failure> {
        let r: RelationJson = parse(&read(path)?, &path.display().to_string())?;
        Ok(r.to_relation(self.tol)?)
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    writeln!(out, "{text}").map_err(io_failure)
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new("Io", e.to_string(), 2)
}

macro_rules! out {
    ($w:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(io_failure)?
    };
}

fn cmd_m(
    ctx: &Context,
    space: &Path,
    v: &Path,
    w: &Path,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let s = ctx.space(space)?;
    let v = ctx.lagrangian(&s, v)?;
    let w = ctx.lagrangian(&s, w)?;
    let m = m_invariant_detailed(&v, &w)?;
    if ctx.json {
        let eigenvalues: Vec<JsonComplex> = m
            .eigenvalues
            .iter()
            .map(|z| JsonComplex { re: z.re, im: z.im })
            .collect();
        emit_json(
            out,
            &json!({ "m": m.value, "intersection_dim": m.intersection_dim, "eigenvalues": eigenvalues }),
        )
    } else {
        out!(out, "m = {}", format_g15(m.value));
        out!(out, "intersection_dim = {}", m.intersection_dim);
        out!(out, "eigenvalues:");
        for z in &m.eigenvalues {
            out!(out, "  {} {}", format_g15(z.re), format_g15(z.im));
        }
        Ok(())
    }
}

fn cmd_triple(ctx: &Context, paths: [&Path; 4], out: &mut dyn Write) -> Result<(), Failure> {
    let s = ctx.space(paths[0])?;
    let u = ctx.lagrangian(&s, paths[1])?;
    let v = ctx.lagrangian(&s, paths[2])?;
    let w = ctx.lagrangian(&s, paths[3])?;
    let sum = triple_sum(&u, &v, &w)?;
    let sigma = sum.round();
    if (sum - sigma).abs() > s.tolerances().int {
        return Err(Error::NonIntegerSum { sum }.into());
    }
    let sigma = sigma as i64;
    if ctx.json {
        emit_json(out, &json!({ "sigma": sigma, "sum": sum }))
    } else {
        out!(out, "sigma = {sigma}");
        Ok(())
    }
}

fn cmd_reduce(
    ctx: &Context,
    relation: &Path,
    w: &Path,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let rel = ctx.relation(relation)?;
    let w = ctx.lagrangian(rel.source(), w)?;
    let pushed = reduce(&rel, &w)?;
    emit_json(out, &LagrangianJson::from_lagrangian(&pushed))
}

fn cmd_compose(
    ctx: &Context,
    first: &Path,
    second: &Path,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let r1 = ctx.relation(first)?;
    let r2 = ctx.relation(second)?;
    let composite = compose(&r1, &r2)?;
    emit_json(out, &RelationJson::from_relation(&composite))
}

#[allow(clippy::too_many_arguments)]
fn cmd_torus_sweep(
    ctx: &Context,
    x: (i64, i64),
    y: (i64, i64),
    t_min: f64,
    t_max: f64,
    steps: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()).into());
    }
    if !(t_min > 0.0 && t_min <= t_max && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < t_min <= t_max, got {t_min}, {t_max}"
        ))
        .into());
    }
    let x = IntegerPair::new(x.0, x.1)?;
    let y = IntegerPair::new(y.0, y.1)?;
    let sweep = torus_m_sweep(x, y, &linspace(t_min, t_max, steps))?;
    if ctx.json {
        let rows: Vec<_> = sweep
            .rows
            .iter()
            .map(|r| json!({ "t": r.t, "m_closed": r.m_closed, "m_generic": r.m_generic, "delta": r.delta }))
            .collect();
        emit_json(out, &json!({ "rows": rows, "varies": sweep.varies }))?;
    } else {
        out!(out, "t,m_closed,m_generic,delta");
        for r in &sweep.rows {
            out!(
                out,
                "{},{},{},{}",
                format_g15(r.t),
                format_g15(r.m_closed),
                format_g15(r.m_generic),
                format_g15(r.delta)
            );
        }
    }
    if let Some(bad) = sweep.rows.iter().find(|r| r.delta >= SWEEP_TOLERANCE) {
        return Err(Failure::new(
            "SweepMismatch",
            format!(
                "closed form and generic value differ by {:e} at t = {}",
                bad.delta, bad.t
            ),
            5,
        ));
    }
    Ok(())
}

fn cmd_trefoil(ctx: &Context, t: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let t = parse_rational(t)?;
    let p = trefoil_arc_point(t)?;
    let f = GluingMatrix::example();
    let h = torus_twisted_cohomology(&p)?;
    let condition = mapping_torus_condition(&p, &f);
    let cs = if condition {
        Some(chern_simons(&p, &f)?)
    } else {
        None
    };
    let q = format_rational;
    if ctx.json {
        let mut obj = json!({
            "t": q(&t),
            "phi": q(&p.phi),
            "psi": q(&p.psi),
            "cohomology": [h.h0, h.h1, h.h2],
            "condition": condition,
        });
        if let Some(cs) = &cs {
            obj["m"] = json!(q(&cs.m));
            obj["n"] = json!(q(&cs.n));
            obj["cs"] = json!(q(&cs.value));
        }
        emit_json(out, &obj)?;
    } else {
        out!(out, "t = {}", q(&t));
        out!(out, "(phi, psi) = ({}, {})", q(&p.phi), q(&p.psi));
        out!(out, "cohomology = ({}, {}, {})", h.h0, h.h1, h.h2);
        out!(out, "condition = {condition}");
        if let Some(cs) = &cs {
            out!(out, "(m, n) = ({}, {})", q(&cs.m), q(&cs.n));
            out!(out, "cs = {}", q(&cs.value));
        }
    }
    match cs {
        Some(_) => Ok(()),
        None => Err(Error::ConditionFailed {
            phi: q(&p.phi),
            psi: q(&p.psi),
        }
        .into()),
    }
}

fn cmd_rho_diff(ctx: &Context, t1: &str, t2: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let p1 = trefoil_arc_point(parse_rational(t1)?)?;
    let p2 = trefoil_arc_point(parse_rational(t2)?)?;
    let d = rho_difference_detailed(&p1, &p2, &GluingMatrix::example())?;
    let q = format_rational;
    if ctx.json {
        emit_json(
            out,
            &json!({ "cs1": q(&d.cs1), "cs2": q(&d.cs2), "rho_diff": q(&d.four_cs_difference) }),
        )
    } else {
        out!(out, "cs1 = {}", q(&d.cs1));
        out!(out, "cs2 = {}", q(&d.cs2));
        out!(out, "rho_diff = {}", q(&d.four_cs_difference));
        Ok(())
    }
}

fn cmd_validate(
    ctx: &Context,
    space: &Path,
    lagrangians: &[PathBuf],
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let s: SpaceJson = parse(&read(space)?, &space.display().to_string())?;
    let (gram, gamma) = s.matrices()?;
    let report = validate_space(&gram, &gamma, &ctx.tol)?;
    if ctx.json {
        emit_json(
            out,
            &json!({
                "dim": report.dim,
                "gamma_square_residual": report.gamma_square_residual,
                "unitarity_residual": report.unitarity_residual,
                "signature": report.signature(),
                "passed": report.passed(),
            }),
        )?;
    } else {
        out!(out, "dim = {}", report.dim);
        out!(
            out,
            "gamma_square_residual = {}",
            format_g15(report.gamma_square_residual)
        );
        out!(
            out,
            "unitarity_residual = {}",
            format_g15(report.unitarity_residual)
        );
        out!(out, "signature = {}", report.signature());
        out!(out, "passed = {}", report.passed());
    }
    if !report.passed() {
        return Err(Error::InvalidSpace(report.to_string()).into());
    }
    let space = Arc::new(HermitianSymplecticSpace::with_tolerances(
        gram, gamma, ctx.tol,
    )?);
    for path in lagrangians {
        let l = ctx.lagrangian(&space, path)?;
        if !ctx.json {
            out!(
                out,
                "{}: lagrangian (omega residual {})",
                path.display(),
                format_g15(l.omega_residual())
            );
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    for (name, v) in [("--tol-alg", cli.tol_alg), ("--tol-rank", cli.tol_rank)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("{name} must be positive")).into());
        }
    }
    let tol = Tolerances {
        alg: cli.tol_alg,
        rank: cli.tol_rank,
        ..Tolerances::default()
    };
    let ctx = Context {
        tol,
        json: cli.json,
    };
    match &cli.command {
        Command::M { space, v, w } => cmd_m(&ctx, space, v, w, out),
        Command::Triple { space, u, v, w } => cmd_triple(&ctx, [space, u, v, w], out),
        Command::Reduce { relation, w } => cmd_reduce(&ctx, relation, w, out),
        Command::Compose { first, second } => cmd_compose(&ctx, first, second, out),
        Command::TorusSweep {
            a,
            b,
            big_a,
            big_b,
            t_min,
            t_max,
            steps,
        } => cmd_torus_sweep(
            &ctx,
            (*a, *b),
            (*big_a, *big_b),
            *t_min,
            *t_max,
            *steps,
            out,
        ),
        Command::Trefoil { t } => cmd_trefoil(&ctx, t, out),
        Command::RhoDiff { t1, t2 } => cmd_rho_diff(&ctx, t1, t2, out),
        Command::Validate { space, lagrangians } => cmd_validate(&ctx, space, lagrangians, out),
    }
}

fn report(err: &mut dyn Write, failure: &Failure) {
    let obj =
        json!({ "error": failure.kind, "message": failure.message, "exit_code": failure.code });
    let _ = writeln!(err, "{obj}");
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            report(err, &Failure::new("Usage", e.to_string().trim_end(), 2));
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            report(err, &f);
            f.code
        }
    }
}
