use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubicpts::cremona::cremona_at;
use cubicpts::cubic::{advertised_degrees, descend_step, intersect_curve, DescentTrace, Hypersurface, Intersection};
use cubicpts::experiment::{cmd_run, ExperimentConfig, ExperimentReport, HypersurfaceSpec, Mode, RunOptions};
use cubicpts::field::{GroundField, Qq, TowerField};
use cubicpts::fmoduli::{moduli_roundtrip, normal_form, parametrize_fpn, scaling_lambda, FModuliTuple};
use cubicpts::json::{
    curve_from_json, curve_to_json, cycle_from_json, cycle_to_json, elems_from_json, elems_to_json, form_from_json,
    form_to_json, ground_or, point_from_json, point_to_json, tower_from_json, tower_to_json, Ground,
};
use cubicpts::projgeom::{closed_point_in_lgp, minimal_polynomial, moment_point, ClosedPoint, ZeroCycle};
use cubicpts::rnc::{implicit_conic, rnc_through};
use cubicpts::sample::{sample_point, DEFAULT_ATTEMPTS, FIELD_SIZE_BUDGET};
use cubicpts::symprod::{fold_residual, fold_round_trip, joint_inverse, phi1, phi2, RoundTrip};
use cubicpts::{Error, Result};

/// Closed points on cubic hypersurfaces, computed exactly.
#[derive(Parser)]
#[command(name = "cubicpts", version)]
struct Cli {
    #[command(flatten)]
    io: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON input file ("-" for stdin).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Ground field characteristic; 0 means ℚ.
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Largest p^d the point search may enumerate over.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a field tower; with "element", report its minimal polynomial and trace.
    Field,
    /// Closed points.
    Point {
        #[command(subcommand)]
        cmd: PointCmd,
    },
    /// Whether a closed point is in linearly general position.
    Lgp,
    /// Cremona map centered at a closed point of degree n+1, optionally applied to a point.
    Cremona,
    /// Rational normal curve through a cycle of degree n+3.
    Rnc,
    /// Intersection of a parametrized curve with a hypersurface.
    Intersect,
    /// One degree-descent step for a closed point on a cubic.
    Descend {
        #[command(flatten)]
        hyp: HypArgs,
        /// Sample a point of this degree when the input has none.
        #[arg(long)]
        degree: Option<usize>,
        /// Print the trace as a table.
        #[arg(long)]
        table: bool,
    },
    /// Residual-intersection maps between symmetric products.
    Symmap {
        #[command(subcommand)]
        cmd: SymCmd,
    },
    /// Curves of degree 2d−1 through a point of degree 2d+1.
    Fmoduli {
        #[command(subcommand)]
        cmd: FmCmd,
    },
    /// Seeded experiments.
    Experiment {
        #[command(subcommand)]
        cmd: ExpCmd,
    },
}

#[derive(Args, Clone, Copy)]
struct HypArgs {
    /// Ambient dimension of the Fermat cubic used when no hypersurface is given.
    #[arg(long, default_value_t = 4)]
    ambient: usize,
}

#[derive(Subcommand)]
enum PointCmd {
    /// Search for a closed point of the given degree over 𝔽_p.
    Sample {
        #[command(flatten)]
        hyp: HypArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
        attempts: usize,
    },
}

#[derive(Subcommand)]
enum SymCmd {
    /// C_P ∩ H on a cubic surface.
    Phi1,
    /// (C_P ∩ X) ∖ P on a cubic surface.
    Phi2,
    /// Recover P from (Q₁, Q₂).
    Inv,
    /// (C_P ∩ X) ∖ P on a cubic threefold or fourfold, with a fiber check.
    Fold,
}

#[derive(Subcommand)]
enum FmCmd {
    Lambda,
    NormalForm,
    Curve,
    Roundtrip,
}

#[derive(Subcommand)]
enum ExpCmd {
    Run {
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        ambient: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        /// Draw a random smooth cubic instead of the Fermat cubic.
        #[arg(long)]
        random: bool,
        #[arg(long)]
        parallel: bool,
        /// Record wall-clock times per trial.
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        table: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Descend,
    RoundtripSurface,
    RoundtripFold,
    ModuliRoundtrip,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Descend => Mode::Descend,
            ModeArg::RoundtripSurface => Mode::RoundtripSurface,
            ModeArg::RoundtripFold => Mode::RoundtripFold,
            ModeArg::ModuliRoundtrip => Mode::ModuliRoundtrip,
        }
    }
}

/// What a command produced: JSON, plus an optional human table and exit status.
struct Outcome {
    value: Value,
    table: Option<String>,
    unresolved: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, table: None, unresolved: false }
    }
}

macro_rules! on_ground {
    ($g:expr, $f:ident ( $($arg:expr),* )) => {
        match $g {
            Ground::Prime(k) => $f(k, $($arg),*),
            Ground::Rational => $f(Qq, $($arg),*),
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.io, &out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.unresolved {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            if let Error::Unresolved(d) = &e {
                println!("{}", serde_json::to_string_pretty(&**d).expect("diagnostics serialize"));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unresolved(_) => 3,
        _ => 2,
    }
}

fn emit(io: &Common, out: &Outcome) -> io::Result<()> {
    let text = serde_json::to_string_pretty(&out.value).expect("json serializes") + "\n";
    match &io.output {
        Some(path) => fs::write(path, &text)?,
        None if out.table.is_none() => io::stdout().write_all(text.as_bytes())?,
        None => {}
    }
    if let Some(t) = &out.table {
        io::stdout().write_all(t.as_bytes())?;
    }
    Ok(())
}

fn read_input(io: &Common) -> Result<Value> {
    let text = match &io.input {
        None => return Ok(json!({})),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
            s
        }
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("input is not JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Invalid(format!("input lacks \"{key}\"")))
}

fn warn_char3(k: u64) {
    if k == 3 {
        eprintln!("warning: characteristic 3; smoothness of diagonal cubics is not reliable here");
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let io = &cli.io;
    let input = read_input(io)?;
    let ground = || ground_or(&input, io.prime);
    let budget = io.budget.unwrap_or(FIELD_SIZE_BUDGET);
    match &cli.cmd {
        Cmd::Field => Ok(on_ground!(ground()?, cmd_field(&input))?.into()),
        Cmd::Point { cmd: PointCmd::Sample { hyp, degree, attempts } } => {
            let Ground::Prime(k) = ground()? else {
                return Err(Error::UnsupportedGroundField);
            };
            warn_char3(k.p());
            let x = hypersurface(k, &input, *hyp)?;
            let p = sample_point(&x, *degree, io.seed.unwrap_or(0), budget, *attempts)?;
            Ok(point_to_json(&p).into())
        }
        Cmd::Lgp => Ok(on_ground!(ground()?, cmd_lgp(&input))?.into()),
        Cmd::Cremona => Ok(on_ground!(ground()?, cmd_cremona(&input))?.into()),
        Cmd::Rnc => Ok(on_ground!(ground()?, cmd_rnc(&input))?.into()),
        Cmd::Intersect => Ok(on_ground!(ground()?, cmd_intersect(&input))?.into()),
        Cmd::Descend { hyp, degree, table } => {
            let g = ground()?;
            if let Ground::Prime(k) = g {
                warn_char3(k.p());
            }
            let (value, trace) = match g {
                Ground::Prime(k) => {
                    let x = hypersurface(k, &input, *hyp)?;
                    let p = match (input.get("point"), degree) {
                        (None, Some(d)) => sample_point(&x, *d, io.seed.unwrap_or(0), budget, DEFAULT_ATTEMPTS)?,
                        _ => point_arg_required(k, &input)?,
                    };
                    cmd_descend(&x, &p)?
                }
                Ground::Rational => cmd_descend(&hypersurface(Qq, &input, *hyp)?, &point_arg_required(Qq, &input)?)?,
            };
            let table = table.then(|| descent_table(&trace));
            Ok(Outcome { value, table, unresolved: false })
        }
        Cmd::Symmap { cmd } => Ok(on_ground!(ground()?, cmd_symmap(&input, cmd))?.into()),
        Cmd::Fmoduli { cmd } => Ok(on_ground!(ground()?, cmd_fmoduli(&input, cmd))?.into()),
        Cmd::Experiment { cmd: ExpCmd::Run { mode, ambient, degree, random, parallel, timings, table } } => {
            let mut config = if input.as_object().is_some_and(|o| !o.is_empty()) {
                serde_json::from_value::<ExperimentConfig>(input.clone())
                    .map_err(|e| Error::Invalid(format!("bad experiment config: {e}")))?
            } else {
                let need = |what: &str| Error::Invalid(format!("--{what} is required without --input"));
                ExperimentConfig {
                    prime: io.prime.ok_or_else(|| need("prime"))?,
                    ambient: ambient.unwrap_or(0),
                    hypersurface: HypersurfaceSpec::Fermat,
                    degree: degree.ok_or_else(|| need("degree"))?,
                    trials: io.trials.unwrap_or(1),
                    seed: io.seed.unwrap_or(0),
                    mode: mode.ok_or_else(|| need("mode"))?.into(),
                    budget: FIELD_SIZE_BUDGET,
                }
            };
            if let Some(p) = io.prime {
                config.prime = p;
            }
            if let Some(t) = io.trials {
                config.trials = t;
            }
            if let Some(s) = io.seed {
                config.seed = s;
            }
            if let Some(b) = io.budget {
                config.budget = b;
            }
            if let Some(a) = ambient {
                config.ambient = *a;
            }
            if let Some(d) = degree {
                config.degree = *d;
            }
            if let Some(m) = mode {
                config.mode = (*m).into();
            }
            if *random {
                config.hypersurface = HypersurfaceSpec::Random;
            }
            warn_char3(config.prime);
            let report = cmd_run(&config, RunOptions { parallel: *parallel, timings: *timings })?;
            let unresolved = report.tally.get("unresolved").copied().unwrap_or(0) > 0;
            let table = table.then(|| report_table(&report));
            let value = serde_json::to_value(&report).expect("report serializes");
            Ok(Outcome { value, table, unresolved })
        }
    }
}

fn hypersurface<B: GroundField>(k: B, input: &Value, hyp: HypArgs) -> Result<Hypersurface<B>> {
    match input.get("hypersurface") {
        Some(f) => Hypersurface::new(k, form_from_json(k, f)?),
        None => Ok(Hypersurface::fermat(k, hyp.ambient, 3)),
    }
}

fn point_arg<B: GroundField>(k: B, input: &Value) -> Result<ClosedPoint<B>> {
    point_from_json(k, input.get("point").unwrap_or(input))
}

fn point_arg_required<B: GroundField>(k: B, input: &Value) -> Result<ClosedPoint<B>> {
    point_from_json(k, input.get("point").ok_or_else(|| Error::Invalid("give a \"point\" or --degree".into()))?)
}

fn cycle_arg<B: GroundField>(k: B, input: &Value, key: &str) -> Result<ZeroCycle<B>> {
    cycle_from_json(k, field(input, key)?)
}

fn cmd_field<B: GroundField>(k: B, input: &Value) -> Result<Value> {
    let tower = tower_from_json(k, input)?;
    let mut out = json!({ "tower": tower_to_json(&tower), "degree": tower.degree() });
    if let Some(e) = input.get("element") {
        let top: TowerField<B> = tower.top();
        let mut a = elems_from_json(&k, e)?;
        if a.len() > top.degree() {
            return Err(Error::DimensionMismatch(format!("element has {} coefficients", a.len())));
        }
        a.resize(top.degree(), k.zero());
        out["element"] = json!({
            "minpoly": elems_to_json(&k, minimal_polynomial(&top, &a).coeffs()),
            "trace": k.elem_to_json(&top.trace(&a)),
        });
    }
    Ok(out)
}

fn cmd_lgp<B: GroundField>(k: B, input: &Value) -> Result<Value> {
    let p = point_arg(k, input)?;
    Ok(json!({ "degree": p.degree(), "ambient": p.ambient(), "lgp": closed_point_in_lgp(&p)? }))
}

fn cmd_cremona<B: GroundField>(k: B, input: &Value) -> Result<Value> {
    let center = point_from_json(k, field(input, "center")?)?;
    let map = cremona_at(&center)?;
    let mut out = json!({ "forms": map.forms().iter().map(|f| form_to_json(&k, f)).collect::<Vec<_>>() });
    if let Some(p) = input.get("point") {
        out["image"] = point_to_json(&map.apply_closed(&point_from_json(k, p)?)?);
    }
    Ok(out)
}

fn cmd_rnc<B: GroundField>(k: B, input: &Value) -> Result<Value> {
    let z = cycle_arg(k, input, "cycle")?;
    let c = rnc_through(&z)?;
    let mut out = json!({ "curve": curve_to_json(&k, &c) });
    if let Some(q) = implicit_conic(&k, &c) {
        out["conic"] = elems_to_json(&k, &q);
    }
    Ok(out)
}

fn cmd_intersect<B: GroundField>(k: B, input: &Value) -> Result<Value> {
    let x = Hypersurface::new(k, form_from_json(k, field(input, "hypersurface")?)?)?;
    let c = curve_from_json(k, field(input, "curve")?)?;
    Ok(match intersect_curve(&x, &c)? {
        Intersection::Contained => json!({ "contained": true }),
        Intersection::Cycle(z) => json!({
            "contained": false,
            "degree": z.degree(),
            "part_degrees": z.part_degrees(),
            "cycle": cycle_to_json(&z),
        }),
    })
}

fn cmd_descend<B: GroundField>(x: &Hypersurface<B>, p: &ClosedPoint<B>) -> Result<(Value, DescentTrace)> {
    let (out, trace) = descend_step(x, p)?;
    let n = x.ambient() - 1;
    let value = json!({
        "input": point_to_json(p),
        "output": point_to_json(&out),
        "output_degree": out.degree(),
        "advertised": advertised_degrees(n),
        "trace": trace,
    });
    Ok((value, trace))
}

fn cmd_symmap<B: GroundField>(k: B, input: &Value, cmd: &SymCmd) -> Result<Value> {
    let x = Hypersurface::new(k, form_from_json(k, field(input, "hypersurface")?)?)?;
    let h = || elems_from_json(&k, field(input, "h")?);
    let cycle = |z: &ZeroCycle<B>| json!({ "degree": z.degree(), "part_degrees": z.part_degrees(), "cycle": cycle_to_json(z) });
    match cmd {
        SymCmd::Phi1 => Ok(cycle(&phi1(&x, &h()?, &cycle_arg(k, input, "cycle")?)?)),
        SymCmd::Phi2 => Ok(cycle(&phi2(&x, &cycle_arg(k, input, "cycle")?)?)),
        SymCmd::Inv => {
            let (q1, q2) = (cycle_arg(k, input, "q1")?, cycle_arg(k, input, "q2")?);
            Ok(cycle(&joint_inverse(&x, &h()?, &q1, &q2)?))
        }
        SymCmd::Fold => {
            let p = cycle_arg(k, input, "cycle")?;
            let mut out = cycle(&fold_residual(&x, &p)?);
            out["round_trip"] = match fold_round_trip(&x, &p)? {
                RoundTrip::Identity => json!("identity"),
                RoundTrip::Mismatch => json!("mismatch"),
                RoundTrip::OutOfDomain(why) => json!({ "out_of_domain": why }),
            };
            Ok(out)
        }
    }
}

/// The residue field K = k[θ]/(minpoly), checking irreducibility.
fn residue_field<B: GroundField>(k: B, minpoly: &Value) -> Result<TowerField<B>> {
    let levels = json!({ "levels": [{ "var": "θ", "minpoly": minpoly }] });
    Ok(tower_from_json(k, &levels)?.top())
}

fn in_field<B: GroundField>(kf: &TowerField<B>, k: &B, v: &Value) -> Result<Vec<B::Elem>> {
    let mut a = elems_from_json(k, v)?;
    if a.len() > kf.degree() {
        return Err(Error::DimensionMismatch(format!("element has {} coefficients", a.len())));
    }
    a.resize(kf.degree(), k.zero());
    Ok(a)
}

fn cmd_fmoduli<B: GroundField>(k: B, input: &Value, cmd: &FmCmd) -> Result<Value> {
    match cmd {
        FmCmd::Lambda => {
            let kf = residue_field(k, field(input, "minpoly")?)?;
            let b1 = in_field(&kf, &k, field(input, "b1")?)?;
            let b2 = in_field(&kf, &k, field(input, "b2")?)?;
            Ok(json!({ "lambda": elems_to_json(&k, &scaling_lambda(&kf, &b1, &b2)?) }))
        }
        FmCmd::NormalForm => {
            let kf = residue_field(k, field(input, "minpoly")?)?;
            let b0 = in_field(&kf, &k, field(input, "b0")?)?;
            let b1 = in_field(&kf, &k, field(input, "b1")?)?;
            let nf = normal_form(&kf, &b0, &b1)?;
            Ok(json!({
                "tuple": nf.tuple.to_json(&k),
                "b0": elems_to_json(&k, &nf.b0),
                "b1": elems_to_json(&k, &nf.b1),
            }))
        }
        FmCmd::Curve | FmCmd::Roundtrip => {
            let tuple = FModuliTuple::from_json(k, field(input, "tuple")?)?;
            let x = match input.get("point") {
                Some(v) => point_from_json(k, v)?,
                None => {
                    let kf = residue_field(k, &elems_to_json(&k, tuple.minpoly.coeffs()))?;
                    moment_point(&kf, 2 * tuple.d - 1)?
                }
            };
            if matches!(cmd, FmCmd::Curve) {
                return Ok(json!({ "curve": curve_to_json(&k, &parametrize_fpn(&x, &tuple)?) }));
            }
            let back = moduli_roundtrip(&x, &tuple)?;
            Ok(json!({ "tuple": tuple.to_json(&k), "recovered": back.to_json(&k), "identity": back == tuple }))
        }
    }
}

fn descent_table(trace: &DescentTrace) -> String {
    let mut s = format!(
        "{:<5} {:<12} {:>5} {:>6} {:>10} {:>6} {:<16} {:<16} {:>8} {:>4}\n",
        "step", "branch", "in", "curve", "contained", "cycle", "parts", "residual", "selected", "ok"
    );
    for (i, st) in trace.steps.iter().enumerate() {
        let branch = serde_json::to_value(st.branch).expect("branch serializes");
        s += &format!(
            "{:<5} {:<12} {:>5} {:>6} {:>10} {:>6} {:<16} {:<16} {:>8} {:>4}\n",
            i,
            branch.as_str().unwrap_or("?"),
            st.input_degree,
            st.curve_degree,
            st.curve_contained,
            st.cycle_degree,
            format!("{:?}", st.cycle_part_degrees),
            format!("{:?}", st.residual_part_degrees),
            st.selected_degree,
            if st.in_advertised_set { "yes" } else { "no" },
        );
    }
    s
}

fn report_table(r: &ExperimentReport) -> String {
    let mut s = format!("{:<6} {:<20} {:<14} {:<12} {:<20} {:>6}\n", "trial", "seed", "status", "branch", "parts", "degree");
    for rec in &r.records {
        let status = serde_json::to_value(rec.status).expect("status serializes");
        s += &format!(
            "{:<6} {:<20} {:<14} {:<12} {:<20} {:>6}\n",
            rec.trial,
            rec.seed,
            status.as_str().unwrap_or("?"),
            rec.branch.as_deref().unwrap_or("-"),
            if rec.part_degrees.is_empty() { "-".to_string() } else { format!("{:?}", rec.part_degrees) },
            rec.output_degree.map_or("-".to_string(), |d| d.to_string()),
        );
    }
    s += "\nhistogram:";
    for (k, v) in &r.histogram {
        s += &format!(" {k}:{v}");
    }
    s += "\ntally:";
    for (k, v) in &r.tally {
        s += &format!(" {k}:{v}");
    }
    s.push('\n');
    s
}
