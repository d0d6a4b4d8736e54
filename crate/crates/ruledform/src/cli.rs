//! Command-line entry point: list the families, run the verification suite,
//! export sampled geometry as CSV, and plot curvature profiles as SVG.
//!
//! Configuration is accepted both as flags and as a JSON file (`--config`);
//! flags override the file. Exit codes: 0 all good, 1 verification failure,
//! 2 usage or configuration error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::ambient::C64;
use crate::curves::{CurveFamily, FamilyKind, PlaneCurve};
use crate::error::{GeomError, Result};
use crate::ruled::{embed, shape_closed, sigma, HyperPoint};
use crate::sample::{linspace, SampleBox};
use crate::svg::{self, Panel, Series};
use crate::verify::{run_suite, FdConfig, FdScheme, Tolerances};

#[derive(Parser)]
#[command(
    name = "ruledform",
    about = "Ruled hypersurfaces in CP^2 and CH^2 over plane curves: construction, verification, export",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the five constant-curvature families with their formulas.
    Families,
    /// Run the verification suite and write a JSON report.
    Verify(RunArgs),
    /// Sample the hypersurface over a (theta, s, |w|) grid into a CSV file.
    Sample(RunArgs),
    /// Plot principal-curvature and invariant-ratio profiles as SVG.
    Plot(RunArgs),
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Family kind (cp2-circle, ch2-equidistant, ch2-circle, ch2-horocycle,
    /// ch2-exterior-circle).
    #[arg(long)]
    family: Option<String>,
    /// Family parameter a.
    #[arg(long)]
    a: Option<f64>,
    /// Ambient scale r > 0.
    #[arg(long)]
    r: Option<f64>,
    /// Seed for the deterministic samplers.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (report JSON, CSV, or SVG depending on the command).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance for finite-difference comparisons.
    #[arg(long = "tol-fd")]
    tol_fd: Option<f64>,
    /// Tolerance for algebraic identities.
    #[arg(long = "tol-alg")]
    tol_alg: Option<f64>,
    /// Finite-difference step.
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
    /// Finite-difference scheme: central-2 or richardson-4.
    #[arg(long = "fd-scheme")]
    fd_scheme: Option<String>,
    /// Grid dimensions NxMxK over (theta, s, |w|).
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<FamilySpec>,
    r: Option<f64>,
    #[serde(rename = "box")]
    sample_box: Option<SampleBox>,
    fd: Option<FdFileConfig>,
    seed: Option<u64>,
    tolerances: Option<Tolerances>,
    grid: Option<String>,
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
struct FamilySpec {
    kind: FamilyKind,
    a: f64,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FdFileConfig {
    step: Option<f64>,
    scheme: Option<String>,
    samples: Option<usize>,
}

/// A fully resolved, deterministic run description.
struct RunConfig {
    family: Option<(FamilyKind, f64)>,
    r: f64,
    sample_box: Option<SampleBox>,
    fd: FdConfig,
    tol: Tolerances,
    grid: (usize, usize, usize),
    out: Option<PathBuf>,
}

fn default_a(kind: FamilyKind) -> f64 {
    match kind {
        FamilyKind::Ch2Equidistant | FamilyKind::Ch2Horocycle => 0.0,
        _ => 0.3,
    }
}

fn parse_grid(spec: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = spec.split('x').collect();
    if parts.len() != 3 {
        return Err(GeomError::Config(format!(
            "grid must look like 8x8x8, got '{spec}'"
        )));
    }
    let mut dims = [0usize; 3];
    for (slot, part) in dims.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| GeomError::Config(format!("bad grid dimension '{part}'")))?;
    }
    Ok((dims[0], dims[1], dims[2]))
}

fn resolve(args: &RunArgs) -> Result<RunConfig> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                GeomError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                GeomError::Config(format!("cannot parse config {}: {e}", path.display()))
            })?
        }
        None => FileConfig::default(),
    };

    let kind = match (&args.family, &file.family) {
        (Some(name), _) => Some(FamilyKind::parse(name)?),
        (None, Some(spec)) => Some(spec.kind),
        (None, None) => None,
    };
    // A file-configured `a` applies unless the flags switched to a
    // different family kind.
    let file_a = file
        .family
        .as_ref()
        .filter(|spec| kind == Some(spec.kind))
        .map(|spec| spec.a);
    let a = args.a.or(file_a).or_else(|| kind.map(default_a));
    let r = args.r.or(file.r).unwrap_or(1.0);
    if r <= 0.0 || !r.is_finite() {
        return Err(GeomError::Config(format!("r must be positive, got {r}")));
    }

    let file_fd = file.fd.unwrap_or_default();
    let mut fd = FdConfig {
        seed: args.seed.or(file.seed).unwrap_or(7),
        // The default step scales with r, matching the arclength units of
        // the curve parameter.
        step: 1e-5 * r,
        ..FdConfig::default()
    };
    if let Some(step) = args.fd_step.or(file_fd.step) {
        fd.step = step;
    }
    let scheme_name = args.fd_scheme.clone().or(file_fd.scheme);
    if let Some(name) = scheme_name {
        fd.scheme = FdScheme::parse(&name)?;
    }
    if let Some(n) = file_fd.samples {
        fd.samples = n;
    }

    let mut tol = file.tolerances.unwrap_or_default();
    if let Some(v) = args.tol_fd {
        tol.fd = v;
    }
    if let Some(v) = args.tol_alg {
        tol.algebraic = v;
    }

    let grid = match args.grid.clone().or(file.grid) {
        Some(spec) => parse_grid(&spec)?,
        None => (8, 8, 8),
    };

    Ok(RunConfig {
        family: kind.map(|k| (k, a.expect("a defaulted alongside kind"))),
        r,
        sample_box: file.sample_box,
        fd,
        tol,
        grid,
        out: args.out.clone().or(file.out),
    })
}

fn build_family(cfg: &RunConfig) -> Result<CurveFamily> {
    let (kind, a) = cfg.family.ok_or_else(|| {
        GeomError::Config("this command needs --family (or a config file with one)".into())
    })?;
    CurveFamily::new(kind, a, cfg.r)
}

/// The verification set: the requested family alone, or all five defaults.
fn verify_families(cfg: &RunConfig) -> Result<Vec<CurveFamily>> {
    match cfg.family {
        Some((kind, a)) => Ok(vec![CurveFamily::new(kind, a, cfg.r)?]),
        None => FamilyKind::ALL
            .into_iter()
            .map(|k| CurveFamily::new(k, default_a(k), cfg.r))
            .collect(),
    }
}

fn cmd_families() -> i32 {
    println!(
        "family               range of a        lambda          alpha                      |beta|"
    );
    println!(
        "-------------------- ----------------- --------------- -------------------------- ------"
    );
    let rows = [
        (
            "cp2-circle",
            "(0, pi/2)",
            "csc(2a)/r",
            "-(2/(r sigma)) cot(2a)",
        ),
        (
            "ch2-equidistant",
            "(-inf, inf)",
            "sech(2a)/r",
            "-(2/(r sigma)) tanh(2a)",
        ),
        (
            "ch2-circle",
            "(0, inf)",
            "csch(2a)/r",
            "-(2/(r sigma)) coth(2a)",
        ),
        ("ch2-horocycle", "(-inf, inf)", "1/r", "-2/(r sigma)"),
        (
            "ch2-exterior-circle",
            "(-pi/4, pi/4)",
            "sec(2a)/r",
            "-(2/(r sigma)) tan(2a)",
        ),
    ];
    for (name, range, lambda, alpha) in rows {
        println!("{name:<20} {range:<17} {lambda:<15} {alpha:<26} |w|/r");
    }
    println!();
    println!("a = 0 equidistants are bisectors (minimal); circles outside CH^2 need |w| > 1.");
    0
}

fn write_output(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| GeomError::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let families = verify_families(cfg)?;
    let report = run_suite(&families, &cfg.fd, &cfg.tol);
    println!("{report}");
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("ruledform-report.json"));
    write_output(&out, &report.to_json())?;
    println!("report written to {}", out.display());
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn format_field(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_sample(cfg: &RunConfig) -> Result<i32> {
    let family = build_family(cfg)?;
    let (nt, ns, nw) = cfg.grid;
    if nt == 0 || ns == 0 || nw == 0 {
        return Err(GeomError::Config(format!(
            "grid {}x{}x{} has an empty dimension",
            nt, ns, nw
        )));
    }
    let bx = cfg
        .sample_box
        .unwrap_or_else(|| SampleBox::export_default(family.kind(), cfg.r));
    let thetas = linspace(bx.theta[0], bx.theta[1], nt);
    let ss = linspace(bx.s[0], bx.s[1], ns);
    let ws = linspace(bx.w_abs[0], bx.w_abs[1], nw);

    let mut csv = String::new();
    csv.push_str("theta,s,w_re,w_im,sigma,rho,alpha,beta_abs,kappa_plus,kappa_minus,z0_re,z0_im,z1_re,z1_im,z2_re,z2_im\n");
    for &theta in &thetas {
        for &s in &ss {
            for &w_abs in &ws {
                let w = C64::new(w_abs, 0.0);
                let pt = HyperPoint::new(theta, s, w);
                let sg = sigma(w, &family.ambient())?;
                let ev = family.eval(s);
                let rho = (sg * sg * ev.rho_sq_factor).max(0.0).sqrt();
                let sd = shape_closed(&family, &pt)?;
                let z = embed(&family, &pt)?;
                let fields = [
                    theta,
                    s,
                    w.re,
                    w.im,
                    sg,
                    rho,
                    sd.alpha,
                    sd.beta_signed.abs(),
                    sd.principal[1],
                    sd.principal[2],
                    z.0[0].re,
                    z.0[0].im,
                    z.0[1].re,
                    z.0[1].im,
                    z.0[2].re,
                    z.0[2].im,
                ];
                let row: Vec<String> = fields.iter().map(|&v| format_field(v)).collect();
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
        }
    }
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("ruledform-sample.csv"));
    write_output(&out, &csv)?;
    println!(
        "wrote {} rows to {}",
        thetas.len() * ss.len() * ws.len(),
        out.display()
    );
    Ok(0)
}

fn cmd_plot(cfg: &RunConfig) -> Result<i32> {
    let family = build_family(cfg)?;
    let (_, _, nw) = cfg.grid;
    if nw == 0 {
        return Err(GeomError::Config("plot grid has no |w| nodes".into()));
    }
    let bx = cfg
        .sample_box
        .unwrap_or_else(|| SampleBox::export_default(family.kind(), cfg.r));
    let theta = bx.theta[0];
    let s = bx.s[0];
    let ws = linspace(bx.w_abs[0], bx.w_abs[1], nw);
    let cfg_amb = family.ambient();

    let mut kappa_plus = Vec::with_capacity(ws.len());
    let mut kappa_minus = Vec::with_capacity(ws.len());
    let mut zero = Vec::with_capacity(ws.len());
    let mut ratio = Vec::with_capacity(ws.len());
    for &w_abs in &ws {
        let pt = HyperPoint::new(theta, s, C64::new(w_abs, 0.0));
        let sd = shape_closed(&family, &pt)?;
        kappa_plus.push((w_abs, sd.principal[1]));
        kappa_minus.push((w_abs, sd.principal[2]));
        zero.push((w_abs, 0.0));
        let denom = sd.beta_signed * sd.beta_signed + cfg_amb.c;
        if denom.abs() >= 1e-12 {
            ratio.push((w_abs, sd.alpha * sd.alpha / denom));
        }
    }

    let panels = [
        Panel {
            title: format!("{} principal curvatures", family.kind()),
            x_label: "|w|".into(),
            y_label: "curvature".into(),
            series: vec![
                Series {
                    label: "kappa+".into(),
                    color: "#d62728",
                    points: kappa_plus,
                },
                Series {
                    label: "kappa-".into(),
                    color: "#1f77b4",
                    points: kappa_minus,
                },
                Series {
                    label: "0".into(),
                    color: "#7f7f7f",
                    points: zero,
                },
            ],
        },
        Panel {
            title: "alpha^2/(beta^2+c)".into(),
            x_label: "|w|".into(),
            y_label: "ratio".into(),
            series: vec![Series {
                label: "ratio".into(),
                color: "#2ca02c",
                points: ratio,
            }],
        },
    ];
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("ruledform-plot.svg"));
    write_output(&out, &svg::render(&panels))?;
    println!("plot written to {}", out.display());
    Ok(0)
}

/// Caps rayon's worker count from RULEDFORM_THREADS (0 or unset = automatic).
fn configure_threads() {
    if let Ok(raw) = std::env::var("RULEDFORM_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

/// Parses arguments, dispatches, and returns the process exit code.
pub fn run() -> i32 {
    configure_threads();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Families => return cmd_families(),
        Command::Verify(args) => resolve(args).and_then(|cfg| cmd_verify(&cfg)),
        Command::Sample(args) => resolve(args).and_then(|cfg| cmd_sample(&cfg)),
        Command::Plot(args) => resolve(args).and_then(|cfg| cmd_plot(&cfg)),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}
