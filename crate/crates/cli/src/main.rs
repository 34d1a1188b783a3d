//! `fraclap`: compute the Weyl constants, tabulate the half-line kernels and the boundary layer,
//! and run the lattice verification campaigns.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical failure, 4 a reported assertion failed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod report;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraclap_core::lattice::HalfspaceConfig;
use fraclap_core::localization::DomainGeometry;
use fraclap_core::{Error, FractionalOrder, QuadratureSpec};

use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("numerical failure after partial results: {1}")]
    Partial(Box<Report>, Error),
    #[error("output: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Lattice(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Partial(..) => 3,
            CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fraclap", version, about = "Two-term Weyl asymptotics for the restricted fractional Laplacian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Fractional order, 0 < s < 1.
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    /// Dimension, d ≥ 2.
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_subdivisions: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent. For table commands in CSV format the scalar
    /// records go to `<output>.summary.csv` (stderr without an output file).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Common {
    fn order(&self) -> Result<FractionalOrder, CliError> {
        FractionalOrder::new(self.s, self.d).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn quad(&self) -> Result<QuadratureSpec, CliError> {
        QuadratureSpec::new(self.rel_tol, self.abs_tol, self.max_subdivisions).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// L¹, L² by three routes, L̃², and optionally the Riesz/Cesàro coefficients of a domain.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long, requires = "surface")]
        volume: Option<f64>,
        #[arg(long, requires = "volume")]
        surface: Option<f64>,
    },
    /// Phase shift ϑ(λ), I_λ and Φ_λ(t) on a log grid in λ.
    Kernels {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1e3)]
        lambda_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        /// Argument of Φ_λ.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Boundary-layer function K(t) with its running integral; the last row is L².
    Layer {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-2)]
        t_min: f64,
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 4)]
        per_decade: usize,
        /// Also write a matplotlib script that plots the CSV.
        #[arg(long)]
        plot_script: Option<PathBuf>,
    },
    /// Lattice unit square: eigensolve, Riesz means, two-term fit against L¹|Ω| and −L²|∂Ω|.
    VerifySquare {
        #[command(flatten)]
        common: Common,
        /// Interior points per side.
        #[arg(long, default_value_t = 64)]
        m: usize,
        /// Explicit comma-separated h values (overrides the geometric list).
        #[arg(long, value_delimiter = ',')]
        h_list: Option<Vec<f64>>,
        /// Smallest h of the geometric list; defaults to 4Δ.
        #[arg(long)]
        h_min: Option<f64>,
        #[arg(long, default_value_t = 0.25)]
        h_max: f64,
        #[arg(long, default_value_t = 6)]
        h_count: usize,
        #[arg(long, default_value_t = 0.03)]
        c0_tol: f64,
        #[arg(long, default_value_t = 0.25)]
        c1_tol: f64,
    },
    /// Lattice half-plane: density of the spectral projector against the continuum layer law.
    VerifyHalfspace {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.125)]
        spacing: f64,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(long, default_value_t = 128)]
        depth_points: usize,
        #[arg(long, default_value_t = 384)]
        box_depth: usize,
        #[arg(long, default_value_t = 4096)]
        tangential_points: usize,
        #[arg(long, default_value_t = 4.0)]
        max_ratio: f64,
        /// Ratios x_d/h compared against the tolerance.
        #[arg(long, default_value_t = 0.5)]
        window_min: f64,
        #[arg(long, default_value_t = 4.0)]
        window_max: f64,
        #[arg(long, default_value_t = 0.10)]
        tol: f64,
    },
    /// Matrix-level ordering of the spectral Dirichlet power above the restricted operator.
    OrderCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "interval", value_parser = ["interval", "square"])]
        shape: String,
        #[arg(long, default_value_t = 64)]
        m: usize,
    },
    /// Partition-of-unity accuracy of the multiscale covering, and neighborhood integrals.
    LocalizationCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "interval", value_parser = ["interval", "disk", "square"])]
        geometry: String,
        #[arg(long, default_value_t = 0.1)]
        l0: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Cesàro ↔ Riesz coefficient conversion.
    Convert {
        #[command(flatten)]
        common: Common,
        #[arg(long = "A")]
        a_coef: f64,
        #[arg(long = "B", default_value_t = 0.0)]
        b_coef: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
    },
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be finite")))
    }
}

fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Constants { common, volume, surface } => {
            let shape = match (volume, surface) {
                (Some(v), Some(s)) if *v > 0.0 && *s > 0.0 => Some((*v, *s)),
                (Some(_), Some(_)) => return Err(CliError::Usage("volume and surface must be positive".into())),
                _ => None,
            };
            commands::constants(common.order()?, &common.quad()?, shape)
        }
        Command::Kernels { common, lambda_min, lambda_max, points, t } => {
            commands::kernels(common.order()?, &common.quad()?, *lambda_min, *lambda_max, *points, finite("t", *t)?)
        }
        Command::Layer { common, t_min, t_max, per_decade, .. } => {
            commands::layer(common.order()?, &common.quad()?, *t_min, *t_max, *per_decade)
        }
        Command::VerifySquare { common, m, h_list, h_min, h_max, h_count, c0_tol, c1_tol } => {
            if *m < 2 || *h_count < 4 {
                return Err(CliError::Usage("need m ≥ 2 and h-count ≥ 4".into()));
            }
            let cfg = commands::SquareSetup {
                m: *m,
                h_list: h_list.clone(),
                h_min: *h_min,
                h_max: finite("h-max", *h_max)?,
                h_count: *h_count,
                c0_tol: *c0_tol,
                c1_tol: *c1_tol,
            };
            commands::verify_square(common.order()?.s, &common.quad()?, &cfg)
        }
        Command::VerifyHalfspace {
            common,
            spacing,
            h,
            depth_points,
            box_depth,
            tangential_points,
            max_ratio,
            window_min,
            window_max,
            tol,
        } => {
            if !(*spacing > 0.0 && *h > 0.0 && box_depth > depth_points && *tangential_points >= 8) {
                return Err(CliError::Usage("need spacing, h > 0, box-depth > depth-points, tangential-points ≥ 8".into()));
            }
            let cfg = HalfspaceConfig {
                spacing: *spacing,
                h: *h,
                depth_points: *depth_points,
                box_depth: *box_depth,
                tangential_points: *tangential_points,
                max_ratio: finite("max-ratio", *max_ratio)?,
            };
            commands::verify_halfspace(common.order()?, &common.quad()?, &cfg, (*window_min, *window_max), *tol)
        }
        Command::OrderCheck { common, shape, m } => {
            if *m < 2 {
                return Err(CliError::Usage("need m ≥ 2".into()));
            }
            commands::order_check(common.order()?.s, shape, *m)
        }
        Command::LocalizationCheck { geometry, l0, points, tol, .. } => {
            let g = match geometry.as_str() {
                "interval" => DomainGeometry::Interval { a: 0.0, b: 1.0 },
                "disk" => DomainGeometry::Disk { center: [0.0, 0.0], radius: 1.0 },
                _ => DomainGeometry::Rectangle { lo: [0.0, 0.0], hi: [1.0, 1.0] },
            };
            if *points == 0 {
                return Err(CliError::Usage("need at least one point".into()));
            }
            commands::localization_check(g, *l0, *points, *tol)
        }
        Command::Convert { a_coef, b_coef, a, b, .. } => commands::convert(*a_coef, *b_coef, *a, *b),
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Constants { common, .. }
        | Command::Kernels { common, .. }
        | Command::Layer { common, .. }
        | Command::VerifySquare { common, .. }
        | Command::VerifyHalfspace { common, .. }
        | Command::OrderCheck { common, .. }
        | Command::LocalizationCheck { common, .. }
        | Command::Convert { common, .. } => common,
    }
}

fn summary_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

fn plot_script(csv_path: &Path) -> String {
    format!(
        "import csv\nimport matplotlib.pyplot as plt\n\n\
         rows = [r for r in csv.DictReader(open({:?})) if r['t'] not in ('0', 'inf')]\n\
         t = [float(r['t']) for r in rows]\n\
         fig, ax = plt.subplots(1, 2, figsize=(10, 4))\n\
         ax[0].semilogx(t, [float(r['K']) for r in rows])\n\
         ax[0].set_xlabel('t'); ax[0].set_ylabel('K(t)')\n\
         ax[1].semilogx(t, [float(r['cumulative']) for r in rows])\n\
         ax[1].set_xlabel('t'); ax[1].set_ylabel('running integral of K')\n\
         fig.tight_layout()\nplt.show()\n",
        csv_path.display().to_string()
    )
}

fn emit(cmd: &Command, r: &Report) -> Result<(), CliError> {
    let c = common(cmd);
    let (main, side) = match (c.format, &r.table) {
        (Format::Json, _) => (report::to_json(r), None),
        (Format::Csv, None) => (report::records_csv(r)?, None),
        (Format::Csv, Some(t)) => (report::table_csv(t)?, Some(report::records_csv(r)?)),
    };
    match &c.output {
        Some(p) => {
            fs::write(p, main)?;
            if let Some(side) = side {
                fs::write(summary_path(p), side)?;
            }
            if let Command::Layer { plot_script: Some(sp), .. } = cmd {
                fs::write(sp, plot_script(p))?;
            }
        }
        None => {
            report::write_all(&mut io::stdout().lock(), &main)?;
            if let Some(side) = side {
                report::write_all(&mut io::stderr().lock(), &side)?;
            }
            if let Command::Layer { plot_script: Some(_), .. } = cmd {
                return Err(CliError::Usage("--plot-script needs --output".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|r| emit(&cli.command, &r).map(|_| r));
    match result {
        Ok(r) if r.passed() => ExitCode::SUCCESS,
        Ok(r) => {
            eprintln!("assertion failed: {}", report::summary_line(&r));
            ExitCode::from(4)
        }
        Err(CliError::Partial(r, e)) => {
            let code = CliError::Numerical(e.clone()).code();
            if let Err(w) = emit(&cli.command, &r) {
                eprintln!("error: {w}");
            }
            eprintln!("error: numerical failure: {e}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
