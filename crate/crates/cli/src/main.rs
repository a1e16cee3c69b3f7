//! `cir`: sweeps, resonance positions, figure data and self-checks for the
//! two-center waveguide scattering model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod figures;
mod sweep;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cir_core::effective1d::g1d;
use cir_core::regsums::sums_for_tol;
use cir_core::scattering::{amplitudes_closed, transmissions};
use cir_core::{Complex64, Tolerance, WaveguideParams};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use config::{ConfigError, Format, Grid, Output, RawConfig, Scalars, DEFAULT_TOLERANCE};

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] cir_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0} verification check(s) failed")]
    Verify(usize),
}

impl From<io::Error> for AppError {
    fn from(source: io::Error) -> Self {
        AppError::Io {
            path: PathBuf::from("<output>"),
            source,
        }
    }
}

impl AppError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        AppError::Io {
            path: path.to_owned(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) | AppError::Io { .. } => 1,
            AppError::Numerical(_) => 2,
            AppError::Verify(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cir",
    version,
    about = "Atom scattering from two impurities in a harmonic waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitudes, fluxes and effective 1D couplings at one point.
    Amplitudes(PointArgs),
    /// Evaluate a grid of points and write a table.
    Sweep(SweepArgs),
    /// Closed-form resonance positions for one momentum and separation.
    Cir(PairArgs),
    /// Write the data behind a standard figure, plus a manifest.
    Figure {
        /// 2, 3a, 3b, 4a, 4b, 5, 6, 7a, 7b or all.
        id: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Regenerate a figure file from its manifest.
    Replay {
        manifest: PathBuf,
        /// Defaults to the manifest's directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the invariant and roundtrip checks.
    Verify {
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    ka_perp: f64,
    /// Half-separation a/a⊥.
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// a⊥/a₃D.
    #[arg(long, allow_hyphen_values = true)]
    ratio: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON file with SweepConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    ka_perp: Option<Vec<f64>>,
    /// Half-separations a/a⊥.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    /// lo:hi:count.
    #[arg(long, allow_hyphen_values = true)]
    ratio: Option<Grid>,
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<Output>>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Defaults to standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn scalars(v: Option<Vec<f64>>) -> Option<Scalars> {
    v.map(|mut v| {
        if v.len() == 1 {
            Scalars::One(v.remove(0))
        } else {
            Scalars::Many(v)
        }
    })
}

fn pair_params(
    args: &PairArgs,
    ratio: f64,
) -> Result<(WaveguideParams, cir_core::RegularizedSums), AppError> {
    if !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
        return Err(ConfigError::Field {
            field: "tolerance".into(),
            message: format!("{} must be positive", args.tolerance),
        }
        .into());
    }
    let p = WaveguideParams::new(args.ka_perp, args.a, ratio).map_err(|e| ConfigError::Field {
        field: "parameters".into(),
        message: e.to_string(),
    })?;
    let s = sums_for_tol(&p, Tolerance(args.tolerance))?;
    Ok((p, s))
}

fn complex(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn print_json(v: &serde_json::Value) -> Result<(), AppError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn amplitudes_cmd(args: &PointArgs) -> Result<(), AppError> {
    let (p, s) = pair_params(&args.pair, args.ratio)?;
    let f = amplitudes_closed(&p, &s)?;
    let t = transmissions(&f)?;
    let g = if p.is_single_center() {
        None
    } else {
        g1d(&p, &f).ok()
    };
    print_json(&json!({
        "ka_perp": p.ka_perp(),
        "a_over_aperp": p.a_half_sep(),
        "aperp_over_a3d": args.ratio,
        "f_e": complex(f.f_e),
        "f_o": complex(f.f_o),
        "T_tot": t.t_tot,
        "T_e": t.t_e,
        "T_o": t.t_o,
        "R": t.r,
        "g_plus": g.map(|g| complex(g.g_plus)),
        "g_minus": g.map(|g| complex(g.g_minus)),
    }))
}

fn cir_cmd(args: &PairArgs) -> Result<(), AppError> {
    let (p, s) = pair_params(args, 0.0)?;
    let c = sweep::CirColumns::compute(&p, &s);
    let mut map = serde_json::Map::new();
    map.insert("ka_perp".into(), json!(p.ka_perp()));
    map.insert("a_over_aperp".into(), json!(p.a_half_sep()));
    for (name, v) in sweep::CirColumns::NAMES.iter().zip(c.values()) {
        map.insert((*name).into(), json!(v));
    }
    print_json(&serde_json::Value::Object(map))
}

fn sweep_cmd(args: SweepArgs) -> Result<(), AppError> {
    let flags = RawConfig {
        ka_perp: scalars(args.ka_perp),
        a_half_sep: scalars(args.a),
        ratio_range: args.ratio,
        outputs: args.outputs,
        format: args.format,
        tolerance: args.tolerance,
    };
    let cfg = config::load_config(args.config.as_deref(), flags)?;
    let rows = sweep::run_sweep(&cfg);
    let flagged = rows.iter().filter(|r| r.flag != sweep::Flag::Ok).count();
    if flagged > 0 {
        log::info!("{flagged} of {} points flagged", rows.len());
    }
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| AppError::io(path, e))?;
            let mut w = BufWriter::new(file);
            sweep::write_table(&cfg, &rows, &mut w).map_err(|e| AppError::io(path, e))?;
            w.flush().map_err(|e| AppError::io(path, e))?;
        }
        None => sweep::write_table(&cfg, &rows, io::stdout().lock())?,
    }
    Ok(())
}

fn figure_cmd(id: &str, dir: &Path) -> Result<(), AppError> {
    let ids: Vec<&str> = if id == "all" {
        figures::FIGURE_IDS.to_vec()
    } else {
        vec![id]
    };
    for id in ids {
        let (data, manifest) = figures::figure_data(id, dir)?;
        println!("{} {}", data.display(), manifest.display());
    }
    Ok(())
}

fn verify_cmd(samples: usize, seed: u64) -> Result<(), AppError> {
    let checks = verify::run(samples, seed);
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    match checks.iter().filter(|c| !c.passed).count() {
        0 => Ok(()),
        n => Err(AppError::Verify(n)),
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Amplitudes(args) => amplitudes_cmd(&args),
        Command::Sweep(args) => sweep_cmd(args),
        Command::Cir(args) => cir_cmd(&args),
        Command::Figure { id, out_dir } => figure_cmd(&id, &out_dir),
        Command::Replay { manifest, out_dir } => {
            let dir = out_dir
                .unwrap_or_else(|| manifest.parent().map(Path::to_path_buf).unwrap_or_default());
            let path = figures::replay(&manifest, &dir)?;
            println!("{}", path.display());
            Ok(())
        }
        Command::Verify { samples, seed } => verify_cmd(samples, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
