//! Data behind each standard figure, with a JSON manifest that can
//! regenerate the file.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cir_core::regsums::sums_for_tol;
use cir_core::scattering::amplitudes_closed;
use cir_core::{Tolerance, WaveguideParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, Format, Grid, Output, SweepConfig, DEFAULT_TOLERANCE};
use crate::sweep::{self, fmt_f64, CirColumns};
use crate::AppError;

pub const FIGURE_IDS: [&str; 9] = ["2", "3a", "3b", "4a", "4b", "5", "6", "7a", "7b"];

const FIG_MOMENTUM: f64 = 0.0707;
const FIG2_MOMENTA: [f64; 2] = [0.0707, 7.07e-5];
const FIG2_SEPARATIONS: [f64; 3] = [0.01, 0.1, 0.5];
const FIG4_SEPARATION: f64 = 0.5;
const RATIO_WINDOW: Grid = Grid {
    lo: 0.05,
    hi: 6.0,
    count: 1191,
};
/// Wide enough to hold the odd and dual positions, which sit below zero.
const FIG4_WINDOW: Grid = Grid {
    lo: -2.0,
    hi: 6.0,
    count: 1601,
};
const SEPARATION_WINDOW: Grid = Grid {
    lo: 0.01,
    hi: 1.0,
    count: 100,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    TotalPlus,
    TotalMinus,
    Even,
    Odd,
    Dual,
}

impl Position {
    fn column(self) -> &'static str {
        CirColumns::NAMES[self.index()]
    }

    fn index(self) -> usize {
        match self {
            Position::TotalPlus => 0,
            Position::TotalMinus => 1,
            Position::Even => 2,
            Position::Odd => 3,
            Position::Dual => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Real,
    Imag,
}

/// Everything needed to regenerate one figure file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FigureSpec {
    /// Transmission curves over the ratio.
    Sweep { config: SweepConfig },
    /// Resonance positions against the half-separation.
    CirCurve {
        ka_perp: f64,
        a_half_sep: Grid,
        positions: Vec<Position>,
        tolerance: f64,
    },
    /// Parts of `1 + f_e`, `f_o` and `1 + f_e + f_o` over the ratio.
    Components {
        ka_perp: f64,
        a_half_sep: f64,
        ratio_range: Grid,
        part: Part,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub figure: String,
    pub file: String,
    pub spec: FigureSpec,
}

fn transmission_sweep(
    momenta: &[f64],
    separations: &[f64],
    ratio: Grid,
    outputs: Vec<Output>,
) -> FigureSpec {
    FigureSpec::Sweep {
        config: SweepConfig {
            ka_perp: momenta.to_vec(),
            a_half_sep: separations.to_vec(),
            ratio_range: ratio,
            outputs,
            format: Format::Csv,
            tolerance: DEFAULT_TOLERANCE,
        },
    }
}

fn cir_curve(position: Position) -> FigureSpec {
    FigureSpec::CirCurve {
        ka_perp: FIG_MOMENTUM,
        a_half_sep: SEPARATION_WINDOW,
        positions: vec![position],
        tolerance: DEFAULT_TOLERANCE,
    }
}

fn components(part: Part) -> FigureSpec {
    FigureSpec::Components {
        ka_perp: FIG_MOMENTUM,
        a_half_sep: FIG4_SEPARATION,
        ratio_range: RATIO_WINDOW,
        part,
        tolerance: DEFAULT_TOLERANCE,
    }
}

pub fn figure_spec(id: &str) -> Result<FigureSpec, ConfigError> {
    Ok(match id {
        "2" => transmission_sweep(
            &FIG2_MOMENTA,
            &FIG2_SEPARATIONS,
            RATIO_WINDOW,
            vec![Output::TTot],
        ),
        "3a" => cir_curve(Position::TotalPlus),
        "3b" => cir_curve(Position::Dual),
        "4a" => transmission_sweep(
            &[FIG_MOMENTUM],
            &[FIG4_SEPARATION],
            FIG4_WINDOW,
            vec![Output::TTot, Output::TE],
        ),
        "4b" => transmission_sweep(
            &[FIG_MOMENTUM],
            &[FIG4_SEPARATION],
            FIG4_WINDOW,
            vec![Output::TTot, Output::TO],
        ),
        "5" => cir_curve(Position::Even),
        "6" => cir_curve(Position::Odd),
        "7a" => components(Part::Real),
        "7b" => components(Part::Imag),
        other => return Err(ConfigError::UnknownFigure(other.to_string())),
    })
}

impl FigureSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let field = |name: &str, msg: String| ConfigError::Field {
            field: format!("spec.{name}"),
            message: msg,
        };
        let check = |k: f64, tol: f64| {
            if !(k > 0.0 && k < 2.0) {
                return Err(field("ka_perp", format!("{k} is outside (0, 2)")));
            }
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(field("tolerance", format!("{tol} must be positive")));
            }
            Ok(())
        };
        match self {
            FigureSpec::Sweep { config } => config.validate(),
            FigureSpec::CirCurve {
                ka_perp,
                a_half_sep,
                positions,
                tolerance,
            } => {
                check(*ka_perp, *tolerance)?;
                a_half_sep.validate("spec.a_half_sep")?;
                if !(a_half_sep.lo >= 0.0) {
                    return Err(field("a_half_sep.lo", "must be non-negative".into()));
                }
                if positions.is_empty() {
                    return Err(field("positions", "empty list".into()));
                }
                Ok(())
            }
            FigureSpec::Components {
                ka_perp,
                a_half_sep,
                ratio_range,
                tolerance,
                ..
            } => {
                check(*ka_perp, *tolerance)?;
                if !(*a_half_sep >= 0.0 && a_half_sep.is_finite()) {
                    return Err(field(
                        "a_half_sep",
                        format!("{a_half_sep} must be non-negative"),
                    ));
                }
                ratio_range.validate("spec.ratio_range")
            }
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            FigureSpec::Sweep { config } if config.format == Format::Json => "json",
            _ => "csv",
        }
    }

    /// Write the figure data. Fails only on I/O or when the whole
    /// computation breaks down.
    pub fn render<W: Write>(&self, out: W) -> Result<(), AppError> {
        match self {
            FigureSpec::Sweep { config } => {
                let rows = sweep::run_sweep(config);
                sweep::write_table(config, &rows, out)?;
            }
            FigureSpec::CirCurve {
                ka_perp,
                a_half_sep,
                positions,
                tolerance,
            } => {
                let rows: Vec<Vec<String>> = a_half_sep
                    .points()
                    .par_iter()
                    .map(|&a| {
                        let p = WaveguideParams::new(*ka_perp, a, 0.0)?;
                        let s = sums_for_tol(&p, Tolerance(*tolerance))?;
                        let values = CirColumns::compute(&p, &s).values();
                        let mut row = vec![fmt_f64(*ka_perp), fmt_f64(a)];
                        row.extend(
                            positions
                                .iter()
                                .map(|pos| values[pos.index()].map(fmt_f64).unwrap_or_default()),
                        );
                        Ok(row)
                    })
                    .collect::<Result<_, cir_core::Error>>()?;
                let mut header = vec!["ka_perp".to_string(), "a_over_aperp".to_string()];
                header.extend(positions.iter().map(|p| p.column().to_string()));
                sweep::write_csv(out, &header, rows.into_iter())?;
            }
            FigureSpec::Components {
                ka_perp,
                a_half_sep,
                ratio_range,
                part,
                tolerance,
            } => {
                let base = WaveguideParams::new(*ka_perp, *a_half_sep, 0.0)?;
                let s = sums_for_tol(&base, Tolerance(*tolerance))?;
                let rows: Vec<Vec<String>> = ratio_range
                    .points()
                    .par_iter()
                    .map(|&q| {
                        let f = amplitudes_closed(&base.with_inv_ratio(q)?, &s)?;
                        let cols = match part {
                            Part::Real => [1.0 + f.f_e.re, f.f_o.re, 1.0 + f.f_e.re + f.f_o.re],
                            Part::Imag => [f.f_e.im, f.f_o.im, f.f_e.im + f.f_o.im],
                        };
                        let mut row = vec![fmt_f64(q)];
                        row.extend(cols.iter().map(|&v| fmt_f64(v)));
                        Ok(row)
                    })
                    .collect::<Result<_, cir_core::Error>>()?;
                let header: Vec<String> = match part {
                    Part::Real => [
                        "aperp_over_a3d",
                        "one_plus_re_f_e",
                        "re_f_o",
                        "one_plus_re_f_e_plus_f_o",
                    ],
                    Part::Imag => ["aperp_over_a3d", "im_f_e", "im_f_o", "im_f_e_plus_f_o"],
                }
                .iter()
                .map(|s| s.to_string())
                .collect();
                sweep::write_csv(out, &header, rows.into_iter())?;
            }
        }
        Ok(())
    }
}

fn write_file(path: &Path, spec: &FigureSpec) -> Result<(), AppError> {
    let file = File::create(path).map_err(|e| AppError::io(path, e))?;
    let mut w = BufWriter::new(file);
    spec.render(&mut w)?;
    w.flush().map_err(|e| AppError::io(path, e))
}

/// Write `fig<id>.<ext>` and `fig<id>.manifest.json` into `dir`.
pub fn figure_data(id: &str, dir: &Path) -> Result<(PathBuf, PathBuf), AppError> {
    let spec = figure_spec(id)?;
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let file = format!("fig{id}.{}", spec.extension());
    let data_path = dir.join(&file);
    write_file(&data_path, &spec)?;
    let manifest = Manifest {
        artifact: "cir".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        figure: id.into(),
        file,
        spec,
    };
    let manifest_path = dir.join(format!("fig{id}.manifest.json"));
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&manifest_path, text + "\n").map_err(|e| AppError::io(&manifest_path, e))?;
    Ok((data_path, manifest_path))
}

/// Regenerate the file a manifest describes into `dir`.
pub fn replay(manifest_path: &Path, dir: &Path) -> Result<PathBuf, AppError> {
    let manifest: Manifest = crate::config::read_json(manifest_path)?;
    manifest.spec.validate()?;
    if manifest.version != env!("CARGO_PKG_VERSION") {
        log::warn!(
            "manifest written by cir {}, replaying with {}",
            manifest.version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let name = Path::new(&manifest.file)
        .file_name()
        .ok_or_else(|| ConfigError::Field {
            field: "file".into(),
            message: format!("{:?} is not a file name", manifest.file),
        })?;
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let path = dir.join(name);
    write_file(&path, &manifest.spec)?;
    Ok(path)
}
