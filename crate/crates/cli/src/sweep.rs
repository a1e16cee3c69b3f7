//! Grid evaluation and table output.

use std::io::Write;

use cir_core::cir::{cir_dual, cir_even, cir_odd, cir_total};
use cir_core::effective1d::g1d;
use cir_core::regsums::sums_for_tol;
use cir_core::scattering::{amplitudes_closed, transmissions};
use cir_core::{Complex64, Error, RegularizedSums, Tolerance, WaveguideParams};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{Format, Output, SweepConfig};

pub const GENERATED_BY: &str = concat!("# generated by cir ", env!("CARGO_PKG_VERSION"));

pub const BASE_COLUMNS: [&str; 8] = [
    "ka_perp",
    "a_over_aperp",
    "aperp_over_a3d",
    "T_tot",
    "T_e",
    "T_o",
    "R",
    "flag",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Ok,
    Resonance,
    IllCond,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Resonance => "resonance",
            Flag::IllCond => "illcond",
        }
    }
}

/// Closed-form resonance positions for one `(ka⊥, a)` pair; `None` where a
/// position is undefined.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CirColumns {
    pub total_plus: Option<f64>,
    pub total_minus: Option<f64>,
    pub even: Option<f64>,
    pub odd: Option<f64>,
    pub dual: Option<f64>,
}

impl CirColumns {
    pub const NAMES: [&'static str; 5] = [
        "cir_total_plus",
        "cir_total_minus",
        "cir_even",
        "cir_odd",
        "cir_dual",
    ];

    pub fn compute(p: &WaveguideParams, s: &RegularizedSums) -> Self {
        let total = cir_total(p, s).ok();
        CirColumns {
            total_plus: total.and_then(|t| t.plus),
            total_minus: total.and_then(|t| t.minus),
            even: cir_even(p, s).ok(),
            odd: cir_odd(p, s).ok(),
            dual: cir_dual(p, s).ok(),
        }
    }

    pub fn values(&self) -> [Option<f64>; 5] {
        [
            self.total_plus,
            self.total_minus,
            self.even,
            self.odd,
            self.dual,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub ka_perp: f64,
    pub a_half_sep: f64,
    pub inv_ratio: f64,
    /// `[T_tot, T_e, T_o, R]`.
    pub fluxes: Option<[f64; 4]>,
    pub f_e: Option<Complex64>,
    pub f_o: Option<Complex64>,
    pub g: Option<(Complex64, Complex64)>,
    pub cir: CirColumns,
    pub flag: Flag,
}

fn classify(e: &Error) -> Flag {
    match e {
        Error::AtResonance { .. } => Flag::Resonance,
        _ => Flag::IllCond,
    }
}

fn evaluate(p: &WaveguideParams, s: &RegularizedSums, cir: CirColumns) -> SweepRow {
    let mut row = SweepRow {
        ka_perp: p.ka_perp(),
        a_half_sep: p.a_half_sep(),
        inv_ratio: p.coupling().inv_ratio().unwrap_or(f64::NAN),
        fluxes: None,
        f_e: None,
        f_o: None,
        g: None,
        cir,
        flag: Flag::Ok,
    };
    let f = match amplitudes_closed(p, s) {
        Ok(f) => f,
        Err(e) => {
            log::debug!("point {p:?}: {e}");
            row.flag = classify(&e);
            return row;
        }
    };
    match transmissions(&f) {
        Ok(t) => row.fluxes = Some([t.t_tot, t.t_e, t.t_o, t.r]),
        Err(e) => {
            log::debug!("point {p:?}: {e}");
            row.flag = classify(&e);
            return row;
        }
    }
    row.f_e = Some(f.f_e);
    row.f_o = Some(f.f_o);
    if p.is_single_center() {
        return row;
    }
    match g1d(p, &f) {
        Ok(g) => row.g = Some((g.g_plus, g.g_minus)),
        Err(e) => row.flag = classify(&e),
    }
    row
}

/// Evaluate every grid point, in parallel, returned in grid order
/// (`ka⊥` outermost, then `a`, then the ratio).
pub fn run_sweep(cfg: &SweepConfig) -> Vec<SweepRow> {
    let tol = Tolerance(cfg.tolerance);
    let ratios = cfg.ratio_range.points();
    let pairs: Vec<(f64, f64)> = cfg
        .ka_perp
        .iter()
        .flat_map(|&k| cfg.a_half_sep.iter().map(move |&a| (k, a)))
        .collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(k, a)| {
            let base = WaveguideParams::new(k, a, 0.0).expect("validated config");
            let sums = sums_for_tol(&base, tol);
            let cir = match &sums {
                Ok(s) => CirColumns::compute(&base, s),
                Err(_) => CirColumns::default(),
            };
            ratios
                .iter()
                .map(|&q| {
                    let p = base.with_inv_ratio(q).expect("finite ratio");
                    match &sums {
                        Ok(s) => evaluate(&p, s, cir),
                        Err(e) => SweepRow {
                            ka_perp: k,
                            a_half_sep: a,
                            inv_ratio: q,
                            fluxes: None,
                            f_e: None,
                            f_o: None,
                            g: None,
                            cir,
                            flag: classify(e),
                        },
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn cell(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn complex_cells(z: Option<Complex64>) -> [String; 2] {
    [cell(z.map(|z| z.re)), cell(z.map(|z| z.im))]
}

pub fn columns(cfg: &SweepConfig) -> Vec<String> {
    let mut cols: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    for (o, names) in [
        (Output::FE, &["f_e_re", "f_e_im"][..]),
        (Output::FO, &["f_o_re", "f_o_im"][..]),
        (
            Output::G1d,
            &["g_plus_re", "g_plus_im", "g_minus_re", "g_minus_im"][..],
        ),
        (Output::Cir, &CirColumns::NAMES[..]),
    ] {
        if cfg.wants(o) {
            cols.extend(names.iter().map(|s| s.to_string()));
        }
    }
    cols
}

fn cells(cfg: &SweepConfig, row: &SweepRow) -> Vec<String> {
    let flux = |i: usize| cell(row.fluxes.map(|f| f[i]));
    let mut out = vec![
        fmt_f64(row.ka_perp),
        fmt_f64(row.a_half_sep),
        fmt_f64(row.inv_ratio),
        flux(0),
        flux(1),
        flux(2),
        flux(3),
        row.flag.as_str().to_string(),
    ];
    if cfg.wants(Output::FE) {
        out.extend(complex_cells(row.f_e));
    }
    if cfg.wants(Output::FO) {
        out.extend(complex_cells(row.f_o));
    }
    if cfg.wants(Output::G1d) {
        out.extend(complex_cells(row.g.map(|g| g.0)));
        out.extend(complex_cells(row.g.map(|g| g.1)));
    }
    if cfg.wants(Output::Cir) {
        out.extend(row.cir.values().iter().map(|&v| cell(v)));
    }
    out
}

/// Write a CSV table preceded by the version line.
pub fn write_csv<W: Write>(
    out: W,
    header: &[String],
    rows: impl Iterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut out = out;
    writeln!(out, "{GENERATED_BY}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

fn json_value(s: String) -> Value {
    if s.is_empty() {
        return Value::Null;
    }
    match s.parse::<f64>() {
        Ok(x) => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
        Err(_) => Value::String(s),
    }
}

pub fn write_table<W: Write>(cfg: &SweepConfig, rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let header = columns(cfg);
    match cfg.format {
        Format::Csv => write_csv(out, &header, rows.iter().map(|r| cells(cfg, r))),
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let map: Map<String, Value> = header
                        .iter()
                        .cloned()
                        .zip(cells(cfg, r).into_iter().map(json_value))
                        .collect();
                    Value::Object(map)
                })
                .collect();
            let doc = serde_json::json!({
                "generated_by": GENERATED_BY.trim_start_matches("# generated by ").to_string(),
                "columns": header,
                "rows": records,
            });
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)
        }
    }
}
