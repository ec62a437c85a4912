//! Histograms, error sweeps and boundary-growth tables, with CSV, JSON and
//! SVG output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{digit_constant, digit_density};
use crate::error::{Error, Result};
use crate::lattice::{
    coprime_value, count_boundary, count_pairs, half_weight_histogram, mobius_sieve, CountValue, PairSupport,
    WeightScheme, DEFAULT_BRUTE_FORCE_CAP, DEFAULT_TABLE_CAP,
};
use crate::params::Params;
use crate::primes::{prime_half_weights, prime_pair_count, prime_sieve, theta_weighted_count, DEFAULT_SIEVE_GUARD};

/// Resource limits for the enumeration and table-building paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub brute_force_cap: u64,
    pub table_cap: u64,
    pub sieve_guard: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { brute_force_cap: DEFAULT_BRUTE_FORCE_CAP, table_cap: DEFAULT_TABLE_CAP, sieve_guard: DEFAULT_SIEVE_GUARD }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HistogramParams {
    pub base: u64,
    pub position: u32,
    pub bound: u64,
}

/// Per-digit counts for one `(T, b, i)` and weight scheme.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub params: HistogramParams,
    pub scheme: WeightScheme,
    pub bins: Vec<CountValue>,
    /// `bins[r] / Σ bins`.
    pub normalized: Vec<f64>,
    /// `c(b, r; i)`. Normalizing cancels `ζ(2)`, so coprime histograms use
    /// the same overlay.
    pub overlay: Vec<f64>,
}

impl Histogram {
    pub fn total(&self) -> CountValue {
        match self.bins.first() {
            Some(CountValue::Exact(_)) => CountValue::Exact(self.bins.iter().filter_map(|v| v.exact()).sum()),
            Some(CountValue::HalfUnits(_)) => CountValue::HalfUnits(
                self.bins.iter().map(|v| if let CountValue::HalfUnits(h) = v { *h } else { 0 }).sum(),
            ),
            _ => CountValue::Real(self.bins.iter().map(CountValue::as_f64).sum()),
        }
    }
}

fn normalize(bins: &[CountValue]) -> Vec<f64> {
    let exact: Option<Vec<u128>> = bins
        .iter()
        .map(|v| match *v {
            CountValue::Exact(x) | CountValue::HalfUnits(x) => Some(x),
            CountValue::Real(_) => None,
        })
        .collect();
    match exact {
        Some(units) => {
            let total: u128 = units.iter().sum();
            units.iter().map(|&u| if total == 0 { 0.0 } else { u as f64 / total as f64 }).collect()
        }
        None => {
            let total: f64 = bins.iter().map(CountValue::as_f64).sum();
            bins.iter().map(|v| if total == 0.0 { 0.0 } else { v.as_f64() / total }).collect()
        }
    }
}

/// Fills one bin per digit with the count selected by `scheme`.
pub fn make_histogram(bound: u64, base: u64, position: u32, scheme: WeightScheme, limits: &Limits) -> Result<Histogram> {
    let first = Params::new(base, 0, position, bound)?;
    let digits: Vec<Params> = (0..base).map(|r| first.with_digit(r)).collect::<Result<_>>()?;
    let exact = |v: u128| CountValue::Exact(v);
    let bins: Vec<CountValue> = match scheme {
        WeightScheme::AllPairs => digits
            .par_iter()
            .map(|p| Ok(count_pairs(p)?.value))
            .collect::<Result<_>>()?,
        WeightScheme::Coprime => {
            let mobius = mobius_sieve(bound, limits.table_cap)?;
            digits.par_iter().map(|p| Ok(exact(coprime_value(p, &mobius)?))).collect::<Result<_>>()?
        }
        WeightScheme::PrimeLogWeights { exclude_diagonal } | WeightScheme::PrimeCount { exclude_diagonal } => {
            let table = prime_sieve(bound.max(2), limits.sieve_guard)?;
            let weighted = matches!(scheme, WeightScheme::PrimeLogWeights { .. });
            digits
                .par_iter()
                .map(|p| {
                    Ok(if weighted {
                        theta_weighted_count(p, exclude_diagonal, &table)?.value
                    } else {
                        prime_pair_count(p, exclude_diagonal, &table)?.value
                    })
                })
                .collect::<Result<_>>()?
        }
        WeightScheme::HalfBoundary { support } => {
            let halves = match support {
                PairSupport::Primes { exclude_diagonal } => {
                    if bound > limits.brute_force_cap {
                        return Err(Error::ResourceGuard {
                            what: "brute-force bound T",
                            requested: bound,
                            limit: limits.brute_force_cap,
                        });
                    }
                    let table = prime_sieve(bound.max(2), limits.sieve_guard)?;
                    prime_half_weights(base, position, bound, exclude_diagonal, &table)?
                }
                _ => half_weight_histogram(base, position, bound, support, limits.brute_force_cap)?,
            };
            halves.into_iter().map(CountValue::HalfUnits).collect()
        }
    };
    let overlay = (0..base)
        .map(|r| Ok(digit_constant::<f64>(base, r, position)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(Histogram {
        params: HistogramParams { base, position, bound },
        scheme,
        normalized: normalize(&bins),
        bins,
        overlay,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DigitParams {
    pub base: u64,
    pub digit: u64,
    pub position: u32,
}

/// One row of an error sweep: `Φ(T)` against `c·T²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub t: u64,
    pub phi: u128,
    pub c_t2: f64,
    pub residual: f64,
    /// `residual / (T ln T)`; undefined at `T = 1`.
    pub scaled_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub params: DigitParams,
    pub constant: f64,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn max_scaled_residual(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.scaled_residual).map(f64::abs).reduce(f64::max)
    }
}

fn check_ascending(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::range("grid is empty"));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::range("grid must be ascending"));
    }
    Ok(())
}

fn t_log_t(t: u64) -> Option<f64> {
    (t >= 2).then(|| t as f64 * (t as f64).ln())
}

/// Exact `Φ(T)` and its deviation from `c(b, r; i)·T²` along a grid of `T`.
pub fn error_sweep(base: u64, digit: u64, position: u32, grid: &[u64]) -> Result<Sweep> {
    check_ascending(grid)?;
    let c = digit_constant::<f64>(base, digit, position)?.value;
    let rows = grid
        .par_iter()
        .map(|&t| {
            let params = Params::new(base, digit, position, t)?;
            let phi = count_pairs(&params)?.value.exact().expect("all-pairs counts are exact");
            let c_t2 = c * (t as f64) * (t as f64);
            let residual = phi as f64 - c_t2;
            Ok(SweepRow { t, phi, c_t2, residual, scaled_residual: t_log_t(t).map(|s| residual / s) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { params: DigitParams { base, digit, position }, constant: c, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRow {
    #[serde(rename = "T")]
    pub t: u64,
    pub boundary_count: u128,
    /// `count / (((b, r)/b) · T ln T)`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub params: DigitParams,
    pub rows: Vec<BoundaryRow>,
}

impl BoundaryReport {
    /// Largest over smallest ratio across the grid.
    pub fn spread(&self) -> Option<f64> {
        let ratios: Vec<f64> = self.rows.iter().filter_map(|r| r.ratio).collect();
        let hi = ratios.iter().copied().reduce(f64::max)?;
        let lo = ratios.iter().copied().reduce(f64::min)?;
        Some(hi / lo)
    }
}

/// Boundary counts `#{b·{n/m} = r}` against `((b, r)/b)·T ln T` (first digit).
pub fn boundary_growth_report(base: u64, digit: u64, grid: &[u64]) -> Result<BoundaryReport> {
    check_ascending(grid)?;
    let mut g = (base, digit);
    while g.1 != 0 {
        g = (g.1, g.0 % g.1);
    }
    let share = g.0 as f64 / base as f64;
    let rows = grid
        .par_iter()
        .map(|&t| {
            let count = count_boundary(&Params::new(base, digit, 1, t)?, None)?;
            Ok(BoundaryRow { t, boundary_count: count, ratio: t_log_t(t).map(|s| count as f64 / (share * s)) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryReport { params: DigitParams { base, digit, position: 1 }, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::range(format!("unknown format {other:?} (expected csv, json or svg)"))),
        }
    }
}

/// Serializable experiment output.
pub trait Report {
    fn to_csv(&self) -> String;
    fn to_json(&self) -> Result<String>;
    fn to_svg(&self) -> Result<String> {
        Err(Error::Unsupported("SVG output is available for histograms only".into()))
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
            Format::Svg => self.to_svg(),
        }
    }
}

/// Writes `report` to `path` in the requested format.
pub fn emit(report: &impl Report, format: Format, path: &Path) -> Result<()> {
    let body = report.render(format)?;
    fs::write(path, body).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

const JSON_SAFE_INTEGER: u128 = 1 << 53;

fn json_guard(values: impl IntoIterator<Item = u128>) -> Result<()> {
    match values.into_iter().find(|&v| v > JSON_SAFE_INTEGER) {
        Some(v) => Err(Error::range(format!("count {v} exceeds 2^53 and cannot be written as a JSON number"))),
        None => Ok(()),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::range(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct BinRecord {
    digit: u64,
    count: CountValue,
    normalized: f64,
    constant: f64,
}

#[derive(Serialize)]
struct Envelope<'a, P: Serialize, R: Serialize> {
    params: &'a P,
    scheme: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bins: Option<Vec<R>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<&'a [R]>,
}

impl Report for Histogram {
    fn to_csv(&self) -> String {
        let mut s = String::from("digit,count,normalized,constant\n");
        for (r, ((count, norm), c)) in self.bins.iter().zip(&self.normalized).zip(&self.overlay).enumerate() {
            let _ = writeln!(s, "{r},{count},{norm},{c}");
        }
        s
    }

    fn to_json(&self) -> Result<String> {
        json_guard(self.bins.iter().filter_map(|v| match *v {
            CountValue::Exact(x) => Some(x),
            CountValue::HalfUnits(x) => Some(x / 2),
            CountValue::Real(_) => None,
        }))?;
        let bins = self
            .bins
            .iter()
            .zip(&self.normalized)
            .zip(&self.overlay)
            .enumerate()
            .map(|(r, ((&count, &normalized), &constant))| BinRecord { digit: r as u64, count, normalized, constant })
            .collect();
        json(&Envelope::<_, BinRecord> {
            params: &self.params,
            scheme: self.scheme.to_string(),
            constant: None,
            bins: Some(bins),
            rows: None,
        })
    }

    fn to_svg(&self) -> Result<String> {
        histogram_svg(self)
    }
}

impl Report for Sweep {
    fn to_csv(&self) -> String {
        let mut s = String::from("T,phi,c_T2,residual,scaled_residual\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.t, r.phi, r.c_t2, r.residual, opt(r.scaled_residual));
        }
        s
    }

    fn to_json(&self) -> Result<String> {
        json_guard(self.rows.iter().map(|r| r.phi))?;
        json(&Envelope::<_, SweepRow> {
            params: &self.params,
            scheme: WeightScheme::AllPairs.to_string(),
            constant: Some(self.constant),
            bins: None,
            rows: Some(&self.rows),
        })
    }
}

impl Report for BoundaryReport {
    fn to_csv(&self) -> String {
        let mut s = String::from("T,boundary_count,ratio\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{}", r.t, r.boundary_count, opt(r.ratio));
        }
        s
    }

    fn to_json(&self) -> Result<String> {
        json_guard(self.rows.iter().map(|r| r.boundary_count))?;
        json(&Envelope::<_, BoundaryRow> {
            params: &self.params,
            scheme: "boundary".into(),
            constant: None,
            bins: None,
            rows: Some(&self.rows),
        })
    }
}

fn histogram_svg(h: &Histogram) -> Result<String> {
    const WIDTH: f64 = 720.0;
    const HEIGHT: f64 = 420.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    const SAMPLES_PER_DIGIT: u64 = 8;

    let b = h.params.base;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let slot = plot_w / b as f64;

    let mut curve = Vec::new();
    for j in 0..=(b - 1) * SAMPLES_PER_DIGIT {
        let r = j as f64 / SAMPLES_PER_DIGIT as f64;
        curve.push((r, digit_density(b, r, h.params.position)?));
    }
    let top = h
        .normalized
        .iter()
        .chain(&h.overlay)
        .chain(curve.iter().map(|(_, v)| v))
        .copied()
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE)
        * 1.1;
    let x_at = |r: f64| LEFT + (r + 0.5) * slot;
    let y_at = |v: f64| TOP + plot_h * (1.0 - v / top);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{} T={} b={} i={}</text>"#,
        WIDTH / 2.0,
        h.scheme,
        h.params.bound,
        b,
        h.params.position
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#, TOP + plot_h);
    for tick in 0..=4 {
        let v = top * tick as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{:.4}</text>"#,
            LEFT - 4.0,
            y_at(v) + 3.0,
            v
        );
    }
    let _ = writeln!(s, r##"<g fill="#4878a8">"##);
    for (r, &v) in h.normalized.iter().enumerate() {
        let y = y_at(v);
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
            LEFT + r as f64 * slot + slot * 0.1,
            y,
            slot * 0.8,
            TOP + plot_h - y
        );
    }
    let _ = writeln!(s, "</g>");
    let points: Vec<String> = curve.iter().map(|&(r, v)| format!("{:.2},{:.2}", x_at(r), y_at(v))).collect();
    let _ = writeln!(s, r##"<polyline fill="none" stroke="#c03030" stroke-width="1.5" points="{}"/>"##, points.join(" "));
    let _ = writeln!(s, r##"<g fill="#c03030">"##);
    for (r, &c) in h.overlay.iter().enumerate() {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, x_at(r as f64), y_at(c));
    }
    let _ = writeln!(s, "</g>");
    let label_every = (b as usize).div_ceil(30).max(1);
    for r in (0..b as usize).step_by(label_every) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{r}</text>"#,
            x_at(r as f64),
            TOP + plot_h + 14.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">digit r</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
