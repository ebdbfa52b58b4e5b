//! Result emission: CSV tables, a JSON document with full provenance, an
//! SVG line chart, and grayscale beam PNGs.
//!
//! All float formatting uses the shortest round-trip representation, so a
//! given result always serializes to the same bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sweep::{BeamImageResult, CurveResult, SweepResult};

/// Output format selection, parsed from strings like `csv,json,svg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormatSet {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl FormatSet {
    pub fn all() -> Self {
        Self {
            csv: true,
            json: true,
            svg: true,
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let mut set = Self {
            csv: false,
            json: false,
            svg: false,
        };
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "csv" => set.csv = true,
                "json" => set.json = true,
                "svg" => set.svg = true,
                other => {
                    return Err(Error::Config(format!(
                        "unknown output format '{other}' (expected csv, json, svg)"
                    )))
                }
            }
        }
        if set == (Self { csv: false, json: false, svg: false }) {
            return Err(Error::Config("no output formats selected".into()));
        }
        Ok(set)
    }
}

/// Writes the selected formats under `out_dir` with the given file stem and
/// returns the created paths.
pub fn emit(
    result: &SweepResult,
    out_dir: &Path,
    stem: &str,
    formats: FormatSet,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    if formats.csv {
        for curve in &result.curves {
            let path = out_dir.join(format!("{stem}_{}.csv", slug(&curve.label)));
            let mut file = fs::File::create(&path)?;
            file.write_all(curve_csv_string(curve).as_bytes())?;
            written.push(path);
        }
    }
    if formats.json {
        let path = out_dir.join(format!("{stem}.json"));
        fs::write(&path, result_json_string(result)?)?;
        written.push(path);
    }
    if formats.svg {
        let path = out_dir.join(format!("{stem}.svg"));
        fs::write(&path, result_svg_string(result))?;
        written.push(path);
    }
    Ok(written)
}

/// File-name-safe slug of a curve label.
pub fn slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut last_was_sep = true;
    for ch in label.chars() {
        if ch.is_ascii_alphanumeric() || ch == '.' {
            out.push(ch.to_ascii_lowercase());
            last_was_sep = false;
        } else if !last_was_sep {
            out.push('_');
            last_was_sep = true;
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    out
}

/// One curve as CSV: a header row, then one row per abscissa point with the
/// mean, the standard error, and every trial column. LF line endings.
pub fn curve_csv_string(curve: &CurveResult) -> String {
    let trials = curve.per_trial.len();
    let mut out = String::new();
    out.push_str(&curve.abscissa_name);
    out.push_str(",mean,stderr");
    for t in 0..trials {
        let _ = write!(out, ",trial_{t}");
    }
    out.push('\n');
    for k in 0..curve.abscissa.len() {
        let _ = write!(out, "{},{},{}", curve.abscissa[k], curve.mean[k], curve.stderr[k]);
        for row in &curve.per_trial {
            let _ = write!(out, ",{}", row[k]);
        }
        out.push('\n');
    }
    out
}

/// The whole result (configuration echo, seeds, curves) as one JSON
/// document. Numeric fields survive a parse round trip bit-exactly.
pub fn result_json_string(result: &SweepResult) -> Result<String> {
    let mut text = serde_json::to_string_pretty(result)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

const SVG_WIDTH: f64 = 860.0;
const SVG_HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let abs = v.abs();
    if !(1e-3..1e4).contains(&abs) {
        return format!("{v:.2e}");
    }
    let mut s = format!("{v:.4}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        s.pop();
    }
    s
}

/// Standalone SVG 1.1 line chart: one polyline per curve, linear axes with
/// labeled ticks, legend on the right.
pub fn result_svg_string(result: &SweepResult) -> String {
    let curves = &result.curves;
    let xs: Vec<f64> = curves.iter().flat_map(|c| c.abscissa.iter().copied()).collect();
    let ys: Vec<f64> = curves.iter().flat_map(|c| c.mean.iter().copied()).collect();
    let (x_min, x_max) = padded_range(&xs);
    let (y_min, y_max) = padded_range(&ys);

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let map_x = |v: f64| MARGIN_LEFT + (v - x_min) / (x_max - x_min) * plot_w;
    let map_y = |v: f64| MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="#ffffff"/>"##
    );

    // Axes frame.
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#000000" stroke-width="1"/>"##
    );

    // Ticks and grid.
    let ticks = 5usize;
    for i in 0..=ticks {
        let f = i as f64 / ticks as f64;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let xp = map_x(xv);
        let yp = map_y(yv);
        let _ = writeln!(
            svg,
            r##"<line x1="{xp}" y1="{}" x2="{xp}" y2="{}" stroke="#000000" stroke-width="1"/>"##,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{xp}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 20.0,
            fmt_tick(xv)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{yp}" x2="{}" y2="{yp}" stroke="#000000" stroke-width="1"/>"##,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 9.0,
            yp + 4.0,
            fmt_tick(yv)
        );
    }

    // Axis labels from the first curve (all curves of a run share them).
    if let Some(first) = curves.first() {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            SVG_HEIGHT - 14.0,
            xml_escape(&first.abscissa_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            xml_escape(&first.ordinate_label)
        );
    }

    for (ci, curve) in curves.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let points: Vec<String> = curve
            .abscissa
            .iter()
            .zip(&curve.mean)
            .map(|(&x, &y)| format!("{:.2},{:.2}", map_x(x), map_y(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = MARGIN_TOP + 16.0 + 20.0 * ci as f64;
        let lx = MARGIN_LEFT + plot_w + 14.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 22.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" font-size="12">{}</text>"#,
            lx + 28.0,
            xml_escape(&curve.label)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        return (min - 1.0, max + 1.0);
    }
    let pad = 0.05 * (max - min);
    (min - pad, max + pad)
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes one 8-bit grayscale PNG per rendered beam and returns the paths.
pub fn write_beam_images(
    images: &[BeamImageResult],
    out_dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for img in images {
        let g = img.grid.samples_per_axis() as u32;
        let mut buffer = image::GrayImage::new(g, g);
        for (i, pixel) in img.pixels.iter().enumerate() {
            let level = (pixel.clamp(0.0, 1.0) * 255.0).round() as u8;
            let (x, y) = (i as u32 % g, i as u32 / g);
            buffer.put_pixel(x, y, image::Luma([level]));
        }
        let path = out_dir.join(format!("{stem}_trial{}.png", img.trial));
        buffer.save(&path)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_delay_sweep, GridSpec, SweepConfig, SweepKind};
    use crate::units::DelaySpec;

    fn small_result() -> SweepResult {
        let mut config = SweepConfig::new(SweepKind::DelayRayleigh);
        config.n_highest = vec![1, 2];
        config.delays = vec![
            DelaySpec::rayleigh_units(0.0).unwrap(),
            DelaySpec::rayleigh_units(0.5).unwrap(),
            DelaySpec::rayleigh_units(1.0).unwrap(),
        ];
        config.trials = 3;
        config.master_seed = 5;
        config.grid = Some(GridSpec {
            samples_per_axis: Some(128),
            half_extent: None,
        });
        run_delay_sweep(&config).unwrap()
    }

    #[test]
    fn csv_has_header_plus_one_row_per_point() {
        let result = small_result();
        let text = curve_csv_string(&result.curves[0]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 3);
        assert_eq!(lines[0], "delay_zr,mean,stderr,trial_0,trial_1,trial_2");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_round_trips_bit_exactly() {
        let result = small_result();
        let text = result_json_string(&result).unwrap();
        let parsed: SweepResult = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.meta.master_seed, result.meta.master_seed);
        assert_eq!(parsed.meta.child_seeds, result.meta.child_seeds);
        for (a, b) in parsed.curves.iter().zip(&result.curves) {
            for (x, y) in a.mean.iter().zip(&b.mean) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            for (row_a, row_b) in a.per_trial.iter().zip(&b.per_trial) {
                for (x, y) in row_a.iter().zip(row_b) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }

    #[test]
    fn svg_contains_a_polyline_per_curve() {
        let result = small_result();
        let svg = result_svg_string(&result);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("path difference (z_R)"));
        assert!(svg.contains("visibility"));
    }

    #[test]
    fn emit_writes_the_selected_files() {
        let result = small_result();
        let dir = tempfile::tempdir().unwrap();
        let files = emit(&result, dir.path(), "run", FormatSet::all()).unwrap();
        assert_eq!(files.len(), 4); // two CSVs, one JSON, one SVG
        for f in &files {
            assert!(f.exists());
        }
    }

    #[test]
    fn format_parsing() {
        assert_eq!(
            FormatSet::parse("csv,svg").unwrap(),
            FormatSet {
                csv: true,
                json: false,
                svg: true
            }
        );
        assert!(FormatSet::parse("csv,bogus").is_err());
        assert!(FormatSet::parse("").is_err());
    }

    #[test]
    fn slugs_are_path_safe() {
        assert_eq!(slug("N=10"), "n_10");
        assert_eq!(slug("w0=1.85mm"), "w0_1.85mm");
        assert_eq!(slug("NA=0.2 a=25um parabolic"), "na_0.2_a_25um_parabolic");
    }
}
