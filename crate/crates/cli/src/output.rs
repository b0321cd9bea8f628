//! CSV, SVG and JSON emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use num_complex::Complex64;
use serde::Serialize;

use sectionzeros::analysis::{Side, ZeroRecord};
use sectionzeros::curves::LimitCurve;

use crate::CliError;

pub const RECORD_HEADER: [&str; 8] =
    ["N", "re", "im", "side", "deviation", "predicted_deviation", "dist_to_curve", "excluded_reason"];

/// 17 significant digits in exponent form; parses back to the same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: impl Into<anyhow::Error>) -> CliError {
    CliError::Io(e.into().context(format!("writing {}", path.display())))
}

pub fn write_records<W: Write>(w: W, records: &[ZeroRecord]) -> anyhow::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RECORD_HEADER)?;
    for r in records {
        out.write_record([
            r.n.to_string(),
            fmt_f64(r.z.re),
            fmt_f64(r.z.im),
            r.side.as_str().to_string(),
            fmt_f64(r.deviation),
            fmt_f64(r.predicted_deviation),
            fmt_f64(r.dist_to_curve),
            r.excluded_reason.clone().unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_csv(path: &Path, records: &[ZeroRecord]) -> Result<(), CliError> {
    let f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    write_records(f, records).map_err(|e| io_err(path, e))
}

pub fn read_records(path: &Path) -> anyhow::Result<Vec<ZeroRecord>> {
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    anyhow::ensure!(header == RECORD_HEADER, "unexpected header {header:?}");
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        let f = |k: usize| -> anyhow::Result<f64> { Ok(row[k].parse::<f64>()?) };
        out.push(ZeroRecord {
            n: row[0].parse()?,
            z: Complex64::new(f(1)?, f(2)?),
            side: row[3].parse::<Side>().map_err(|e| anyhow::anyhow!("{e}"))?,
            deviation: f(4)?,
            predicted_deviation: f(5)?,
            dist_to_curve: f(6)?,
            excluded_reason: if row[7].is_empty() { None } else { Some(row[7].to_string()) },
        });
    }
    Ok(out)
}

/// Generic table with a fixed header.
pub fn emit_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let run = || -> anyhow::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    };
    run().map_err(|e| io_err(path, e))
}

pub fn emit_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// A zero drawn on the plot, tagged with its side.
#[derive(Debug, Clone, Copy)]
pub struct Marker {
    pub z: Complex64,
    pub side: Side,
}

fn side_color(side: Side) -> &'static str {
    match side {
        Side::Left => "#1f77b4",
        Side::Right => "#d62728",
        Side::Axis => "#2ca02c",
        Side::Excluded => "#7f7f7f",
    }
}

pub fn svg_string(curve: &LimitCurve, markers: &[Marker], annotations: &[String], timestamp: bool) -> String {
    let h = 2.2 / curve.c();
    let sw = h / 400.0;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        s.push_str(&format!("<!-- generated at unix time {secs} -->\n"));
    }
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"{} {} {} {}\">\n",
        -h,
        -h,
        2.0 * h,
        2.0 * h
    ));
    s.push_str(&format!("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", -h, -h, 2.0 * h, 2.0 * h));
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    let mut d = String::new();
    for (k, p) in curve.samples.iter().enumerate() {
        d.push_str(&format!("{}{:.6} {:.6} ", if k == 0 { "M" } else { "L" }, p.re, p.im));
    }
    d.push('Z');
    s.push_str(&format!("<path class=\"curve\" d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{sw}\"/>\n"));
    if let Some((p, q)) = curve.imag_segment {
        s.push_str(&format!(
            "<path class=\"axis-segment\" d=\"M{:.6} {:.6} L{:.6} {:.6}\" fill=\"none\" stroke=\"black\" stroke-width=\"{sw}\" stroke-dasharray=\"{} {}\"/>\n",
            p.re,
            p.im,
            q.re,
            q.im,
            4.0 * sw,
            2.0 * sw
        ));
    }
    if !markers.is_empty() {
        s.push_str("<g class=\"zeros\">\n");
        let r = h / 150.0;
        for m in markers {
            s.push_str(&format!(
                "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{r}\" fill=\"{}\"/>\n",
                m.z.re,
                m.z.im,
                side_color(m.side)
            ));
        }
        s.push_str("</g>\n");
    }
    s.push_str("</g>\n");
    for (k, a) in annotations.iter().enumerate() {
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>\n",
            -0.95 * h,
            -0.9 * h + k as f64 * 0.08 * h,
            0.06 * h,
            escape(a)
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_svg(
    path: &Path,
    curve: &LimitCurve,
    markers: &[Marker],
    annotations: &[String],
    timestamp: bool,
) -> Result<(), CliError> {
    fs::write(path, svg_string(curve, markers, annotations, timestamp)).map_err(|e| io_err(path, e))
}

/// `<stem>.manifest.json` next to `first`.
pub fn manifest_path_for(first: &Path) -> PathBuf {
    let stem = first.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    first.with_file_name(format!("{stem}.manifest.json"))
}
