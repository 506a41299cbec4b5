//! CSV, SVG and PGM writers. CSV files start with `#` comment lines.

use std::fmt::Write as _;

use crate::classical::{mask_to_hex, DamageStep};
use crate::error::{Error, Result};
use crate::experiments::EnsembleResult;
use crate::pauliframe::{DistanceSeries, Pauli};
use crate::statevec::SpectrumReport;

/// Prefixes each line with `# `.
pub fn comment_header(lines: &[String]) -> String {
    lines.iter().fold(String::new(), |mut s, l| {
        for part in l.lines() {
            let _ = writeln!(s, "# {part}");
        }
        s
    })
}

fn write_csv(
    header: &[String],
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    let body = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 csv");
    comment_header(header) + &body
}

/// Columns `t, mask, distance`; `t` counts steps from 1.
pub fn damage_csv(header: &[String], series: &[DamageStep]) -> String {
    write_csv(
        header,
        &["t", "mask", "distance"],
        series
            .iter()
            .enumerate()
            .map(|(t, s)| vec![(t + 1).to_string(), s.mask_hex(), s.distance.to_string()]),
    )
}

/// Frame series with the same leading columns as [`damage_csv`], plus the
/// sign and the full frame. Row `t = 0` is the initial frame.
pub fn frame_series_csv(header: &[String], series: &DistanceSeries) -> String {
    write_csv(
        header,
        &["t", "mask", "distance", "sign", "frame"],
        series.all_frames().enumerate().map(|(t, f)| {
            let mask: Vec<bool> = f.visible().iter().map(|p| !p.is_identity()).collect();
            let frame = f.to_string();
            vec![
                t.to_string(),
                mask_to_hex(&mask),
                f.hamming().to_string(),
                f.sign().to_string(),
                frame[1..].to_string(),
            ]
        }),
    )
}

/// One row per eigenvalue; `L` is empty when no root of unity was found.
pub fn spectrum_csv(header: &[String], report: &SpectrumReport) -> String {
    write_csv(
        header,
        &["re", "im", "phase", "degeneracy", "L"],
        report.eigenphases.iter().map(|e| {
            vec![
                format!("{:.15e}", e.value.re),
                format!("{:.15e}", e.value.im),
                format!("{:.15e}", e.phase),
                report.clusters[e.cluster].degeneracy.to_string(),
                e.root.map(|r| r.l.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

/// Visible labels per step, coded I=0, X=1, Y=2, Z=3.
pub fn pattern_csv(header: &[String], rows: &[Vec<u8>]) -> String {
    let n = rows.first().map_or(0, Vec::len);
    let names: Vec<String> = std::iter::once("t".to_string())
        .chain((0..n).map(|i| format!("q{i}")))
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    write_csv(
        header,
        &names,
        rows.iter().enumerate().map(|(t, r)| {
            std::iter::once(t.to_string())
                .chain(r.iter().map(u8::to_string))
                .collect()
        }),
    )
}

pub fn frame_pattern(series: &DistanceSeries) -> Vec<Vec<u8>> {
    series
        .all_frames()
        .map(|f| f.visible().iter().map(|p| p.code()).collect())
        .collect()
}

/// Damage masks as a pattern: 1 (X) where the trajectories differ.
pub fn damage_pattern(series: &[DamageStep]) -> Vec<Vec<u8>> {
    series
        .iter()
        .map(|s| s.mask.iter().map(|&m| u8::from(m)).collect())
        .collect()
}

/// Columns `n, mode, mean, stderr, timeMax, realizations, steps, seed`.
pub fn ensemble_csv(header: &[String], results: &[&EnsembleResult]) -> String {
    write_csv(
        header,
        &[
            "n",
            "mode",
            "mean",
            "stderr",
            "timeMax",
            "realizations",
            "steps",
            "seed",
        ],
        results.iter().flat_map(|r| {
            let c = &r.config;
            r.per_size.iter().map(move |s| {
                vec![
                    s.n.to_string(),
                    c.mode.to_string(),
                    format!("{:.12}", s.mean),
                    format!("{:.12}", s.stderr),
                    format!("{:.12}", s.time_max),
                    c.realizations.to_string(),
                    c.steps.to_string(),
                    c.seed.to_string(),
                ]
            })
        }),
    )
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads a pattern from either a pattern CSV (`t, q0, ...`) or a damage
/// CSV (`t, mask, distance, ...`). Damage masks need `n`; without it the
/// width is taken from the widest mask.
pub fn read_pattern_csv(text: &str, n: Option<usize>) -> Result<Vec<Vec<u8>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(0, e.to_string()))?
        .clone();
    let records: Vec<csv::StringRecord> = rdr
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(0, e.to_string()))?;
    match headers.get(1) {
        Some("mask") => {
            let masks: Vec<u128> = records
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    u128::from_str_radix(r.get(1).unwrap_or(""), 16)
                        .map_err(|e| parse_err(i + 2, e.to_string()))
                })
                .collect::<Result<_>>()?;
            let width = n.unwrap_or_else(|| {
                masks
                    .iter()
                    .map(|m| 128 - m.leading_zeros() as usize)
                    .max()
                    .unwrap_or(0)
                    .max(1)
            });
            Ok(masks
                .iter()
                .map(|m| (0..width).map(|i| ((m >> i) & 1) as u8).collect())
                .collect())
        }
        Some(h) if h.starts_with('q') => records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .skip(1)
                    .map(|v| match v.parse::<u8>() {
                        Ok(c) if c < 4 => Ok(c),
                        _ => Err(parse_err(i + 2, format!("invalid label code {v:?}"))),
                    })
                    .collect()
            })
            .collect(),
        _ => Err(parse_err(1, "expected a pattern or damage CSV header")),
    }
}

pub const COLOR_X: &str = "#1f77b4";
pub const COLOR_Y: &str = "#2ca02c";
pub const COLOR_Z: &str = "#ff7f0e";

fn color(code: u8) -> Option<&'static str> {
    match Pauli::from_code(code)? {
        Pauli::I => None,
        Pauli::X => Some(COLOR_X),
        Pauli::Y => Some(COLOR_Y),
        Pauli::Z => Some(COLOR_Z),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace("--", "- -")
}

fn svg_comment(header: &[String]) -> String {
    header
        .iter()
        .map(|l| format!("<!-- {} -->\n", escape(l)))
        .collect()
}

/// Space-time plot: time runs left to right, node 0 at the top.
pub fn pattern_svg(header: &[String], rows: &[Vec<u8>]) -> String {
    const CELL: usize = 8;
    let n = rows.first().map_or(0, Vec::len);
    let (w, h) = (rows.len() * CELL, n * CELL);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    s += &svg_comment(header);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for (t, row) in rows.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            if let Some(fill) = color(c) {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#,
                    t * CELL,
                    i * CELL
                );
            }
        }
    }
    s + "</svg>\n"
}

/// ASCII PGM (P2): I white, X black, Z dark grey, Y light grey.
pub fn pattern_pgm(header: &[String], rows: &[Vec<u8>]) -> String {
    let n = rows.first().map_or(0, Vec::len);
    let mut s = String::from("P2\n");
    s += &comment_header(header);
    let _ = writeln!(s, "{} {}\n255", rows.len(), n);
    for i in 0..n {
        let line: Vec<&str> = rows
            .iter()
            .map(|r| match r[i] {
                1 => "0",
                2 => "170",
                3 => "85",
                _ => "255",
            })
            .collect();
        s += &line.join(" ");
        s.push('\n');
    }
    s
}

/// Eigenvalues on the unit circle, annotated with degeneracies above one.
pub fn spectrum_svg(header: &[String], report: &SpectrumReport) -> String {
    const SIZE: f64 = 400.0;
    const R: f64 = 160.0;
    let c = SIZE / 2.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    s += &svg_comment(header);
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<circle cx="{c}" cy="{c}" r="{R}" fill="none" stroke="#888" stroke-width="1"/>"##
    );
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{c}" x2="{}" y2="{c}" stroke="#ccc"/><line x1="{c}" y1="{}" x2="{c}" y2="{}" stroke="#ccc"/>"##,
        c - R - 20.0,
        c + R + 20.0,
        c - R - 20.0,
        c + R + 20.0
    );
    for cl in &report.clusters {
        let (x, y) = (c + R * cl.phase.cos(), c - R * cl.phase.sin());
        let fill = if cl.root.is_some() {
            "#d62728"
        } else {
            "#1f77b4"
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{fill}"/>"#
        );
        if cl.degeneracy > 1 {
            let (lx, ly) = (
                c + (R + 14.0) * cl.phase.cos(),
                c - (R + 14.0) * cl.phase.sin(),
            );
            let _ = writeln!(
                s,
                r#"<text x="{lx:.3}" y="{ly:.3}" font-size="12" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                cl.degeneracy
            );
        }
    }
    s + "</svg>\n"
}
