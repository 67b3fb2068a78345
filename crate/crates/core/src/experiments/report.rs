use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io;

use super::{Record, CSV_HEADER};

/// Parses a results CSV. Only the documented schema is accepted.
pub fn read_csv(text: &str) -> Result<Vec<Record>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((i, header)) = lines.next() else {
        return Err(Error::EmptyInput("results CSV".into()));
    };
    if header.trim() != CSV_HEADER {
        return Err(Error::parse(i + 1, format!("expected header {CSV_HEADER:?}")));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return Err(Error::parse(line_no, format!("expected 7 fields, got {}", f.len())));
        }
        let num = |k: usize, what: &str| -> Result<usize> {
            f[k].parse()
                .map_err(|_| Error::parse(line_no, format!("invalid {what} {:?}", f[k])))
        };
        let maybe = |k: usize, what: &str| -> Result<Option<usize>> {
            if f[k] == "error" {
                Ok(None)
            } else {
                num(k, what).map(Some)
            }
        };
        if f[0].is_empty() {
            return Err(Error::parse(line_no, "empty method name"));
        }
        let ms: f64 = f[6]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid ms {:?}", f[6])))?;
        out.push(Record {
            method: f[0].to_string(),
            seed: f[1]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid seed {:?}", f[1])))?,
            n: num(2, "n")?,
            param: num(3, "param")?,
            interventions: maybe(4, "interventions")?,
            lower_bound: maybe(5, "lower_bound")?,
            ms,
            error: None,
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyInput("results CSV".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub n: usize,
    pub param: usize,
    pub runs: usize,
    pub errors: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub mean_ms: f64,
}

/// Per-method mean and standard deviation of `interventions` for each
/// `(n, param)`, methods in order of first appearance.
pub fn summarize(records: &[Record]) -> Vec<SummaryRow> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, usize, usize), Vec<&Record>> = BTreeMap::new();
    for r in records {
        let m = match order.iter().position(|&m| m == r.method) {
            Some(i) => i,
            None => {
                order.push(&r.method);
                order.len() - 1
            }
        };
        groups.entry((m, r.n, r.param)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((m, n, param), rows)| {
            let xs: Vec<f64> = rows.iter().filter_map(|r| r.interventions).map(|v| v as f64).collect();
            let (mean, std) = if xs.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
                (mean, var.sqrt())
            };
            SummaryRow {
                method: order[m].to_string(),
                n,
                param,
                runs: xs.len(),
                errors: rows.len() - xs.len(),
                mean,
                std,
                mean_ms: rows.iter().map(|r| r.ms).sum::<f64>() / rows.len() as f64,
            }
        })
        .collect()
}

pub fn render_table(rows: &[SummaryRow]) -> String {
    let width = rows.iter().map(|r| r.method.len()).max().unwrap_or(6).max(6);
    let mut out = format!(
        "{:<width$}  {:>6}  {:>6}  {:>5}  {:>6}  {:>10}  {:>10}  {:>10}\n",
        "method", "n", "param", "runs", "errors", "mean", "std", "ms"
    );
    for r in rows {
        writeln!(
            out,
            "{:<width$}  {:>6}  {:>6}  {:>5}  {:>6}  {:>10.3}  {:>10.3}  {:>10.3}",
            r.method, r.n, r.param, r.runs, r.errors, r.mean, r.std, r.mean_ms
        )
        .unwrap();
    }
    out
}

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Line chart of mean interventions with error bars of `std_mult` standard
/// deviations. The x axis is `n` unless only `param` varies.
pub fn render_svg(rows: &[SummaryRow], std_mult: f64) -> String {
    let ns: BTreeSet<usize> = rows.iter().map(|r| r.n).collect();
    let ps: BTreeSet<usize> = rows.iter().map(|r| r.param).collect();
    let by_param = ns.len() == 1 && ps.len() > 1;
    let x_of = |r: &SummaryRow| if by_param { r.param } else { r.n };
    let split_param = !by_param && ps.len() > 1;

    let mut series: BTreeMap<(usize, String), Vec<&SummaryRow>> = BTreeMap::new();
    let mut seen: Vec<&str> = Vec::new();
    for r in rows.iter().filter(|r| r.runs > 0) {
        if !seen.contains(&r.method.as_str()) {
            seen.push(&r.method);
        }
        let rank = seen.iter().position(|&m| m == r.method).unwrap();
        let label = if split_param {
            format!("{} (param={})", r.method, r.param)
        } else {
            r.method.clone()
        };
        series.entry((rank, label)).or_default().push(r);
    }

    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 200.0, 30.0, 60.0);
    let xs: Vec<usize> = rows.iter().map(x_of).collect::<BTreeSet<_>>().into_iter().collect();
    let (xmin, xmax) = (*xs.first().unwrap_or(&0) as f64, *xs.last().unwrap_or(&1) as f64);
    let ymax = rows
        .iter()
        .filter(|r| r.runs > 0)
        .map(|r| r.mean + std_mult * r.std)
        .fold(0.0, f64::max)
        .max(1.0)
        * 1.05;
    let px = |x: f64| {
        if xmax > xmin {
            left + (x - xmin) / (xmax - xmin) * (w - left - right)
        } else {
            left + (w - left - right) / 2.0
        }
    };
    let py = |y: f64| top + (1.0 - y / ymax) * (h - top - bottom);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="12"><line x1="{left}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#,
        h - bottom,
        w - right,
        h - bottom,
        h - bottom
    )
    .unwrap();
    for &x in &xs {
        let cx = px(x as f64);
        writeln!(
            s,
            r#"<line x1="{cx:.1}" y1="{}" x2="{cx:.1}" y2="{}" stroke="black"/><text x="{cx:.1}" y="{}" text-anchor="middle">{x}</text>"#,
            h - bottom,
            h - bottom + 5.0,
            h - bottom + 20.0
        )
        .unwrap();
    }
    for i in 0..=5 {
        let y = ymax * i as f64 / 5.0;
        writeln!(
            s,
            r#"<line x1="{}" y1="{:.1}" x2="{left}" y2="{:.1}" stroke="black"/><text x="{}" y="{:.1}" text-anchor="end">{y:.1}</text>"#,
            left - 5.0,
            py(y),
            py(y),
            left - 8.0,
            py(y) + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
        (left + w - right) / 2.0,
        h - 15.0,
        if by_param { "param" } else { "n" }
    )
    .unwrap();
    writeln!(
        s,
        r#"<text transform="translate(18,{:.1}) rotate(-90)" text-anchor="middle">interventions</text>"#,
        (top + h - bottom) / 2.0
    )
    .unwrap();

    for (idx, ((_, label), pts)) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let mut pts = pts.clone();
        pts.sort_by_key(|r| x_of(r));
        let path: Vec<String> = pts
            .iter()
            .map(|r| format!("{:.1},{:.1}", px(x_of(r) as f64), py(r.mean)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        )
        .unwrap();
        for r in &pts {
            let cx = px(x_of(r) as f64);
            let (lo, hi) = (py((r.mean - std_mult * r.std).max(0.0)), py(r.mean + std_mult * r.std));
            writeln!(
                s,
                r#"<line x1="{cx:.1}" y1="{lo:.1}" x2="{cx:.1}" y2="{hi:.1}" stroke="{color}"/><line x1="{:.1}" y1="{lo:.1}" x2="{:.1}" y2="{lo:.1}" stroke="{color}"/><line x1="{:.1}" y1="{hi:.1}" x2="{:.1}" y2="{hi:.1}" stroke="{color}"/><circle cx="{cx:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                cx - 4.0,
                cx + 4.0,
                cx - 4.0,
                cx + 4.0,
                py(r.mean)
            )
            .unwrap();
        }
        let ly = top + 10.0 + 18.0 * idx as f64;
        writeln!(
            s,
            r#"<line x1="{}" y1="{ly:.1}" x2="{}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{}" y="{:.1}">{}</text>"#,
            w - right + 15.0,
            w - right + 40.0,
            w - right + 46.0,
            ly + 4.0,
            escape(label)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="10">error bars: {std_mult} std</text></g></svg>"#,
        w - right + 15.0,
        h - bottom
    )
    .unwrap();
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Reads `csv`, writes the summary table and chart, and returns the summary.
pub fn cmd_report(csv: &Path, std_mult: f64, summary: &Path, chart: &Path) -> Result<Vec<SummaryRow>> {
    let text = io::read_file(csv)?;
    let records = read_csv(&text).map_err(|e| match e {
        Error::EmptyInput(_) => Error::EmptyInput(csv.display().to_string()),
        e => e,
    })?;
    let rows = summarize(&records);
    io::write_file(summary, &render_table(&rows))?;
    io::write_file(chart, &render_svg(&rows, std_mult))?;
    Ok(rows)
}
