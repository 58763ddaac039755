//! Report assembly and serialization (CSV, JSON summary, plot data).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub scale: f64,
    pub symbol_norm: f64,
    pub input_norm: f64,
    pub output_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub predicted_slope: String,
    pub fitted_slope: Option<f64>,
    pub residual: Option<f64>,
    pub convergence_drift: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub rows: Vec<Row>,
    pub summaries: Vec<Summary>,
}

pub const CSV_HEADER: &str = "experiment,scale,symbol_norm,input_norm,output_norm,ratio";

impl Report {
    pub fn passed(&self) -> bool {
        self.summaries.iter().all(|s| s.verdict == Verdict::Pass)
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                r.experiment, r.scale, r.symbol_norm, r.input_norm, r.output_norm, r.ratio
            );
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summaries).expect("summaries serialize")
    }

    /// One line per fitted quantity.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for s in &self.summaries {
            let fitted = s.fitted_slope.map_or("-".to_string(), |v| format!("{v:+.4}"));
            let drift = s.convergence_drift.map_or(String::new(), |d| format!(" drift {d:.4}"));
            let _ = writeln!(out, "{} {}: predicted {} fitted {fitted}{drift}", s.verdict, s.experiment, s.predicted_slope);
        }
        out
    }

    /// Writes `<name>.csv` and `<name>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.experiment));
        let json = dir.join(format!("{}.json", self.experiment));
        fs::write(&csv, self.to_csv())?;
        fs::write(&json, self.summary_json())?;
        Ok(vec![csv, json])
    }

    /// Gnuplot-ready `scale ratio` blocks (one per quantity) plus an SVG of the log-log data.
    pub fn write_plot(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let dat = dir.join(format!("{}.dat", self.experiment));
        let svg = dir.join(format!("{}.svg", self.experiment));
        let mut text = String::new();
        for s in &self.summaries {
            let _ = writeln!(text, "# {}", s.experiment);
            for r in self.rows.iter().filter(|r| r.experiment == s.experiment) {
                let _ = writeln!(text, "{:.12e} {:.12e}", r.scale, r.ratio);
            }
            text.push_str("\n\n");
        }
        fs::write(&dat, text)?;
        fs::write(&svg, self.svg())?;
        Ok(vec![dat, svg])
    }

    pub fn svg(&self) -> String {
        const W: f64 = 480.0;
        const H: f64 = 320.0;
        const PAD: f64 = 40.0;
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.scale > 0.0 && r.ratio > 0.0)
            .map(|r| (r.scale.ln(), r.ratio.ln()))
            .collect();
        let mut out = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\">\n");
        let _ = writeln!(out, "<text x=\"{PAD}\" y=\"20\" font-size=\"12\">{} (log ratio vs log scale)</text>", self.experiment);
        if pts.is_empty() {
            out.push_str("</svg>\n");
            return out;
        }
        let (x0, x1) = bounds(pts.iter().map(|p| p.0));
        let (y0, y1) = bounds(pts.iter().map(|p| p.1));
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        let _ = writeln!(
            out,
            "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
        for (k, s) in self.summaries.iter().enumerate() {
            let color = palette[k % palette.len()];
            let series: Vec<(f64, f64)> = self
                .rows
                .iter()
                .filter(|r| r.experiment == s.experiment && r.scale > 0.0 && r.ratio > 0.0)
                .map(|r| (r.scale.ln(), r.ratio.ln()))
                .collect();
            for (x, y) in &series {
                let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>", sx(*x), sy(*y));
            }
            if let (Some(fit), Some(first), Some(last)) = (s.fitted_slope, series.first(), series.last()) {
                let my = series.iter().map(|p| p.1).sum::<f64>() / series.len() as f64;
                let mx = series.iter().map(|p| p.0).sum::<f64>() / series.len() as f64;
                let line = |x: f64| my + fit * (x - mx);
                let _ = writeln!(
                    out,
                    "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\"/>",
                    sx(first.0),
                    sy(line(first.0)),
                    sx(last.0),
                    sy(line(last.0))
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo < 1e-12 {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}
