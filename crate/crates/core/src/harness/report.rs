use std::fmt::Write as _;

use super::HarnessError;

pub const CSV_HEADER: &str = "loop,mode,D,T,bits,solved,cumulative,pos,neg,boost,seconds";

/// One row per evaluation: the E0 baseline has `loop_index == -1` and no
/// training parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopRow {
    pub loop_index: i64,
    pub mode: String,
    pub depth: Option<usize>,
    pub trees: Option<usize>,
    pub bits: Option<u32>,
    pub solved: usize,
    pub cumulative: usize,
    pub pos: usize,
    pub neg: usize,
    pub boost: usize,
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoopReport {
    pub rows: Vec<LoopRow>,
}

impl LoopReport {
    /// Best per-loop solved count over the learned loops (baseline excluded).
    pub fn best_loop_solved(&self) -> Option<usize> {
        self.rows.iter().filter(|r| r.loop_index >= 0).map(|r| r.solved).max()
    }

    pub fn baseline_solved(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.loop_index < 0).map(|r| r.solved)
    }

    pub fn row(&self, loop_index: i64) -> Option<&LoopRow> {
        self.rows.iter().find(|r| r.loop_index == loop_index)
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn report_csv(report: &LoopReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.loop_index,
            r.mode,
            opt(&r.depth),
            opt(&r.trees),
            opt(&r.bits),
            r.solved,
            r.cumulative,
            r.pos,
            r.neg,
            r.boost,
            opt(&r.seconds)
        );
    }
    out
}

pub fn parse_report_csv(text: &str) -> Result<LoopReport, HarnessError> {
    let err = |line: usize, message: String| HarnessError::Data {
        file: "report.csv".into(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(err(1, format!("expected header `{CSV_HEADER}`"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 11 {
            return Err(err(n, format!("expected 11 fields, found {}", f.len())));
        }
        fn num<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<T, HarnessError> {
            s.parse().map_err(|_| HarnessError::Data {
                file: "report.csv".into(),
                line: n,
                message: format!("invalid {what} `{s}`"),
            })
        }
        fn opt_num<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Option<T>, HarnessError> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, n, what).map(Some)
            }
        }
        rows.push(LoopRow {
            loop_index: num(f[0], n, "loop")?,
            mode: f[1].to_string(),
            depth: opt_num(f[2], n, "D")?,
            trees: opt_num(f[3], n, "T")?,
            bits: opt_num(f[4], n, "bits")?,
            solved: num(f[5], n, "solved")?,
            cumulative: num(f[6], n, "cumulative")?,
            pos: num(f[7], n, "pos")?,
            neg: num(f[8], n, "neg")?,
            boost: num(f[9], n, "boost")?,
            seconds: opt_num(f[10], n, "seconds")?,
        });
    }
    Ok(LoopReport { rows })
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Solved problems per loop, one polyline per labelled series. The baseline
/// sits at x = -1.
pub fn report_svg(series: &[(String, LoopReport)]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let max_loop = series
        .iter()
        .flat_map(|(_, r)| r.rows.iter().map(|x| x.loop_index))
        .max()
        .unwrap_or(0)
        .max(0);
    let max_solved = series
        .iter()
        .flat_map(|(_, r)| r.rows.iter().map(|x| x.solved))
        .max()
        .unwrap_or(0)
        .max(1);
    let sx = |l: i64| pad + (l + 1) as f64 * (w - 2.0 * pad) / (max_loop + 1).max(1) as f64;
    let sy = |s: usize| h - pad - s as f64 * (h - 2.0 * pad) / max_solved as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{pad}" y1="{y}" x2="{x}" y2="{y}" stroke="black"/>"#,
        y = h - pad,
        x = w - pad
    );
    let _ = writeln!(out, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{y}" stroke="black"/>"#, y = h - pad);
    for l in -1..=max_loop {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            sx(l),
            h - pad + 15.0,
            if l < 0 { "E0".to_string() } else { l.to_string() }
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{max_solved}</text>"#,
        pad - 5.0,
        sy(max_solved) + 3.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">loop</text>"#,
        w / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{:.1}" font-size="12" transform="rotate(-90 15 {:.1})" text-anchor="middle">solved</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, (label, r)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = r
            .rows
            .iter()
            .map(|x| format!("{:.1},{:.1}", sx(x.loop_index), sy(x.solved)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" fill="{color}">{}</text>"#,
            w - pad - 120.0,
            pad + 14.0 * i as f64,
            xml_escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
