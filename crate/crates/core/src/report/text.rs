//! Plain-text and markdown reports.

use std::fmt::Write as _;

use super::ReportBundle;
use crate::coherence::{ClusterPartition, CoherencyVerdict};
use crate::peeling::{IterationTrace, Outcome};
use crate::rank::MarginalsTable;
use crate::shuffle::ShuffleCensus;
use crate::tca::{Method, TcaAxis};
use crate::{fraction_over, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Text,
    Markdown,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, style: Style, indent: &str) -> String {
        let mut out = String::new();
        match style {
            Style::Markdown => {
                let _ = writeln!(out, "| {} |", self.header.join(" | "));
                let _ = writeln!(out, "|{}", "---|".repeat(self.header.len()));
                for r in &self.rows {
                    let _ = writeln!(out, "| {} |", r.join(" | "));
                }
            }
            Style::Text => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for r in &self.rows {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    format!("{indent}{}", padded.join("  ").trim_end())
                };
                let _ = writeln!(out, "{}", line(&self.header));
                for r in &self.rows {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
        out
    }
}

fn heading(out: &mut String, style: Style, level: usize, title: &str) {
    match style {
        Style::Markdown => {
            let _ = writeln!(out, "{} {title}\n", "#".repeat(level));
        }
        Style::Text => {
            let _ = writeln!(out, "{title}");
        }
    }
}

/// Reduced fraction, followed by the form over `denom` when that differs: `8/15 (48/90)`.
fn fraction(x: &Rational, denom: i128) -> String {
    match fraction_over(x, denom) {
        Some(f) if f != x.to_string() && *x.denom() != 1 => format!("{x} ({f})"),
        _ => x.to_string(),
    }
}

fn percent(part: usize, whole: usize, places: usize) -> String {
    format!("{:.places$}%", 100.0 * part as f64 / whole as f64)
}

fn item_set(items: &[String], js: &[usize]) -> String {
    let names: Vec<&str> = js.iter().map(|&j| items[j].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn render_census(census: &ShuffleCensus, style: Style) -> String {
    let mut t = Table::new(&["alpha", "J1 scores", "T", "count"]);
    let alpha = census.cluster_alpha.map_or("-".to_string(), |a| a.to_string());
    for (ty, count) in &census.entries {
        t.push(vec![alpha.clone(), ty.label(), ty.t.to_string(), count.to_string()]);
    }
    t.render(style, "    ")
}

/// Score-by-item counts, highest score first.
pub fn render_marginals(m: &MarginalsTable, items: &[String], style: Style) -> String {
    let mut header = vec!["score"];
    header.extend(items.iter().map(String::as_str));
    let mut t = Table::new(&header);
    for s in (0..m.d()).rev() {
        let mut row = vec![s.to_string()];
        row.extend(m.score_row(s).iter().map(u64::to_string));
        t.push(row);
    }
    t.render(style, "    ")
}

fn render_trace(out: &mut String, trace: &[IterationTrace], items: &[String], style: Style) {
    heading(out, style, 2, "Peeling trace");
    let mut t = Table::new(&["iter", "voters", "J1", "delta1", "clusters (alpha:size, + coherent)", "outcome"]);
    for step in trace {
        let clusters: Vec<String> = step
            .verdicts
            .iter()
            .map(|v| format!("{}:{}{}", v.alpha, v.size, if v.coherent { "+" } else { "" }))
            .collect();
        let outcome = match &step.outcome {
            Outcome::Group { index, size } => format!("cohG({index}) of {size}"),
            Outcome::NoCoherentPrefix => "no coherent prefix".to_string(),
            Outcome::BelowThreshold { size } => format!("group of {size} below threshold"),
        };
        t.push(vec![
            step.iteration.to_string(),
            step.voters_in.to_string(),
            item_set(items, &step.j1),
            format!("{:.4}", to_f64(&step.delta1)),
            clusters.join(" "),
            outcome,
        ]);
    }
    out.push_str(&t.render(style, "  "));
    out.push('\n');
}

/// One first-axis run: dispersion, item split, lattice clusters and their verdicts.
pub fn render_tca(
    items: &[String],
    axis: &TcaAxis,
    part: &ClusterPartition,
    verdicts: &[CoherencyVerdict],
    style: Style,
) -> String {
    let mut out = String::new();
    let lattice = part.bounds.scale();
    let method = match axis.method {
        Method::Enumerate => "enumeration",
        Method::Ascent => "ascent",
        Method::Fixed => "fixed signs",
    };
    heading(&mut out, style, 1, "First TCA axis");
    let _ = writeln!(out, "  engine: {method}");
    let _ = writeln!(out, "  delta1 = {} = {:.4}", fraction(&axis.delta, lattice), to_f64(&axis.delta));
    let _ = writeln!(out, "  f1(nega) = {}", fraction(&axis.f_nega(), lattice));
    let _ = writeln!(out, "  J1 = {}   J2 = {}\n", item_set(items, &part.j1), item_set(items, &part.j2));

    let mut t = Table::new(&["item", "g1"]);
    for (j, g) in axis.g.iter().enumerate() {
        t.push(vec![items[j].clone(), format!("{:.4}", to_f64(g))]);
    }
    out.push_str(&t.render(style, "    "));
    out.push('\n');

    heading(&mut out, style, 2, "Clusters");
    let d1d2 = (part.j1.len() * part.j2.len()) as i128;
    let mut t = Table::new(&["alpha", "size", "f1", "T", "sub delta1", "coherent", "sub J1", "Cross"]);
    for (c, v) in part.clusters.iter().zip(verdicts) {
        t.push(vec![
            c.alpha.to_string(),
            c.voters.len().to_string(),
            fraction(&part.bounds.value(c.alpha), lattice),
            part.bounds.t_of(c.alpha).to_string(),
            format!("{:.4}", to_f64(&v.sub_delta)),
            if v.coherent { "yes" } else { "no" }.to_string(),
            item_set(items, &v.sub_j1),
            fraction_over(&v.cross, d1d2).unwrap_or_else(|| format!("{:.4}", to_f64(&v.cross))),
        ]);
    }
    out.push_str(&t.render(style, "  "));
    out
}

pub fn render_report(b: &ReportBundle, style: Style) -> String {
    let mut out = String::new();
    let d = b.items.len();
    let lattice = (d * (d - 1)) as i128;
    heading(&mut out, style, 1, "Coherent groups");
    let _ = writeln!(out, "{} voters, {} items: {}\n", b.n, d, b.items.join(" "));

    for (g, s) in b.peel.groups.iter().zip(&b.summaries) {
        let name = format!("cohG({})", g.index);
        heading(&mut out, style, 2, &format!("{name}: {} voters ({})", g.size, percent(g.size, b.n, 2)));
        let _ = writeln!(out, "  J1 = {}   J2 = {}", item_set(&b.items, &g.j1), item_set(&b.items, &g.j2));
        let _ = writeln!(
            out,
            "  delta1 = {} = {:.4}   Cross({name}) = {:.1}%\n",
            fraction(&g.delta1, lattice),
            to_f64(&g.delta1),
            100.0 * to_f64(&g.cross)
        );

        let _ = writeln!(out, "  Borda scale");
        let mut t = Table::new(&["item", "beta", "stderr", "g1"]);
        for &(j, beta, se) in &s.scale {
            t.push(vec![
                b.items[j].clone(),
                format!("{:.2}", to_f64(&beta)),
                format!("{se:.3}"),
                format!("{:.4}", to_f64(&s.g1[j])),
            ]);
        }
        out.push_str(&t.render(style, "    "));
        let _ = writeln!(out, "\n  Buckets: {}\n", s.bucket_string(&b.items));

        let _ = writeln!(out, "  Clusters");
        let d1d2 = (g.j1.len() * g.j2.len()) as i128;
        let mut t = Table::new(&["alpha", "size", "delta1", "", "T", "Cross"]);
        for &(alpha, size, delta, tt, cross) in &s.roster {
            t.push(vec![
                alpha.to_string(),
                size.to_string(),
                fraction(&delta, lattice),
                format!("{:.4}", to_f64(&delta)),
                tt.to_string(),
                fraction_over(&cross, d1d2).unwrap_or_else(|| cross.to_string()),
            ]);
        }
        out.push_str(&t.render(style, "    "));

        let _ = writeln!(out, "\n  Shuffle census");
        for c in &g.clusters {
            out.push_str(&render_census(&c.census, style));
        }
        out.push('\n');
    }

    let noisy = b.peel.noisy.len();
    let title = if noisy == 0 {
        "noisyG: 0 voters".to_string()
    } else {
        format!("noisyG: {noisy} voters ({})", percent(noisy, b.n, 2))
    };
    heading(&mut out, style, 2, &title);
    if noisy > 0 {
        let ids: Vec<String> = b.peel.noisy.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  ids: {}", ids.join(" "));
    }
    out.push('\n');
    render_trace(&mut out, &b.peel.trace, &b.items, style);
    out
}
