//! SVG 1.1 scatter plots of the first two TCA axes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{MapCoords, ReportBundle};
use crate::error::{Error, Result};
use crate::{to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Voters,
    Items,
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Scale {
    lo: f64,
    hi: f64,
}

impl Scale {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo < 1e-12 {
            lo -= 1.0;
            hi += 1.0;
        }
        let pad = 0.08 * (hi - lo);
        Self { lo: lo - pad, hi: hi + pad }
    }

    fn at(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo) / (self.hi - self.lo) * (SIZE - 2.0 * MARGIN)
    }
}

/// Map of the bundle's profile; needs two computed axes.
pub fn render_svg_map(b: &ReportBundle, kind: MapKind) -> Result<String> {
    let map = b.map.as_ref().ok_or(Error::MissingAxis(1))?;
    render_coords(map, kind)
}

/// Points sharing exact coordinates become one marker. A voter marker is
/// labelled with its ballot and multiplicity (`CAEBD162`) when all its
/// voters cast the same ballot, and with the voter count otherwise.
pub fn render_coords(map: &MapCoords, kind: MapKind) -> Result<String> {
    if map.f.len() < 2 {
        return Err(Error::MissingAxis(2));
    }
    let (xs, ys, names): (&[Rational], &[Rational], &[String]) = match kind {
        MapKind::Voters => (&map.f[0], &map.f[1], &map.voter_labels),
        MapKind::Items => (&map.g[0], &map.g[1], &map.items),
    };
    let mut points: BTreeMap<(Rational, Rational), Vec<usize>> = BTreeMap::new();
    for k in 0..xs.len() {
        points.entry((xs[k], ys[k])).or_default().push(k);
    }

    let sx = Scale::new(xs.iter().map(to_f64));
    let sy = Scale::new(ys.iter().map(to_f64));
    let y = |v: f64| SIZE - sy.at(v);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let (x0, y0) = (sx.at(0.0), y(0.0));
    let _ = writeln!(
        out,
        r##"<g stroke="#888" stroke-width="1"><line x1="{MARGIN}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{MARGIN}" x2="{x0:.2}" y2="{:.2}"/></g>"##,
        SIZE - MARGIN,
        SIZE - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">TCA1 ({:.4})</text>"#,
        SIZE - MARGIN,
        y0 + 16.0,
        to_f64(&map.deltas[0])
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">TCA2 ({:.4})</text>"#,
        x0 + 6.0,
        MARGIN - 8.0,
        to_f64(&map.deltas[1])
    );

    let colour = match kind {
        MapKind::Voters => "#1f4e9c",
        MapKind::Items => "#b0301c",
    };
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="10" fill="{colour}">"#);
    for ((px, py), members) in &points {
        let (cx, cy) = (sx.at(to_f64(px)), y(to_f64(py)));
        let count = members.len();
        let label = match kind {
            MapKind::Items => members.iter().map(|&k| names[k].as_str()).collect::<Vec<_>>().join(","),
            MapKind::Voters => {
                let first = &names[members[0]];
                if members.iter().all(|&k| names[k] == *first) {
                    if count > 1 {
                        format!("{first}{count}")
                    } else {
                        first.clone()
                    }
                } else {
                    format!("{count} voters")
                }
            }
        };
        let r = 3.0 + (count as f64).ln();
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            cx + r + 2.0,
            cy + 3.0,
            escape(&label)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords() -> MapCoords {
        let r = |n: i128, d: i128| Rational::new(n, d);
        MapCoords {
            items: vec!["A".into(), "B&".into(), "C".into()],
            deltas: vec![r(1, 3), r(1, 6)],
            f: vec![vec![r(2, 3), r(2, 3), r(0, 1)], vec![r(1, 2), r(1, 2), r(-1, 2)]],
            g: vec![vec![r(-1, 1), r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 2), r(-1, 2)]],
            voter_labels: vec!["BAC".into(), "BAC".into(), "ACB".into()],
        }
    }

    #[test]
    fn identical_points_collapse() {
        let svg = render_coords(&coords(), MapKind::Voters).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains(">BAC2<"));
        assert!(svg.contains(">ACB<"));
        assert_eq!(svg, render_coords(&coords(), MapKind::Voters).unwrap());
    }

    #[test]
    fn items_are_escaped() {
        let svg = render_coords(&coords(), MapKind::Items).unwrap();
        assert!(svg.contains(">B&amp;<"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn one_axis_is_not_enough() {
        let mut c = coords();
        c.f.truncate(1);
        assert_eq!(render_coords(&c, MapKind::Voters).unwrap_err(), Error::MissingAxis(2));
    }
}
