//! Dataset readers.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rank::{encode_profile, Preference, Profile, Score};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Optional count, then item indices best first.
    OrderLines,
    /// CSV, one column per item holding its rank (1 = most preferred).
    CsvRankings,
    /// CSV of Borda scores.
    CsvBorda,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order-lines" => Ok(Format::OrderLines),
            "csv-rankings" => Ok(Format::CsvRankings),
            "csv-borda" => Ok(Format::CsvBorda),
            other => Err(Error::Parse { line: 0, column: 0, message: format!("unknown format `{other}`") }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::OrderLines => "order-lines",
            Format::CsvRankings => "csv-rankings",
            Format::CsvBorda => "csv-borda",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Labels {
    /// CSV header, or generated names for order-lines.
    Header,
    /// One label per line in a separate file.
    Sidecar(PathBuf),
    /// `A`, `B`, … (or `j1`, `j2`, … past 26 items).
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub format: Format,
    pub labels: Labels,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>, format: Format) -> Self {
        Self { path: path.into(), format, labels: Labels::Header }
    }
}

pub fn auto_labels(d: usize) -> Vec<String> {
    if d <= 26 {
        (0..d).map(|j| ((b'A' + j as u8) as char).to_string()).collect()
    } else {
        (1..=d).map(|j| format!("j{j}")).collect()
    }
}

pub fn parse_dataset(spec: &DatasetSpec) -> Result<Profile> {
    let text = std::fs::read_to_string(&spec.path)?;
    let labels = match &spec.labels {
        Labels::Sidecar(path) => Some(read_sidecar(path)?),
        _ => None,
    };
    let p = parse_str(&text, spec.format, labels)?;
    if spec.labels == Labels::Auto {
        return Profile::from_scores_with_ids(
            auto_labels(p.d()),
            p.rows().map(|r| r.to_vec()).collect(),
            p.row_ids().to_vec(),
        );
    }
    Ok(p)
}

fn read_sidecar(path: &Path) -> Result<Vec<String>> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

/// Parses `text` in `format`. `labels`, when given, overrides the header.
pub fn parse_str(text: &str, format: Format, labels: Option<Vec<String>>) -> Result<Profile> {
    match format {
        Format::OrderLines => parse_order_lines(text, labels),
        Format::CsvRankings => parse_csv(text, labels, true),
        Format::CsvBorda => parse_csv(text, labels, false),
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn is_permutation(xs: &[usize]) -> bool {
    let mut seen = vec![false; xs.len()];
    xs.iter().all(|&x| x < xs.len() && !std::mem::replace(&mut seen[x], true))
}

fn parse_order_lines(text: &str, labels: Option<Vec<String>>) -> Result<Profile> {
    let mut d = labels.as_ref().map(Vec::len);
    let mut prefs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        for (c, tok) in content.split_whitespace().enumerate() {
            let v = tok.parse::<usize>().map_err(|_| parse_err(line, c + 1, format!("`{tok}` is not a non-negative integer")))?;
            tokens.push(v);
        }
        if tokens.is_empty() {
            continue;
        }
        // the first data line fixes d: a bare permutation, or a count and a permutation
        let d = *d.get_or_insert(if is_permutation(&tokens) { tokens.len() } else { tokens.len() - 1 });
        let (count, order) = match tokens.len() {
            n if n == d => (1, &tokens[..]),
            n if n == d + 1 => (tokens[0], &tokens[1..]),
            n => return Err(Error::DimensionMismatch { expected: d, found: n }),
        };
        if let Some(c) = order.iter().position(|&j| j >= d) {
            let column = c + 1 + tokens.len() - d;
            return Err(parse_err(line, column, format!("item index {} out of range 0..{d}", order[c])));
        }
        if !is_permutation(order) {
            return Err(Error::NonPermutationRow { line, d });
        }
        let count = u32::try_from(count).map_err(|_| parse_err(line, 1, "count too large"))?;
        prefs.push(Preference::repeated(order.to_vec(), count));
    }
    let d = d.ok_or(Error::EmptyProfile)?;
    encode_profile(&prefs, labels.unwrap_or_else(|| auto_labels(d)))
}

fn parse_csv(text: &str, labels: Option<Vec<String>>, ranks: bool) -> Result<Profile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(1, 0, e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let items = labels.unwrap_or(header);
    let d = items.len();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, 0, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: rec.len() });
        }
        let mut row = Vec::with_capacity(d);
        for (c, cell) in rec.iter().enumerate() {
            let v: usize =
                cell.parse().map_err(|_| parse_err(line, c + 1, format!("`{cell}` is not a non-negative integer")))?;
            let score = if ranks {
                if v == 0 || v > d {
                    return Err(Error::NonPermutationRow { line, d });
                }
                d - v
            } else {
                v
            };
            row.push(score);
        }
        if !is_permutation(&row) {
            return Err(Error::NonPermutationRow { line, d });
        }
        rows.push(row.into_iter().map(|s| s as Score).collect());
    }
    if rows.is_empty() {
        return Err(Error::EmptyProfile);
    }
    Profile::from_scores(items, rows)
}

/// Writes `p` as csv-borda; [`parse_str`] reads it back unchanged.
pub fn render_csv_borda(p: &Profile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(p.items()).expect("write to memory");
    for row in p.rows() {
        w.write_record(row.iter().map(|s| s.to_string())).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}
