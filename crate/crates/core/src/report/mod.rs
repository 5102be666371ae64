//! Input, synthetic data and human-facing output.

mod parse;
mod svg;
mod synth;
mod text;

pub use parse::{auto_labels, parse_dataset, parse_str, render_csv_borda, DatasetSpec, Format, Labels};
pub use svg::{render_coords, render_svg_map, MapKind};
pub use synth::{generate_synthetic, random_ballots, PlantedCluster, Synthetic};
pub use text::{render_census, render_marginals, render_report, render_tca, Style};

use crate::error::Result;
use crate::peeling::{group_summary, peel, GroupSummary, PeelOptions, PeelResult};
use crate::rank::{first_order_marginals, MarginalsTable, Profile};
use crate::tca::{profile_map_axes, TcaOptions};
use crate::Rational;

/// Coordinates for the TCA maps of one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct MapCoords {
    pub items: Vec<String>,
    pub deltas: Vec<Rational>,
    /// `f[axis][voter]`, nega row excluded.
    pub f: Vec<Vec<Rational>>,
    /// `g[axis][item]`.
    pub g: Vec<Vec<Rational>>,
    /// Ballot of each voter as concatenated item labels.
    pub voter_labels: Vec<String>,
}

pub fn map_coords(p: &Profile, opts: &TcaOptions) -> Result<MapCoords> {
    let axes = profile_map_axes(p, opts)?;
    let n = p.n();
    Ok(MapCoords {
        items: p.items().to_vec(),
        deltas: axes.iter().map(|a| a.delta).collect(),
        f: axes.iter().map(|a| a.f[..n].to_vec()).collect(),
        g: axes.iter().map(|a| a.g.clone()).collect(),
        voter_labels: (0..n).map(|i| p.ordering_label(i)).collect(),
    })
}

/// Everything the report and map renderers need.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub items: Vec<String>,
    pub n: usize,
    pub peel: PeelResult,
    pub summaries: Vec<GroupSummary>,
    /// First-order marginals per group, per cluster.
    pub marginals: Vec<Vec<MarginalsTable>>,
    pub map: Option<MapCoords>,
}

/// Peels `p` and gathers summaries, marginals and (optionally) map coordinates.
pub fn build_bundle(p: &Profile, opts: &PeelOptions, with_map: bool) -> Result<ReportBundle> {
    let result = peel(p, opts)?;
    let summaries = result.groups.iter().map(group_summary).collect();
    let marginals = result
        .groups
        .iter()
        .map(|g| {
            g.clusters
                .iter()
                .map(|c| p.select_ids(&c.voters).map(|s| first_order_marginals(&s)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let map = if with_map { Some(map_coords(p, &opts.tca)?) } else { None };
    Ok(ReportBundle { items: p.items().to_vec(), n: p.n(), peel: result, summaries, marginals, map })
}
