//! `coherank`: coherent-group analysis of complete rankings.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coherank::coherence::{partition_by_first_axis, test_all};
use coherank::peeling::PeelOptions;
use coherank::rank::Profile;
use coherank::report::{
    build_bundle, generate_synthetic, map_coords, parse_dataset, random_ballots, render_census, render_coords,
    render_csv_borda, render_report, render_svg_map, render_tca, DatasetSpec, Format, Labels, MapKind, Style,
};
use coherank::shuffle::shuffle_census;
use coherank::tca::{profile_first_axis, Engine, RestartPolicy, TcaOptions, DEFAULT_ENUMERATION_LIMIT};
use coherank::Rational;

#[derive(Parser, Debug)]
#[command(name = "coherank", version, about = "Coherent groups in rank data via taxicab correspondence analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Peel the profile into coherent groups and write the report.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tca: TcaArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Minimum group size as a fraction of all voters (`0.01` or `1/100`).
        #[arg(long, default_value = "0.01", value_parser = parse_fraction)]
        min_group_frac: Rational,
        #[arg(long, default_value_t = 20)]
        max_iters: usize,
        /// Also write voters.svg and items.svg (needs --out-dir).
        #[arg(long)]
        maps: bool,
    },
    /// One first-axis run with the lattice clusters and their coherency verdicts.
    Tca {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tca: TcaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Shuffle census of a voter subset under an item split.
    Census {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Items of the first block, by label or 0-based index (`B,D,E`).
        #[arg(long, value_delimiter = ',', required = true)]
        j1: Vec<String>,
        /// Voter ids, e.g. `0-99,150`; all voters when omitted.
        #[arg(long, value_parser = parse_ids)]
        voters: Option<Ids>,
    },
    /// Generate a profile with planted coherent clusters, written as csv-borda.
    Synth {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        /// Planted cluster as `alpha:size`; repeat for more clusters.
        #[arg(long = "cluster", value_parser = parse_cluster, required = true)]
        clusters: Vec<(usize, usize)>,
        /// Uniformly random ballots appended after the planted voters.
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// SVG map of the first two axes.
    Map {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tca: TcaArgs,
        #[arg(long, value_enum, default_value_t = MapArg::Both)]
        kind: MapArg,
        /// Restrict the map to these voter ids, e.g. one cluster.
        #[arg(long, value_parser = parse_ids)]
        voters: Option<Ids>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Dataset file.
    input: PathBuf,
    #[arg(long, default_value = "order-lines", value_parser = parse_format)]
    format: Format,
    /// Item labels: `header`, `auto`, or a file with one label per line.
    #[arg(long, default_value = "header")]
    labels: String,
}

#[derive(Args, Debug)]
struct TcaArgs {
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Sampled row restarts for the ascent engine.
    #[arg(long)]
    restarts: Option<usize>,
    /// Seed for restart sampling.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = StyleArg::Text)]
    style: StyleArg,
    /// Write files here instead of printing to stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Enumerate,
    Ascent,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StyleArg {
    Text,
    Markdown,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapArg {
    Voters,
    Items,
    Both,
}

#[derive(Clone, Debug)]
struct Ids(Vec<usize>);

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|_| "expected one of order-lines, csv-rankings, csv-borda".to_string())
}

fn parse_fraction(s: &str) -> Result<Rational, String> {
    let bad = || format!("`{s}` is not a fraction in [0, 1]");
    let x = if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i128, i128) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        if q == 0 {
            return Err(bad());
        }
        Rational::new(p, q)
    } else {
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if frac.len() > 18 || !digits(whole) || !digits(frac) || whole.len() + frac.len() == 0 {
            return Err(bad());
        }
        let whole: i128 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let scale = 10i128.pow(frac.len() as u32);
        let frac: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Rational::new(whole * scale + frac, scale)
    };
    if x < Rational::from_integer(0) || x > Rational::from_integer(1) {
        return Err(bad());
    }
    Ok(x)
}

fn parse_ids(s: &str) -> Result<Ids, String> {
    let mut ids = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || format!("`{part}` is not an id or an `a-b` range");
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                ids.extend(a..=b);
            }
            None => ids.push(part.parse().map_err(|_| bad())?),
        }
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(Ids(ids))
}

fn parse_cluster(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("`{s}` is not `alpha:size`");
    let (a, n) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}

/// A failure with its exit code: 1 for bad input, 2 for a broken invariant.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl fmt::Display) -> Self {
        Self { code: 1, message: message.to_string() }
    }
}

impl From<coherank::Error> for Failure {
    fn from(e: coherank::Error) -> Self {
        let code = if e.is_internal() { 2 } else { 1 };
        let prefix = if e.is_internal() { "internal error: " } else { "" };
        Self { code, message: format!("{prefix}{e}") }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

fn load(input: &InputArgs) -> Result<Profile, Failure> {
    let labels = match input.labels.as_str() {
        "header" => Labels::Header,
        "auto" => Labels::Auto,
        path => Labels::Sidecar(PathBuf::from(path)),
    };
    let spec = DatasetSpec { labels, ..DatasetSpec::new(&input.input, input.format) };
    Ok(parse_dataset(&spec)?)
}

fn tca_options(args: &TcaArgs) -> TcaOptions {
    let mut restarts = RestartPolicy::default();
    if let Some(rows) = args.restarts {
        restarts.rows = rows;
    }
    if let Some(seed) = args.seed {
        restarts.seed = seed;
    }
    let engine = match args.engine {
        EngineArg::Enumerate => Engine::Enumerate,
        EngineArg::Ascent => Engine::Ascent,
        EngineArg::Auto => Engine::Auto,
    };
    TcaOptions { engine, enumeration_limit: DEFAULT_ENUMERATION_LIMIT, restarts, ..TcaOptions::default() }
}

fn style(s: StyleArg) -> (Style, &'static str) {
    match s {
        StyleArg::Text => (Style::Text, "txt"),
        StyleArg::Markdown => (Style::Markdown, "md"),
    }
}

/// Writes `content` to `dir/name`, or to stdout without a directory.
fn emit(dir: Option<&Path>, name: &str, content: &str) -> Result<(), Failure> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn resolve_items(p: &Profile, names: &[String]) -> Result<Vec<usize>, Failure> {
    let mut js = Vec::with_capacity(names.len());
    for name in names {
        let j = match p.items().iter().position(|it| it == name) {
            Some(j) => j,
            None => match name.parse::<usize>() {
                Ok(j) if j < p.d() => j,
                _ => return Err(Failure::input(format!("unknown item `{name}`"))),
            },
        };
        js.push(j);
    }
    js.sort_unstable();
    js.dedup();
    if js.is_empty() || js.len() == p.d() {
        return Err(Failure::input("--j1 must name a nonempty proper subset of the items"));
    }
    Ok(js)
}

fn subset(p: Profile, voters: Option<&Ids>) -> Result<Profile, Failure> {
    match voters {
        None => Ok(p),
        Some(Ids(ids)) => {
            if let Some(&bad) = ids.iter().find(|&&id| !p.row_ids().contains(&id)) {
                return Err(Failure::input(format!("voter id {bad} is not in the profile")));
            }
            Ok(p.select_ids(ids)?)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { input, tca, output, min_group_frac, max_iters, maps } => {
            let p = load(&input)?;
            let opts = PeelOptions { min_group_frac, max_iters, tca: tca_options(&tca) };
            if maps && output.out_dir.is_none() {
                return Err(Failure::input("--maps needs --out-dir"));
            }
            let bundle = build_bundle(&p, &opts, maps)?;
            let (style, ext) = style(output.style);
            let dir = output.out_dir.as_deref();
            emit(dir, &format!("report.{ext}"), &render_report(&bundle, style))?;
            if maps {
                emit(dir, "voters.svg", &render_svg_map(&bundle, MapKind::Voters)?)?;
                emit(dir, "items.svg", &render_svg_map(&bundle, MapKind::Items)?)?;
            }
        }
        Command::Tca { input, tca, output } => {
            let p = load(&input)?;
            let opts = tca_options(&tca);
            let axis = profile_first_axis(&p, &opts)?;
            let part = partition_by_first_axis(&p, &axis)?;
            let verdicts = test_all(&p, &part, &opts)?;
            let (style, ext) = style(output.style);
            emit(output.out_dir.as_deref(), &format!("tca.{ext}"), &render_tca(p.items(), &axis, &part, &verdicts, style))?;
        }
        Command::Census { input, output, j1, voters } => {
            let p = load(&input)?;
            let j1 = resolve_items(&p, &j1)?;
            let p = subset(p, voters.as_ref())?;
            let census = shuffle_census(&p, p.row_ids(), &j1);
            let (style, ext) = style(output.style);
            emit(output.out_dir.as_deref(), &format!("census.{ext}"), &render_census(&census, style))?;
        }
        Command::Synth { d1, d2, clusters, noise, seed, out_dir } => {
            let syn = generate_synthetic(d1, d2, &clusters, seed)?;
            let mut p = syn.profile;
            if noise > 0 {
                let extra = Profile::from_scores(p.items().to_vec(), random_ballots(d1 + d2, noise, seed ^ 0x6e6f_6973))?;
                p = p.concat(&extra)?;
            }
            emit(out_dir.as_deref(), "synthetic.csv", &render_csv_borda(&p))?;
        }
        Command::Map { input, tca, kind, voters, out_dir } => {
            let p = subset(load(&input)?, voters.as_ref())?;
            let coords = map_coords(&p, &tca_options(&tca))?;
            let kinds: &[(MapKind, &str)] = match kind {
                MapArg::Voters => &[(MapKind::Voters, "voters.svg")],
                MapArg::Items => &[(MapKind::Items, "items.svg")],
                MapArg::Both => &[(MapKind::Voters, "voters.svg"), (MapKind::Items, "items.svg")],
            };
            if kinds.len() > 1 && out_dir.is_none() {
                return Err(Failure::input("--kind both needs --out-dir; choose voters or items for stdout"));
            }
            for &(k, name) in kinds {
                emit(out_dir.as_deref(), name, &render_coords(&coords, k)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors; usage errors are bad input
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("coherank: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
