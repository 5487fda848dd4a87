//! Pipeline stages shared by the subcommands: load listings, build the
//! graphs, render artifacts, and assemble full pipeline runs. Every
//! artifact is computed in memory first; files are only written once the
//! whole run has succeeded, and cleaned up again if a late write fails.

use coconet_core::backbone::{extract_backbone, BackboneGraph, BackboneMethod};
use coconet_core::centrality::{Alpha, CentralityScores};
use coconet_core::inference::{run_model_suite, CovariateTable, Outcome};
use coconet_core::ingest::{build_bipartite, parse_listings, BipartiteGraph, ListingFormat};
use coconet_core::netstats::{netstats_json, netstats_tsv, summarize, AplScope, NetworkSummary};
use coconet_core::openness::{openness_json, openness_tsv, OpennessScore};
use coconet_core::projection::{project, WeightedCountryGraph};
use coconet_core::report::CentralityReport;
use coconet_core::{Error as CoreError, ExactGraph};
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// Errors split by exit code: usage/i-o problems exit 2, analysis
/// failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Analysis(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Analysis(msg) => f.write_str(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io(_) | CoreError::UnreadableInput(_) => CliError::Usage(e.to_string()),
            other => CliError::Analysis(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Tsv,
    Json,
}

impl Emit {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "tsv" => Ok(Emit::Tsv),
            "json" => Ok(Emit::Json),
            other => Err(usage(format!(
                "unknown emit format {other:?} (tsv or json)"
            ))),
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Emit::Tsv => "tsv",
            Emit::Json => "json",
        }
    }
}

pub fn parse_format(explicit: Option<&str>, path: &Path) -> Result<ListingFormat, CliError> {
    if let Some(name) = explicit {
        return name.parse::<ListingFormat>().map_err(CliError::from);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") | Some("ndjson") => Ok(ListingFormat::Jsonl),
        Some("csv") => Ok(ListingFormat::Csv),
        _ => Err(usage(format!(
            "cannot infer listing format from {path:?}; pass --format jsonl|csv"
        ))),
    }
}

pub struct LoadedListings {
    pub bipartite: BipartiteGraph,
    pub records: Vec<coconet_core::ingest::ListingRecord>,
    pub rejects_tsv: Option<String>,
    pub reject_count: usize,
}

pub fn load_listings(
    input: &Path,
    format: Option<&str>,
    strict: bool,
    category: Option<&str>,
    min_countries_per_item: usize,
) -> Result<LoadedListings, CliError> {
    let format = parse_format(format, input)?;
    let file = fs::File::open(input)
        .map_err(|e| usage(format!("cannot open {}: {e}", input.display())))?;
    let parsed = parse_listings(std::io::BufReader::new(file), format, strict)?;
    let reject_count = parsed.rejects.len();
    let rejects_tsv = (!parsed.rejects.is_empty()).then(|| parsed.rejects_tsv());
    let bipartite = build_bipartite(&parsed.records, category, min_countries_per_item)?;
    Ok(LoadedListings {
        bipartite,
        records: parsed.records,
        rejects_tsv,
        reject_count,
    })
}

#[derive(Debug, Clone)]
pub struct BackboneParams {
    pub significance: f64,
    pub method: BackboneMethod,
}

impl BackboneParams {
    pub fn new(
        significance: f64,
        method: &str,
        mc_samples: usize,
        seed: u64,
    ) -> Result<Self, CliError> {
        let method = match method {
            "analytic" => BackboneMethod::Analytic,
            "montecarlo" => BackboneMethod::MonteCarlo {
                samples: mc_samples,
                seed,
            },
            other => {
                return Err(usage(format!(
                    "unknown backbone method {other:?} (analytic or montecarlo)"
                )))
            }
        };
        Ok(BackboneParams {
            significance,
            method,
        })
    }
}

pub fn project_exact(b: &BipartiteGraph) -> Result<ExactGraph, CliError> {
    Ok(project(b)?)
}

pub fn backbone_of(
    g: &WeightedCountryGraph<f64>,
    params: &BackboneParams,
) -> Result<BackboneGraph<f64>, CliError> {
    Ok(extract_backbone(g, params.significance, &params.method)?)
}

/// The graph the centrality and netstats stages analyze: the backbone by
/// default, the raw projection with --on-projection.
pub fn analysis_graph(
    projection: &ExactGraph,
    params: &BackboneParams,
    on_projection: bool,
) -> Result<WeightedCountryGraph<f64>, CliError> {
    let real = projection.to_real::<f64>();
    if on_projection {
        Ok(real)
    } else {
        Ok(backbone_of(&real, params)?.retained_graph())
    }
}

pub fn parse_alpha_grid(alpha: f64, grid: Option<&str>) -> Result<Vec<Alpha>, CliError> {
    match grid {
        None => Ok(vec![Alpha::new(alpha).map_err(CliError::from)?]),
        Some(spec) => {
            let mut out = Vec::new();
            for part in spec.split(',') {
                let value: f64 = part
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("bad alpha grid entry {part:?}")))?;
                out.push(Alpha::new(value).map_err(CliError::from)?);
            }
            if out.is_empty() {
                return Err(usage("empty alpha grid"));
            }
            Ok(out)
        }
    }
}

/// Combined centrality table over an alpha grid, one block per alpha.
pub fn centrality_table(scores: &[CentralityScores<f64>], emit: Emit) -> String {
    match emit {
        Emit::Tsv => {
            let restricted = scores.iter().any(|s| s.component_sizes.is_some());
            let mut out = String::from(if restricted {
                "country\tcloseness\tbetweenness\talpha\tcomponent_size\n"
            } else {
                "country\tcloseness\tbetweenness\talpha\n"
            });
            for block in scores {
                for (i, node) in block.nodes.iter().enumerate() {
                    if let Some(sizes) = &block.component_sizes {
                        out.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            node, block.closeness[i], block.betweenness[i], block.alpha, sizes[i]
                        ));
                    } else {
                        out.push_str(&format!(
                            "{}\t{}\t{}\t{}\n",
                            node, block.closeness[i], block.betweenness[i], block.alpha
                        ));
                    }
                }
            }
            out
        }
        Emit::Json => {
            let rows: Vec<serde_json::Value> = scores
                .iter()
                .flat_map(|block| {
                    block.nodes.iter().enumerate().map(move |(i, node)| {
                        serde_json::json!({
                            "country": node.as_str(),
                            "closeness": block.closeness[i],
                            "betweenness": block.betweenness[i],
                            "alpha": block.alpha,
                            "component_size": block.component_sizes.as_ref().map(|s| s[i]),
                            "graph_fingerprint": format!("{:016x}", block.graph_fingerprint),
                        })
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("centrality serializes")
        }
    }
}

/// Restrict a graph to nodes with at least one incident edge.
pub fn drop_isolates(g: &WeightedCountryGraph<f64>) -> Result<WeightedCountryGraph<f64>, CliError> {
    let mut keep = BTreeSet::new();
    for &(i, j, _) in g.edges() {
        keep.insert(i);
        keep.insert(j);
    }
    let nodes: Vec<_> = keep.iter().map(|&i| g.nodes()[i as usize]).collect();
    let edges: Vec<_> = g
        .edges()
        .iter()
        .map(|&(i, j, w)| (g.nodes()[i as usize], g.nodes()[j as usize], w))
        .collect();
    if nodes.is_empty() {
        return Err(CliError::Analysis(
            "no edges survive; cannot drop isolates from an edgeless graph".into(),
        ));
    }
    Ok(WeightedCountryGraph::from_edges(&nodes, &edges)?)
}

pub struct NetstatsParams {
    pub apl_scope: AplScope,
    pub drop_isolates: bool,
    pub seed: u64,
}

pub fn parse_apl_scope(s: &str) -> Result<AplScope, CliError> {
    match s {
        "components" => Ok(AplScope::AllComponents),
        "giant" => Ok(AplScope::GiantComponent),
        other => Err(usage(format!(
            "unknown apl scope {other:?} (components or giant)"
        ))),
    }
}

pub fn summarize_graph(
    g: &WeightedCountryGraph<f64>,
    params: &NetstatsParams,
) -> Result<NetworkSummary<f64>, CliError> {
    let target = if params.drop_isolates {
        drop_isolates(g)?
    } else {
        g.clone()
    };
    Ok(summarize(&target, params.apl_scope, params.seed)?)
}

/// One summary row per category network: "Combined" over everything,
/// then each category present in the records, each rebuilt through the
/// same projection/backbone parameters.
#[allow(clippy::too_many_arguments)]
pub fn netstats_rows(
    records: &[coconet_core::ingest::ListingRecord],
    category_filter: Option<&str>,
    min_countries_per_item: usize,
    backbone_params: &BackboneParams,
    on_projection: bool,
    stats_params: &NetstatsParams,
) -> Result<Vec<(String, NetworkSummary<f64>)>, CliError> {
    let mut rows = Vec::new();
    let mut one = |label: &str, filter: Option<&str>| -> Result<(), CliError> {
        let b = build_bipartite(records, filter, min_countries_per_item)?;
        let projection = project_exact(&b)?;
        let g = analysis_graph(&projection, backbone_params, on_projection)?;
        rows.push((label.to_owned(), summarize_graph(&g, stats_params)?));
        Ok(())
    };
    match category_filter {
        Some(cat) => one(cat, Some(cat))?,
        None => {
            one("Combined", None)?;
            let categories: BTreeSet<String> =
                records.iter().filter_map(|r| r.category.clone()).collect();
            for cat in categories {
                one(&cat, Some(&cat))?;
            }
        }
    }
    Ok(rows)
}

pub fn render_netstats(rows: &[(String, NetworkSummary<f64>)], emit: Emit) -> String {
    match emit {
        Emit::Tsv => netstats_tsv(rows),
        Emit::Json => netstats_json(rows),
    }
}

pub fn render_openness(scores: &[OpennessScore<f64>], emit: Emit) -> String {
    match emit {
        Emit::Tsv => openness_tsv(scores),
        Emit::Json => openness_json(scores),
    }
}

/// Outcomes to regress: one named, or all three when the scores support
/// them.
pub fn resolve_outcomes(named: Option<&str>) -> Result<Vec<Outcome>, CliError> {
    match named {
        Some(name) => Ok(vec![name.parse::<Outcome>()?]),
        None => Ok(vec![
            Outcome::Betweenness,
            Outcome::Closeness,
            Outcome::CompositeOpenness,
        ]),
    }
}

pub struct RegressionArtifacts {
    pub outcome: &'static str,
    pub tsv_or_json: String,
    pub text_table: String,
}

pub fn regression_artifacts(
    cov: &CovariateTable<f64>,
    report: &CentralityReport<f64>,
    outcomes: &[Outcome],
    extra_controls: &[String],
    model_filter: Option<&str>,
    emit: Emit,
) -> Result<Vec<RegressionArtifacts>, CliError> {
    if let Some(m) = model_filter {
        if !["full", "nonculture", "culture"].contains(&m) {
            return Err(usage(format!(
                "unknown model {m:?} (full, nonculture, or culture)"
            )));
        }
    }
    let mut out = Vec::new();
    for &outcome in outcomes {
        let models = run_model_suite(cov, report, outcome, extra_controls)?;
        let body = match emit {
            Emit::Tsv => {
                let tsv = models.to_tsv();
                match model_filter {
                    None => tsv,
                    Some(m) => {
                        let mut filtered: String = tsv
                            .lines()
                            .take(1)
                            .chain(
                                tsv.lines()
                                    .skip(1)
                                    .filter(|line| line.split('\t').nth(1) == Some(m)),
                            )
                            .collect::<Vec<&str>>()
                            .join("\n");
                        filtered.push('\n');
                        filtered
                    }
                }
            }
            Emit::Json => models.to_json(),
        };
        out.push(RegressionArtifacts {
            outcome: outcome.column_name(),
            tsv_or_json: body,
            text_table: models.format_table(),
        });
    }
    Ok(out)
}

/// Write computed artifacts; on any failure remove everything written.
pub fn write_artifacts(out_dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        if let Err(e) = fs::write(&path, content) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(usage(format!("cannot write {}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(())
}
