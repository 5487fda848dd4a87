//! coconet: batch analysis of country co-consumption networks.
//!
//! Subcommands wrap one pipeline stage each; `pipeline` chains them and
//! writes every artifact plus a manifest that records the exact
//! parameters, so a run can be reproduced byte for byte.

mod stages;

use clap::{Args, Parser, Subcommand};
use coconet_core::centrality::{centrality_scores, Alpha};
use coconet_core::inference::CovariateTable;
use coconet_core::openness::all_openness;
use coconet_core::report::CentralityReport;
use coconet_core::synthgen;
use stages::{usage, CliError, Emit};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "coconet", version, about = "Co-consumption network analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct IngestArgs {
    /// Listings file (JSONL or CSV)
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted
    #[arg(long)]
    format: Option<String>,
    /// Keep only records with this category label
    #[arg(long)]
    category: Option<String>,
    /// Drop items listed by fewer countries than this
    #[arg(long, default_value_t = 1)]
    min_countries_per_item: usize,
    /// Treat malformed lines as fatal instead of collecting rejects
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Clone)]
struct BackboneArgs {
    /// Significance level for edge retention, in (0, 1)
    #[arg(long, default_value_t = 0.05)]
    significance: f64,
    /// analytic (closed form) or montecarlo (empirical null)
    #[arg(long, default_value = "analytic")]
    backbone_method: String,
    /// Null draws per edge endpoint in montecarlo mode
    #[arg(long, default_value_t = 100_000)]
    mc_samples: usize,
    /// Root seed for all randomized stages
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct CentralityArgs {
    /// Tuning exponent for edge costs 1/w^alpha
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Comma-separated alphas for a robustness sweep
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Score disconnected graphs per component instead of failing
    #[arg(long)]
    component_restrict: bool,
    /// Analyze the raw projection instead of the backbone
    #[arg(long)]
    on_projection: bool,
}

#[derive(Args, Clone)]
struct NetstatsArgs {
    /// Average path length over: components | giant
    #[arg(long, default_value = "components")]
    apl_scope: String,
    /// Drop nodes with no retained edge before computing statistics
    #[arg(long)]
    drop_isolates: bool,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long)]
    out_dir: PathBuf,
    /// Table format: tsv | json
    #[arg(long, default_value = "tsv")]
    emit: String,
}

#[derive(Args, Clone)]
struct RegressArgs {
    /// Covariate CSV: country plus named numeric columns
    #[arg(long)]
    covariates: PathBuf,
    /// Outcome: betweenness | closeness | composite_openness
    #[arg(long)]
    outcome: Option<String>,
    /// Restrict the TSV rows to one model: full | nonculture | culture
    #[arg(long)]
    model: Option<String>,
    /// Extra covariate columns appended to every model
    #[arg(long, value_delimiter = ',')]
    extra_controls: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse listings, report record/reject counts
    IngestCheck {
        #[command(flatten)]
        ingest: IngestArgs,
        /// Write the rejects report (TSV) here
        #[arg(long)]
        rejects: Option<PathBuf>,
    },
    /// Project the bipartite incidence onto countries (exact weights)
    Project {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Filter the projection to its significant backbone
    Backbone {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        backbone: BackboneArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closeness and betweenness on generalized shortest paths
    Centrality {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        backbone: BackboneArgs,
        #[command(flatten)]
        centrality: CentralityArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Composite openness scores per country
    Openness {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Descriptive statistics per category network
    Netstats {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        backbone: BackboneArgs,
        #[command(flatten)]
        netstats: NetstatsArgs,
        /// Analyze the raw projection instead of the backbone
        #[arg(long)]
        on_projection: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// OLS model tables from score files and covariates
    Regress {
        /// Centrality TSV (country, closeness, betweenness, alpha)
        #[arg(long)]
        scores: PathBuf,
        /// Openness TSV, needed for the composite_openness outcome
        #[arg(long)]
        openness: Option<PathBuf>,
        #[command(flatten)]
        regress: RegressArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate a planted-structure synthetic dataset
    Synth {
        /// Key=value config file; flags override its entries
        #[arg(long)]
        config: Option<PathBuf>,
        /// Blocks as id:count pairs, e.g. left:8,right:8
        #[arg(long)]
        blocks: Option<String>,
        #[arg(long)]
        items_per_country: Option<usize>,
        /// Probability mass on the own block's pool
        #[arg(long)]
        intra: Option<f64>,
        /// Probability mass spread over the other blocks
        #[arg(long)]
        inter: Option<f64>,
        /// Bridge country weights per block, e.g. 0.5/0.5 (repeatable)
        #[arg(long)]
        bridge: Vec<String>,
        /// Zipf exponent for heavy-tailed item popularity
        #[arg(long)]
        heavy_tail: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run every stage and write all artifacts plus a manifest
    Pipeline {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        backbone: BackboneArgs,
        #[command(flatten)]
        centrality: CentralityArgs,
        #[command(flatten)]
        netstats: NetstatsArgs,
        /// Covariate CSV enabling the regression stage
        #[arg(long)]
        covariates: Option<PathBuf>,
        /// Outcome: betweenness | closeness | composite_openness (default all)
        #[arg(long)]
        outcome: Option<String>,
        /// Restrict regression TSV rows to one model
        #[arg(long)]
        model: Option<String>,
        /// Extra covariate columns appended to every model
        #[arg(long, value_delimiter = ',')]
        extra_controls: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Analysis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::IngestCheck { ingest, rejects } => cmd_ingest_check(ingest, rejects),
        Command::Project { ingest, output } => cmd_project(ingest, output),
        Command::Backbone {
            ingest,
            backbone,
            output,
        } => cmd_backbone(ingest, backbone, output),
        Command::Centrality {
            ingest,
            backbone,
            centrality,
            output,
        } => cmd_centrality(ingest, backbone, centrality, output),
        Command::Openness { ingest, output } => cmd_openness(ingest, output),
        Command::Netstats {
            ingest,
            backbone,
            netstats,
            on_projection,
            output,
        } => cmd_netstats(ingest, backbone, netstats, on_projection, output),
        Command::Regress {
            scores,
            openness,
            regress,
            output,
        } => cmd_regress(scores, openness, regress, output),
        Command::Synth {
            config,
            blocks,
            items_per_country,
            intra,
            inter,
            bridge,
            heavy_tail,
            seed,
            out_dir,
        } => cmd_synth(
            config,
            blocks,
            items_per_country,
            intra,
            inter,
            bridge,
            heavy_tail,
            seed,
            out_dir,
        ),
        Command::Pipeline {
            ingest,
            backbone,
            centrality,
            netstats,
            covariates,
            outcome,
            model,
            extra_controls,
            output,
        } => cmd_pipeline(
            ingest,
            backbone,
            centrality,
            netstats,
            covariates,
            outcome,
            model,
            extra_controls,
            output,
        ),
    }
}

fn cmd_ingest_check(ingest: IngestArgs, rejects: Option<PathBuf>) -> Result<(), CliError> {
    let loaded = stages::load_listings(
        &ingest.input,
        ingest.format.as_deref(),
        ingest.strict,
        ingest.category.as_deref(),
        ingest.min_countries_per_item,
    )?;
    println!(
        "records {}  rejects {}  countries {}  items {}",
        loaded.records.len(),
        loaded.reject_count,
        loaded.bipartite.countries().len(),
        loaded.bipartite.items().len()
    );
    if let (Some(path), Some(tsv)) = (&rejects, &loaded.rejects_tsv) {
        fs::write(path, tsv)?;
    } else if let Some(path) = &rejects {
        fs::write(path, "line_number\treason\n")?;
    }
    Ok(())
}

fn cmd_project(ingest: IngestArgs, output: OutputArgs) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let loaded = load(&ingest)?;
    let projection = stages::project_exact(&loaded.bipartite)?;
    let body = match emit {
        Emit::Tsv => projection.to_tsv(),
        Emit::Json => projection.to_json(),
    };
    let name = format!("projection.{}", emit.extension());
    stages::write_artifacts(&output.out_dir, &[(name, body)])
}

fn cmd_backbone(
    ingest: IngestArgs,
    backbone: BackboneArgs,
    output: OutputArgs,
) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let params = params_of(&backbone)?;
    let loaded = load(&ingest)?;
    let projection = stages::project_exact(&loaded.bipartite)?;
    let bb = stages::backbone_of(&projection.to_real::<f64>(), &params)?;
    let body = match emit {
        Emit::Tsv => bb.to_tsv(),
        Emit::Json => bb.to_json(),
    };
    let name = format!("backbone.{}", emit.extension());
    stages::write_artifacts(&output.out_dir, &[(name, body)])
}

fn cmd_centrality(
    ingest: IngestArgs,
    backbone: BackboneArgs,
    centrality: CentralityArgs,
    output: OutputArgs,
) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let params = params_of(&backbone)?;
    let grid = stages::parse_alpha_grid(centrality.alpha, centrality.alpha_grid.as_deref())?;
    let loaded = load(&ingest)?;
    let projection = stages::project_exact(&loaded.bipartite)?;
    let graph = stages::analysis_graph(&projection, &params, centrality.on_projection)?;
    let mut blocks = Vec::new();
    for alpha in grid {
        blocks.push(centrality_scores(
            &graph,
            alpha,
            centrality.component_restrict,
        )?);
    }
    let body = stages::centrality_table(&blocks, emit);
    let name = format!("centrality.{}", emit.extension());
    stages::write_artifacts(&output.out_dir, &[(name, body)])
}

fn cmd_openness(ingest: IngestArgs, output: OutputArgs) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let loaded = load(&ingest)?;
    let scores = all_openness::<f64>(&loaded.bipartite)?;
    let body = stages::render_openness(&scores, emit);
    let name = format!("openness.{}", emit.extension());
    stages::write_artifacts(&output.out_dir, &[(name, body)])
}

fn cmd_netstats(
    ingest: IngestArgs,
    backbone: BackboneArgs,
    netstats: NetstatsArgs,
    on_projection: bool,
    output: OutputArgs,
) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let params = params_of(&backbone)?;
    let stats_params = stages::NetstatsParams {
        apl_scope: stages::parse_apl_scope(&netstats.apl_scope)?,
        drop_isolates: netstats.drop_isolates,
        seed: backbone.seed,
    };
    let loaded = load(&ingest)?;
    let rows = stages::netstats_rows(
        &loaded.records,
        ingest.category.as_deref(),
        ingest.min_countries_per_item,
        &params,
        on_projection,
        &stats_params,
    )?;
    let body = stages::render_netstats(&rows, emit);
    let name = format!("netstats.{}", emit.extension());
    stages::write_artifacts(&output.out_dir, &[(name, body)])
}

fn cmd_regress(
    scores: PathBuf,
    openness: Option<PathBuf>,
    regress: RegressArgs,
    output: OutputArgs,
) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let scores_tsv = fs::read_to_string(&scores)
        .map_err(|e| usage(format!("cannot read {}: {e}", scores.display())))?;
    let openness_tsv = match &openness {
        Some(path) => Some(
            fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let report = CentralityReport::<f64>::from_tsv(&scores_tsv, openness_tsv.as_deref())?;
    let cov_file = fs::File::open(&regress.covariates)
        .map_err(|e| usage(format!("cannot read {}: {e}", regress.covariates.display())))?;
    let cov = CovariateTable::<f64>::from_csv(std::io::BufReader::new(cov_file))?;
    let outcomes = stages::resolve_outcomes(regress.outcome.as_deref())?;
    let artifacts = stages::regression_artifacts(
        &cov,
        &report,
        &outcomes,
        &regress.extra_controls,
        regress.model.as_deref(),
        emit,
    )?;
    let mut files = Vec::new();
    for artifact in artifacts {
        files.push((
            format!("regression_{}.{}", artifact.outcome, emit.extension()),
            artifact.tsv_or_json,
        ));
        files.push((
            format!("regression_{}.txt", artifact.outcome),
            artifact.text_table,
        ));
    }
    stages::write_artifacts(&output.out_dir, &files)
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    config: Option<PathBuf>,
    blocks: Option<String>,
    items_per_country: Option<usize>,
    intra: Option<f64>,
    inter: Option<f64>,
    bridge: Vec<String>,
    heavy_tail: Option<f64>,
    seed: Option<u64>,
    out_dir: PathBuf,
) -> Result<(), CliError> {
    let mut cfg = SynthSettings::default();
    if let Some(path) = &config {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_file(&text)?;
    }
    if let Some(spec) = &blocks {
        cfg.blocks = Some(parse_blocks(spec)?);
    }
    if let Some(v) = items_per_country {
        cfg.items_per_country = Some(v);
    }
    if let Some(v) = intra {
        cfg.intra = Some(v);
    }
    if let Some(v) = inter {
        cfg.inter = Some(v);
    }
    if !bridge.is_empty() {
        cfg.bridges = bridge
            .iter()
            .map(|spec| parse_bridge(spec))
            .collect::<Result<_, _>>()?;
    }
    if heavy_tail.is_some() {
        cfg.heavy_tail = heavy_tail;
    }
    if let Some(v) = seed {
        cfg.seed = Some(v);
    }

    let planted = cfg.into_config()?;
    let (records, truth) = synthgen::generate(&planted)?;
    stages::write_artifacts(
        &out_dir,
        &[
            (
                "listings.jsonl".to_owned(),
                synthgen::listings_jsonl(&records),
            ),
            ("truth.csv".to_owned(), synthgen::ground_truth_csv(&truth)),
        ],
    )
}

#[derive(Default)]
struct SynthSettings {
    blocks: Option<Vec<synthgen::BlockSpec>>,
    items_per_country: Option<usize>,
    intra: Option<f64>,
    inter: Option<f64>,
    bridges: Vec<synthgen::BridgeSpec>,
    heavy_tail: Option<f64>,
    seed: Option<u64>,
}

impl SynthSettings {
    fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", line_no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: String| usage(format!("config line {}: {e}", line_no + 1));
            match key {
                "blocks" => self.blocks = Some(parse_blocks(value)?),
                "items_per_country" => {
                    self.items_per_country =
                        Some(value.parse().map_err(|_| bad("bad count".into()))?)
                }
                "intra_block_share" => {
                    self.intra = Some(value.parse().map_err(|_| bad("bad share".into()))?)
                }
                "inter_block_share" => {
                    self.inter = Some(value.parse().map_err(|_| bad("bad share".into()))?)
                }
                "bridge" => {
                    self.bridges = value
                        .split(',')
                        .map(parse_bridge)
                        .collect::<Result<_, _>>()?
                }
                "zipf_exponent" => {
                    self.heavy_tail = Some(value.parse().map_err(|_| bad("bad exponent".into()))?)
                }
                "seed" => self.seed = Some(value.parse().map_err(|_| bad("bad seed".into()))?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    fn into_config(self) -> Result<synthgen::PlantedConfig, CliError> {
        Ok(synthgen::PlantedConfig {
            blocks: self
                .blocks
                .ok_or_else(|| usage("synth needs --blocks or a config file with blocks="))?,
            items_per_country: self.items_per_country.unwrap_or(40),
            intra_block_share: self.intra.unwrap_or(1.0),
            inter_block_share: self.inter.unwrap_or(0.0),
            bridge_countries: self.bridges,
            seed: self.seed.unwrap_or(0),
            zipf_exponent: self.heavy_tail,
        })
    }
}

fn parse_blocks(spec: &str) -> Result<Vec<synthgen::BlockSpec>, CliError> {
    spec.split(',')
        .map(|part| {
            let (id, count) = part
                .split_once(':')
                .ok_or_else(|| usage(format!("bad block spec {part:?} (want id:count)")))?;
            Ok(synthgen::BlockSpec {
                id: id.trim().to_owned(),
                countries: count
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("bad block count in {part:?}")))?,
            })
        })
        .collect()
}

fn parse_bridge(spec: &str) -> Result<synthgen::BridgeSpec, CliError> {
    let weights: Result<Vec<f64>, CliError> = spec
        .split('/')
        .map(|w| {
            w.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("bad bridge weight {w:?}")))
        })
        .collect();
    Ok(synthgen::BridgeSpec { weights: weights? })
}

fn load(ingest: &IngestArgs) -> Result<stages::LoadedListings, CliError> {
    stages::load_listings(
        &ingest.input,
        ingest.format.as_deref(),
        ingest.strict,
        ingest.category.as_deref(),
        ingest.min_countries_per_item,
    )
}

fn params_of(backbone: &BackboneArgs) -> Result<stages::BackboneParams, CliError> {
    stages::BackboneParams::new(
        backbone.significance,
        &backbone.backbone_method,
        backbone.mc_samples,
        backbone.seed,
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_pipeline(
    ingest: IngestArgs,
    backbone: BackboneArgs,
    centrality: CentralityArgs,
    netstats: NetstatsArgs,
    covariates: Option<PathBuf>,
    outcome: Option<String>,
    model: Option<String>,
    extra_controls: Vec<String>,
    output: OutputArgs,
) -> Result<(), CliError> {
    let emit = Emit::parse(&output.emit)?;
    let params = params_of(&backbone)?;
    let apl_scope = stages::parse_apl_scope(&netstats.apl_scope)?;
    let primary_alpha = Alpha::new(centrality.alpha).map_err(CliError::from)?;
    let grid = stages::parse_alpha_grid(centrality.alpha, centrality.alpha_grid.as_deref())?;

    let loaded = load(&ingest)?;
    let mut files: Vec<(String, String)> = Vec::new();
    if let Some(rejects) = &loaded.rejects_tsv {
        files.push(("rejects.tsv".to_owned(), rejects.clone()));
    }

    let projection = stages::project_exact(&loaded.bipartite)?;
    files.push((
        format!("projection.{}", emit.extension()),
        match emit {
            Emit::Tsv => projection.to_tsv(),
            Emit::Json => projection.to_json(),
        },
    ));

    let bb = stages::backbone_of(&projection.to_real::<f64>(), &params)?;
    files.push((
        format!("backbone.{}", emit.extension()),
        match emit {
            Emit::Tsv => bb.to_tsv(),
            Emit::Json => bb.to_json(),
        },
    ));

    let graph = if centrality.on_projection {
        projection.to_real::<f64>()
    } else {
        bb.retained_graph()
    };

    // the batch surface must produce a table even when the backbone
    // disconnects, so closeness is always component-restricted here
    let primary_scores = centrality_scores(&graph, primary_alpha, true)?;
    files.push((
        format!("centrality.{}", emit.extension()),
        stages::centrality_table(std::slice::from_ref(&primary_scores), emit),
    ));
    if centrality.alpha_grid.is_some() {
        let mut blocks = Vec::new();
        for alpha in &grid {
            blocks.push(centrality_scores(&graph, *alpha, true)?);
        }
        files.push((
            format!("centrality_grid.{}", emit.extension()),
            stages::centrality_table(&blocks, emit),
        ));
    }

    let openness_scores = all_openness::<f64>(&loaded.bipartite)?;
    files.push((
        format!("openness.{}", emit.extension()),
        stages::render_openness(&openness_scores, emit),
    ));

    let stats_params = stages::NetstatsParams {
        apl_scope,
        drop_isolates: netstats.drop_isolates,
        seed: backbone.seed,
    };
    let rows = stages::netstats_rows(
        &loaded.records,
        ingest.category.as_deref(),
        ingest.min_countries_per_item,
        &params,
        centrality.on_projection,
        &stats_params,
    )?;
    files.push((
        format!("netstats.{}", emit.extension()),
        stages::render_netstats(&rows, emit),
    ));

    if let Some(cov_path) = &covariates {
        let cov_file = fs::File::open(cov_path)
            .map_err(|e| usage(format!("cannot read {}: {e}", cov_path.display())))?;
        let cov = CovariateTable::<f64>::from_csv(std::io::BufReader::new(cov_file))?;
        let report = CentralityReport::from_scores(&primary_scores)
            .with_openness(&openness_scores)
            .map_err(CliError::from)?;
        let outcomes = stages::resolve_outcomes(outcome.as_deref())?;
        for artifact in stages::regression_artifacts(
            &cov,
            &report,
            &outcomes,
            &extra_controls,
            model.as_deref(),
            emit,
        )? {
            files.push((
                format!("regression_{}.{}", artifact.outcome, emit.extension()),
                artifact.tsv_or_json,
            ));
            files.push((
                format!("regression_{}.txt", artifact.outcome),
                artifact.text_table,
            ));
        }
    }

    let mut outputs: Vec<String> = files.iter().map(|(name, _)| name.clone()).collect();
    outputs.push("manifest.json".to_owned());
    outputs.sort();
    let manifest = serde_json::json!({
        "tool": "coconet",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "pipeline",
        // node counts with and without backbone isolates, since summary
        // statistics can reasonably be read either way
        "backbone": {
            "nodes": bb.nodes().len(),
            "nodes_non_isolated": bb.non_isolated_count(),
            "edges_retained": bb.retained_count(),
            "edges_total": bb.edges().len(),
        },
        "parameters": {
            "input": ingest.input.display().to_string(),
            "format": ingest.format,
            "category": ingest.category,
            "min_countries_per_item": ingest.min_countries_per_item,
            "strict": ingest.strict,
            "significance": params.significance,
            "backbone_method": backbone.backbone_method,
            "mc_samples": backbone.mc_samples,
            "seed": backbone.seed,
            "alpha": centrality.alpha,
            "alpha_grid": centrality.alpha_grid,
            "component_restrict": true,
            "on_projection": centrality.on_projection,
            "apl_scope": netstats.apl_scope,
            "drop_isolates": netstats.drop_isolates,
            "covariates": covariates.as_ref().map(|p| p.display().to_string()),
            "outcome": outcome,
            "model": model,
            "extra_controls": extra_controls,
            "emit": output.emit,
        },
        "outputs": outputs,
    });
    files.push((
        "manifest.json".to_owned(),
        serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    ));

    stages::write_artifacts(&output.out_dir, &files)
}
