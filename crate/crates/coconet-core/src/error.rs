use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("unreadable input: {0}")]
    UnreadableInput(String),

    #[error("line {line}: {reason}")]
    MalformedLine { line: u64, reason: String },

    #[error("no records survive filtering; the bipartite graph would be empty")]
    EmptyGraph,

    #[error("unknown country {0}")]
    UnknownCountry(String),

    #[error("self-pair {0} is not a valid edge")]
    SelfPair(String),

    #[error("edge weight for {0} must be positive, got {1}")]
    NonPositiveWeight(String, String),

    #[error("node {0} has zero strength; normalized edge weights are undefined")]
    ZeroStrength(String),

    #[error("significance threshold must lie in (0, 1), got {0}")]
    BadThreshold(String),

    #[error("monte-carlo significance needs at least 1000 samples, got {0}")]
    TooFewSamples(usize),

    #[error("alpha must be non-negative, got {0}")]
    BadAlpha(f64),

    #[error("graph is disconnected ({components} components); pass component_restrict to score per component")]
    Disconnected { components: usize },

    #[error("graph is empty")]
    EmptyNetwork,

    #[error("power iteration did not converge in {iters} iterations (last residual {residual})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("neighbor sets of {0} and {1} are both empty; Jaccard dissimilarity is undefined")]
    EmptyNeighborSets(String, String),

    #[error("column {0} is constant; unit-interval rescaling is undefined")]
    ConstantColumn(String),

    #[error("missing column {0}")]
    MissingColumn(String),

    #[error("duplicate country {0} in covariate table")]
    DuplicateCountry(String),

    #[error("design matrix is rank deficient; collinear columns: {0}")]
    Collinear(String),

    #[error("need more observations than parameters: n = {n}, parameters = {params}")]
    TooFewObservations { n: usize, params: usize },

    #[error("variance inflation factors need at least 2 predictors")]
    TooFewPredictors,

    #[error("invalid generator config: {0}")]
    BadConfig(String),
}
