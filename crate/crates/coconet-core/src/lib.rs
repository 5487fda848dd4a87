//! Analytics for country-level co-consumption networks.
//!
//! The pipeline goes from raw (date, country, item) popularity listings to:
//!
//! 1. a deduplicated country x item bipartite incidence ([`ingest`]),
//! 2. an undirected country graph weighted by inverse item popularity
//!    ([`projection`], exact rational arithmetic),
//! 3. its statistically significant backbone via the disparity filter
//!    ([`backbone`]),
//! 4. closeness / betweenness centralities on generalized shortest paths
//!    with a tuning exponent, plus eigenvector centrality ([`centrality`]),
//! 5. a composite Rao-Stirling-style diversity score per country
//!    ([`openness`]),
//! 6. descriptive network statistics ([`netstats`]), and
//! 7. OLS regressions of the scores on country covariates with VIF and
//!    Breusch-Pagan diagnostics ([`inference`]).
//!
//! [`synthgen`] generates planted-structure listing datasets with known
//! ground truth for validating the whole chain.
//!
//! Numeric kernels are generic over the scalar type: graph weights accept
//! any [`scalar::WeightScalar`] (exact rationals or floats) and the
//! analytics layer any [`scalar::Real`] (f32/f64). The aliases below pin
//! the default choices.
//!
//! ```
//! use coconet_core::{ingest, projection, Weight};
//!
//! let listings = r#"
//! {"date":"2015-01-02","country":"USA","item_id":"v1"}
//! {"date":"2015-01-02","country":"DEU","item_id":"v1"}
//! {"date":"2015-01-03","country":"DEU","item_id":"v1"}
//! "#;
//! let parsed = ingest::parse_listings(
//!     listings.as_bytes(),
//!     ingest::ListingFormat::Jsonl,
//!     false,
//! )?;
//! let bipartite = ingest::build_bipartite(&parsed.records, None, 1)?;
//! let graph: projection::WeightedCountryGraph<Weight> = projection::project(&bipartite)?;
//!
//! // one item co-listed by exactly two countries ties them with weight 1,
//! // and the repeat listing collapsed into the same incidence
//! assert_eq!(graph.to_tsv(), "i\tj\tweight\nDEU\tUSA\t1\n");
//! # Ok::<(), coconet_core::Error>(())
//! ```

// negated comparisons like !(x > 0) are NaN-rejecting on purpose;
// reference constants keep their full published digits; indexed loops are
// the clearer shape for the dense kernels
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]
#![allow(clippy::needless_range_loop)]

mod hash;

pub mod backbone;
pub mod centrality;
pub mod country;
pub mod error;
pub mod inference;
pub mod ingest;
pub mod netstats;
pub mod openness;
pub mod projection;
pub mod report;
pub mod scalar;
pub mod synthgen;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use country::CountryCode;
pub use error::Error;

/// Exact projection weight: sums of 1/(n_k - 1) with small denominators.
pub type Weight = num_rational::Ratio<i128>;

/// Default floating-point scalar for the analytics layer.
pub type Real = f64;

/// Projection output in exact arithmetic.
pub type ExactGraph = projection::WeightedCountryGraph<Weight>;

/// Country graph converted to the default float scalar.
pub type RealGraph = projection::WeightedCountryGraph<Real>;

pub type Result<T> = std::result::Result<T, Error>;
