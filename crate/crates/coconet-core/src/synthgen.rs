//! Synthetic listing datasets with planted block structure and known
//! ground truth, for validating the whole pipeline end to end.
//!
//! Each block owns an item pool; a country fills its list by drawing
//! distinct items from the pools according to its mixing distribution.
//! Bridge countries get explicit per-block weights instead of the shared
//! intra/inter split. Item popularity within a pool is uniform by default
//! or Zipf-tilted, which produces the rare strongly-tied pairs that the
//! inverse-popularity weighting is designed to favor.

use crate::country::CountryCode;
use crate::error::Error;
use crate::ingest::ListingRecord;
use chrono::NaiveDate;
use rand::distributions::{Distribution, WeightedIndex};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Block pool size as a multiple of items_per_country.
const POOL_FACTOR: usize = 2;

#[derive(Debug, Clone)]
pub struct BlockSpec {
    pub id: String,
    pub countries: usize,
}

/// Extra country drawing from every block with the given weights.
#[derive(Debug, Clone)]
pub struct BridgeSpec {
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub blocks: Vec<BlockSpec>,
    pub items_per_country: usize,
    /// Probability mass a regular country puts on its own block's pool.
    pub intra_block_share: f64,
    /// Mass spread evenly over the other blocks' pools.
    pub inter_block_share: f64,
    pub bridge_countries: Vec<BridgeSpec>,
    pub seed: u64,
    /// Zipf exponent for item popularity inside a pool; None = uniform.
    pub zipf_exponent: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GroundTruthRow {
    pub country: CountryCode,
    pub block: String,
    pub bridge: bool,
    /// Normalized per-block drawing probabilities.
    pub mixing: Vec<f64>,
}

fn share_ok(x: f64) -> bool {
    x.is_finite() && (0.0..=1.0).contains(&x)
}

fn validate(cfg: &PlantedConfig) -> Result<(), Error> {
    if cfg.blocks.is_empty() {
        return Err(Error::BadConfig("no blocks configured".into()));
    }
    if cfg.blocks.iter().any(|b| b.countries == 0) {
        return Err(Error::BadConfig(
            "every block needs at least one country".into(),
        ));
    }
    if cfg.items_per_country == 0 {
        return Err(Error::BadConfig(
            "items_per_country must be at least 1".into(),
        ));
    }
    if !share_ok(cfg.intra_block_share) || !share_ok(cfg.inter_block_share) {
        return Err(Error::BadConfig(
            "intra_block_share and inter_block_share must lie in [0, 1]".into(),
        ));
    }
    if cfg.intra_block_share + cfg.inter_block_share <= 0.0 {
        return Err(Error::BadConfig(
            "intra_block_share + inter_block_share must be positive".into(),
        ));
    }
    for (i, bridge) in cfg.bridge_countries.iter().enumerate() {
        if bridge.weights.len() != cfg.blocks.len() {
            return Err(Error::BadConfig(format!(
                "bridge {i} has {} weights for {} blocks",
                bridge.weights.len(),
                cfg.blocks.len()
            )));
        }
        if bridge.weights.iter().any(|&w| !w.is_finite() || w < 0.0)
            || bridge.weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::BadConfig(format!(
                "bridge {i} weights must be non-negative with a positive sum"
            )));
        }
    }
    if let Some(s) = cfg.zipf_exponent {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::BadConfig(
                "zipf exponent must be non-negative".into(),
            ));
        }
    }
    Ok(())
}

/// Country code for the i-th generated country: AAA, AAB, ...
fn country_for(index: usize) -> CountryCode {
    let mut chars = [b'A'; 3];
    let mut rest = index;
    for slot in (0..3).rev() {
        chars[slot] = b'A' + (rest % 26) as u8;
        rest /= 26;
    }
    assert!(rest == 0, "more than 26^3 countries requested");
    CountryCode::new(std::str::from_utf8(&chars).unwrap()).unwrap()
}

/// Draw `count` distinct indices from 0..pool with the given weights
/// (None = uniform). Falls back to a deterministic sweep if rejection
/// stalls on a very skewed distribution.
fn draw_distinct(
    rng: &mut ChaCha8Rng,
    pool: usize,
    count: usize,
    weights: Option<&WeightedIndex<f64>>,
) -> Vec<usize> {
    let count = count.min(pool);
    let mut taken = vec![false; pool];
    let mut out = Vec::with_capacity(count);
    match weights {
        None => {
            let picked = rand::seq::index::sample(rng, pool, count);
            out.extend(picked.iter());
        }
        Some(w) => {
            let mut attempts = 0usize;
            let cap = 50 * count.max(1);
            while out.len() < count && attempts < cap {
                attempts += 1;
                let pick = w.sample(rng);
                if !taken[pick] {
                    taken[pick] = true;
                    out.push(pick);
                }
            }
            let mut next = 0usize;
            while out.len() < count {
                if !taken[next] {
                    taken[next] = true;
                    out.push(next);
                }
                next += 1;
            }
        }
    }
    out
}

/// Generate listings plus the ground-truth table. Byte-identical output
/// for a fixed config and seed.
pub fn generate(cfg: &PlantedConfig) -> Result<(Vec<ListingRecord>, Vec<GroundTruthRow>), Error> {
    validate(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let date = NaiveDate::from_ymd_opt(2015, 1, 1).unwrap();
    let nblocks = cfg.blocks.len();
    let pool_size = cfg.items_per_country * POOL_FACTOR;

    let item_id = |block: usize, item: usize| format!("B{block}I{item:05}");
    let pool_weights: Option<Vec<WeightedIndex<f64>>> = cfg.zipf_exponent.map(|s| {
        (0..nblocks)
            .map(|_| {
                let w: Vec<f64> = (1..=pool_size).map(|r| (r as f64).powf(-s)).collect();
                WeightedIndex::new(w).expect("positive zipf weights")
            })
            .collect()
    });

    // mixing distribution per country, block countries first, bridges after
    let mut mixings: Vec<(String, bool, Vec<f64>)> = Vec::new();
    for (b, block) in cfg.blocks.iter().enumerate() {
        let mut weights = vec![0.0; nblocks];
        for (o, w) in weights.iter_mut().enumerate() {
            *w = if o == b {
                cfg.intra_block_share
            } else if nblocks > 1 {
                cfg.inter_block_share / (nblocks - 1) as f64
            } else {
                0.0
            };
        }
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        for _ in 0..block.countries {
            mixings.push((block.id.clone(), false, weights.clone()));
        }
    }
    for bridge in &cfg.bridge_countries {
        let total: f64 = bridge.weights.iter().sum();
        let weights: Vec<f64> = bridge.weights.iter().map(|w| w / total).collect();
        mixings.push(("bridge".to_owned(), true, weights));
    }

    let mut records = Vec::new();
    let mut truth = Vec::new();
    for (index, (block_id, bridge, mixing)) in mixings.iter().enumerate() {
        let country = country_for(index);
        // split the list across pools, then draw distinct items per pool
        let mut per_block = vec![0usize; nblocks];
        let chooser = WeightedIndex::new(mixing.iter().map(|&w| w.max(0.0)))
            .map_err(|e| Error::BadConfig(format!("mixing weights: {e}")))?;
        for _ in 0..cfg.items_per_country {
            per_block[chooser.sample(&mut rng)] += 1;
        }
        for (b, &count) in per_block.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let picks = draw_distinct(
                &mut rng,
                pool_size,
                count,
                pool_weights.as_ref().map(|w| &w[b]),
            );
            for pick in picks {
                records.push(ListingRecord {
                    date,
                    country,
                    item_id: item_id(b, pick),
                    category: None,
                });
            }
        }
        truth.push(GroundTruthRow {
            country,
            block: block_id.clone(),
            bridge: *bridge,
            mixing: mixing.clone(),
        });
    }
    Ok((records, truth))
}

/// Ground truth as CSV: country, block, is_bridge, mixing (slash-joined
/// per-block probabilities).
pub fn ground_truth_csv(rows: &[GroundTruthRow]) -> String {
    let mut out = String::from("country,block,is_bridge,mixing\n");
    for row in rows {
        let mixing: Vec<String> = row.mixing.iter().map(|w| format!("{w}")).collect();
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.country,
            row.block,
            row.bridge,
            mixing.join("/")
        ));
    }
    out
}

/// Listings as JSONL, one record per line, generation order.
pub fn listings_jsonl(records: &[ListingRecord]) -> String {
    let mut out = String::new();
    for rec in records {
        out.push_str(&serde_json::to_string(rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::connected_components;
    use crate::ingest::build_bipartite;
    use crate::projection::project;
    use crate::Weight;

    fn two_block_config(seed: u64) -> PlantedConfig {
        PlantedConfig {
            blocks: vec![
                BlockSpec {
                    id: "left".into(),
                    countries: 4,
                },
                BlockSpec {
                    id: "right".into(),
                    countries: 4,
                },
            ],
            items_per_country: 20,
            intra_block_share: 1.0,
            inter_block_share: 0.0,
            bridge_countries: vec![],
            seed,
            zipf_exponent: None,
        }
    }

    #[test]
    fn zero_inter_share_gives_two_components() {
        let (records, truth) = generate(&two_block_config(3)).unwrap();
        assert_eq!(truth.len(), 8);
        let b = build_bipartite(&records, None, 1).unwrap();
        let g = project::<Weight>(&b).unwrap().to_real::<f64>();
        let (components, _) = connected_components(&g);
        assert_eq!(components, 2);
    }

    #[test]
    fn identical_seeds_reproduce_identical_output() {
        let (r1, t1) = generate(&two_block_config(42)).unwrap();
        let (r2, t2) = generate(&two_block_config(42)).unwrap();
        assert_eq!(listings_jsonl(&r1), listings_jsonl(&r2));
        assert_eq!(ground_truth_csv(&t1), ground_truth_csv(&t2));
        let (r3, _) = generate(&two_block_config(43)).unwrap();
        assert_ne!(listings_jsonl(&r1), listings_jsonl(&r3));
    }

    #[test]
    fn empty_blocks_are_rejected() {
        let mut cfg = two_block_config(0);
        cfg.blocks.clear();
        assert!(matches!(generate(&cfg), Err(Error::BadConfig(_))));
        let mut cfg = two_block_config(0);
        cfg.blocks[0].countries = 0;
        assert!(matches!(generate(&cfg), Err(Error::BadConfig(_))));
    }

    #[test]
    fn shares_must_be_probabilities() {
        let mut cfg = two_block_config(0);
        cfg.intra_block_share = 1.4;
        assert!(matches!(generate(&cfg), Err(Error::BadConfig(_))));
        let mut cfg = two_block_config(0);
        cfg.intra_block_share = 0.0;
        cfg.inter_block_share = 0.0;
        assert!(matches!(generate(&cfg), Err(Error::BadConfig(_))));
    }

    #[test]
    fn bridge_weights_are_validated() {
        let mut cfg = two_block_config(0);
        cfg.bridge_countries = vec![BridgeSpec { weights: vec![0.5] }];
        assert!(matches!(generate(&cfg), Err(Error::BadConfig(_))));
        let mut cfg = two_block_config(0);
        cfg.bridge_countries = vec![BridgeSpec {
            weights: vec![0.0, 0.0],
        }];
        assert!(matches!(generate(&cfg), Err(Error::BadConfig(_))));
    }

    #[test]
    fn bridge_country_connects_the_blocks() {
        let mut cfg = two_block_config(11);
        cfg.bridge_countries = vec![BridgeSpec {
            weights: vec![0.5, 0.5],
        }];
        let (records, truth) = generate(&cfg).unwrap();
        assert_eq!(truth.len(), 9);
        let bridge_row = truth.iter().find(|t| t.bridge).unwrap();
        assert_eq!(bridge_row.block, "bridge");
        assert_eq!(bridge_row.mixing, vec![0.5, 0.5]);
        let b = build_bipartite(&records, None, 1).unwrap();
        let g = project::<Weight>(&b).unwrap().to_real::<f64>();
        let (components, _) = connected_components(&g);
        assert_eq!(components, 1);
    }

    #[test]
    fn zipf_popularity_skews_out_degrees() {
        let mut cfg = two_block_config(5);
        cfg.blocks[0].countries = 8;
        cfg.blocks.pop();
        cfg.zipf_exponent = Some(1.5);
        let (records, _) = generate(&cfg).unwrap();
        let b = build_bipartite(&records, None, 1).unwrap();
        let max_degree = (0..b.items().len()).map(|k| b.out_degree(k)).max().unwrap();
        let singles = (0..b.items().len())
            .filter(|&k| b.out_degree(k) == 1)
            .count();
        // top of the pool is listed by most countries, the tail barely at all
        assert!(max_degree >= 6, "max out-degree {max_degree}");
        assert!(singles > 0);
    }

    #[test]
    fn country_codes_are_sequential_letters() {
        assert_eq!(country_for(0).as_str(), "AAA");
        assert_eq!(country_for(1).as_str(), "AAB");
        assert_eq!(country_for(26).as_str(), "ABA");
    }
}
