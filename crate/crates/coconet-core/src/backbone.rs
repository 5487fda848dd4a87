//! Statistical backbone of the projected graph via the disparity filter.
//!
//! The null model spreads a node's strength uniformly at random over its
//! k edges (k - 1 uniform break points partitioning the unit interval).
//! For an edge carrying share p_ij of the node's strength, the chance the
//! null assigns a share at least that large is (1 - p_ij)^(k-1) - the
//! edge's p-value, available in closed form (`Analytic`) or as an
//! empirical draw count (`MonteCarlo`). An edge is retained when it is
//! significant at either endpoint.

use crate::country::CountryCode;
use crate::error::Error;
use crate::hash::fnv1a64_seeded;
use crate::projection::WeightedCountryGraph;
use crate::scalar::Real;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How edge significance is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BackboneMethod {
    /// Closed-form disparity filter p-value (1 - p_ij)^(k-1).
    #[default]
    Analytic,
    /// Empirical null: fraction of draws whose designated share of the
    /// unit interval is at least p_ij. Reproducible for a fixed seed and
    /// sample count regardless of evaluation order.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Projection edge annotated with per-endpoint significance.
#[derive(Debug, Clone, PartialEq)]
pub struct BackboneEdge<F> {
    pub i: u32,
    pub j: u32,
    pub weight: F,
    pub p_i: F,
    pub p_j: F,
    pub retained: bool,
}

/// The projected graph with its significance filter applied. All
/// projection edges are kept with a `retained` flag; the node set is
/// unchanged, so isolates are preserved for downstream modules to handle.
#[derive(Debug, Clone, PartialEq)]
pub struct BackboneGraph<F> {
    nodes: Vec<CountryCode>,
    edges: Vec<BackboneEdge<F>>,
    pub significance: F,
}

impl<F: Real> BackboneGraph<F> {
    pub fn nodes(&self) -> &[CountryCode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[BackboneEdge<F>] {
        &self.edges
    }

    pub fn retained_count(&self) -> usize {
        self.edges.iter().filter(|e| e.retained).count()
    }

    /// Nodes incident to at least one retained edge.
    pub fn non_isolated_count(&self) -> usize {
        let mut seen = vec![false; self.nodes.len()];
        for e in self.edges.iter().filter(|e| e.retained) {
            seen[e.i as usize] = true;
            seen[e.j as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    /// The retained edges as a weighted graph over the full node set.
    pub fn retained_graph(&self) -> WeightedCountryGraph<F> {
        let edges: Vec<(CountryCode, CountryCode, F)> = self
            .edges
            .iter()
            .filter(|e| e.retained)
            .map(|e| (self.nodes[e.i as usize], self.nodes[e.j as usize], e.weight))
            .collect();
        WeightedCountryGraph::from_edges(&self.nodes, &edges).expect("backbone edges are valid")
    }

    /// Edge list with columns i, j, weight, p_i, p_j, retained.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\tj\tweight\tp_i\tp_j\tretained\n");
        for e in &self.edges {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                self.nodes[e.i as usize],
                self.nodes[e.j as usize],
                e.weight,
                e.p_i,
                e.p_j,
                e.retained
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "i": self.nodes[e.i as usize].as_str(),
                    "j": self.nodes[e.j as usize].as_str(),
                    "weight": format!("{}", e.weight),
                    "p_i": e.p_i.to_f64_lossy(),
                    "p_j": e.p_j.to_f64_lossy(),
                    "retained": e.retained,
                })
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("backbone serializes")
    }
}

/// Deterministic per-(edge, endpoint) stream tag so Monte-Carlo p-values
/// do not depend on evaluation order.
fn edge_tag(nodes: &[CountryCode], a: u32, b: u32, endpoint: u32) -> u64 {
    fnv1a64_seeded(
        endpoint as u64,
        format!("{}|{}", nodes[a as usize], nodes[b as usize]).as_bytes(),
    )
}

fn significance_at<F: Real>(
    share: F,
    degree: usize,
    method: &BackboneMethod,
    rng_tag: u64,
) -> Result<F, Error> {
    if degree <= 1 {
        return Ok(F::one());
    }
    let breaks = degree - 1;
    match *method {
        BackboneMethod::Analytic => Ok((F::one() - share).powi(breaks as i32)),
        BackboneMethod::MonteCarlo { samples, seed } => {
            if samples < 1000 {
                return Err(Error::TooFewSamples(samples));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ rng_tag);
            let share = share.to_f64_lossy();
            let mut hits = 0usize;
            for _ in 0..samples {
                // the designated share is the segment before the smallest
                // break point; its null marginal is Beta(1, k-1)
                let mut lowest = 1.0f64;
                for _ in 0..breaks {
                    let u: f64 = rng.gen();
                    if u < lowest {
                        lowest = u;
                    }
                }
                if lowest >= share {
                    hits += 1;
                }
            }
            Ok(F::from_f64_lossy(hits as f64 / samples as f64))
        }
    }
}

/// p-value of the edge {i, j} under the uniform null at the given
/// endpoint. Degree-1 endpoints return 1.0 by convention.
pub fn edge_significance<F: Real>(
    g: &WeightedCountryGraph<F>,
    i: &CountryCode,
    j: &CountryCode,
    endpoint: &CountryCode,
    method: &BackboneMethod,
) -> Result<F, Error> {
    if endpoint != i && endpoint != j {
        return Err(Error::UnknownCountry(format!(
            "endpoint {endpoint} is not part of edge {i}-{j}"
        )));
    }
    let ei = g
        .node_index(i)
        .ok_or_else(|| Error::UnknownCountry(i.to_string()))?;
    let ej = g
        .node_index(j)
        .ok_or_else(|| Error::UnknownCountry(j.to_string()))?;
    let end = if endpoint == i { ei } else { ej };
    let (a, b) = (ei.min(ej) as u32, ei.max(ej) as u32);
    let weight = g
        .edges()
        .iter()
        .find(|&&(x, y, _)| (x, y) == (a, b))
        .map(|&(_, _, w)| w)
        .ok_or_else(|| Error::UnknownCountry(format!("no edge {i}-{j}")))?;

    let strength = g.strength(end);
    if !(strength > F::zero()) {
        return Err(Error::ZeroStrength(endpoint.to_string()));
    }
    let share = weight / strength;
    let tag = edge_tag(g.nodes(), a, b, end as u32);
    significance_at(share, g.degree(end), method, tag)
}

/// Filter the graph to edges significant at level `significance` on at
/// least one endpoint. Isolated nodes stay in the node set.
pub fn extract_backbone<F: Real>(
    g: &WeightedCountryGraph<F>,
    significance: F,
    method: &BackboneMethod,
) -> Result<BackboneGraph<F>, Error> {
    if g.node_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    if !(significance > F::zero() && significance < F::one()) {
        return Err(Error::BadThreshold(format!("{significance}")));
    }
    if let BackboneMethod::MonteCarlo { samples, .. } = method {
        if *samples < 1000 {
            return Err(Error::TooFewSamples(*samples));
        }
    }

    let degrees: Vec<usize> = (0..g.node_count()).map(|v| g.degree(v)).collect();
    let strengths: Vec<F> = (0..g.node_count()).map(|v| g.strength(v)).collect();

    let mut edges = Vec::with_capacity(g.edge_count());
    for &(i, j, w) in g.edges() {
        let p_at = |end: u32| -> Result<F, Error> {
            let s = strengths[end as usize];
            if !(s > F::zero()) {
                return Err(Error::ZeroStrength(g.nodes()[end as usize].to_string()));
            }
            significance_at(
                w / s,
                degrees[end as usize],
                method,
                edge_tag(g.nodes(), i, j, end),
            )
        };
        let p_i = p_at(i)?;
        let p_j = p_at(j)?;
        let retained = p_i.min(p_j) < significance;
        edges.push(BackboneEdge {
            i,
            j,
            weight: w,
            p_i,
            p_j,
            retained,
        });
    }
    Ok(BackboneGraph {
        nodes: g.nodes().to_vec(),
        edges,
        significance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn code(c: &str) -> CountryCode {
        CountryCode::new(c).unwrap()
    }

    /// Star with one center and the given spoke weights.
    fn star(weights: &[f64]) -> (WeightedCountryGraph<f64>, CountryCode, Vec<CountryCode>) {
        let center = code("HUB");
        let leaves: Vec<CountryCode> = (0..weights.len())
            .map(|t| {
                let c = (b'A' + t as u8) as char;
                code(&format!("{c}{c}{c}"))
            })
            .collect();
        let mut nodes = vec![center];
        nodes.extend(&leaves);
        let edges: Vec<_> = leaves
            .iter()
            .zip(weights)
            .map(|(l, &w)| (center, *l, w))
            .collect();
        (
            WeightedCountryGraph::from_edges(&nodes, &edges).unwrap(),
            center,
            leaves,
        )
    }

    #[test]
    fn analytic_p_for_degree_two_dominant_edge() {
        // k=2, p_ij=0.9 -> p = (1-0.9)^1 = 0.1
        let (g, center, leaves) = star(&[9.0, 1.0]);
        let p =
            edge_significance(&g, &center, &leaves[0], &center, &BackboneMethod::Analytic).unwrap();
        assert_abs_diff_eq!(p, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn analytic_p_for_degree_three_dominant_edge() {
        // k=3, p_ij=0.9 -> p = (1-0.9)^2 = 0.01
        let (g, center, leaves) = star(&[18.0, 1.0, 1.0]);
        let p =
            edge_significance(&g, &center, &leaves[0], &center, &BackboneMethod::Analytic).unwrap();
        assert_abs_diff_eq!(p, 0.01, epsilon = 1e-12);
    }

    #[test]
    fn degree_one_endpoint_is_never_significant() {
        let (g, center, leaves) = star(&[5.0, 1.0]);
        for method in [
            BackboneMethod::Analytic,
            BackboneMethod::MonteCarlo {
                samples: 1000,
                seed: 1,
            },
        ] {
            let p = edge_significance(&g, &center, &leaves[0], &leaves[0], &method).unwrap();
            assert_eq!(p, 1.0);
        }
    }

    #[test]
    fn montecarlo_agrees_with_closed_form() {
        let (g, center, leaves) = star(&[6.0, 2.0, 1.0, 1.0]);
        let mc = BackboneMethod::MonteCarlo {
            samples: 100_000,
            seed: 7,
        };
        for leaf in &leaves {
            let pa =
                edge_significance(&g, &center, leaf, &center, &BackboneMethod::Analytic).unwrap();
            let pm = edge_significance(&g, &center, leaf, &center, &mc).unwrap();
            assert_abs_diff_eq!(pa, pm, epsilon = 0.01);
        }
    }

    #[test]
    fn montecarlo_rejects_tiny_sample_counts() {
        let (g, center, leaves) = star(&[5.0, 1.0]);
        let err = edge_significance(
            &g,
            &center,
            &leaves[0],
            &center,
            &BackboneMethod::MonteCarlo {
                samples: 999,
                seed: 0,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::TooFewSamples(999)));
    }

    #[test]
    fn star_keeps_dominant_edge_and_drops_noise() {
        let (g, _, _) = star(&[24.0, 0.25, 0.25, 0.25, 0.25]);
        let bb = extract_backbone(&g, 0.05, &BackboneMethod::Analytic).unwrap();
        let dominant: Vec<bool> = bb.edges().iter().map(|e| e.retained).collect();
        assert_eq!(dominant.iter().filter(|&&r| r).count(), 1);
        let kept = bb.edges().iter().find(|e| e.retained).unwrap();
        assert_eq!(kept.weight, 24.0);
        assert_eq!(bb.retained_count(), 1);
        assert_eq!(bb.non_isolated_count(), 2);
        assert_eq!(bb.nodes().len(), 6);
    }

    #[test]
    fn uniform_clique_has_no_backbone_at_five_percent() {
        // K4 with equal weights: every share is 1/3, p = (2/3)^2 at both ends
        let nodes: Vec<CountryCode> = ["AAA", "BBB", "CCC", "DDD"]
            .iter()
            .map(|c| code(c))
            .collect();
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((nodes[a], nodes[b], 2.5f64));
            }
        }
        let g = WeightedCountryGraph::from_edges(&nodes, &edges).unwrap();
        let bb = extract_backbone(&g, 0.05, &BackboneMethod::Analytic).unwrap();
        assert_eq!(bb.retained_count(), 0);
        for e in bb.edges() {
            assert_abs_diff_eq!(e.p_i, 4.0 / 9.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e.p_j, 4.0 / 9.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn near_one_threshold_keeps_every_edge_with_a_degree_two_endpoint() {
        let (g, _, _) = star(&[5.0, 1.0, 0.5]);
        let bb = extract_backbone(&g, 1.0 - 1e-9, &BackboneMethod::Analytic).unwrap();
        assert_eq!(bb.retained_count(), g.edge_count());
    }

    #[test]
    fn threshold_must_be_inside_unit_interval() {
        let (g, _, _) = star(&[5.0, 1.0]);
        for t in [0.0, 1.0, -0.2, 1.7] {
            assert!(matches!(
                extract_backbone(&g, t, &BackboneMethod::Analytic),
                Err(Error::BadThreshold(_))
            ));
        }
    }

    #[test]
    fn retention_is_monotone_in_threshold() {
        let (g, _, _) = star(&[10.0, 3.0, 1.0, 0.2, 0.1]);
        let mut previous: Option<Vec<bool>> = None;
        for t in [0.01, 0.05, 0.2, 0.5, 0.9] {
            let bb = extract_backbone(&g, t, &BackboneMethod::Analytic).unwrap();
            let retained: Vec<bool> = bb.edges().iter().map(|e| e.retained).collect();
            if let Some(prev) = &previous {
                for (was, now) in prev.iter().zip(&retained) {
                    assert!(!was | now, "raising the threshold must not drop edges");
                }
            }
            previous = Some(retained);
        }
    }

    #[test]
    fn retention_is_invariant_under_weight_scaling() {
        let (g, _, _) = star(&[10.0, 3.0, 1.0, 0.2]);
        let scaled = g.map_weights(|w| w * 3.7);
        let a = extract_backbone(&g, 0.05, &BackboneMethod::Analytic).unwrap();
        let b = extract_backbone(&scaled, 0.05, &BackboneMethod::Analytic).unwrap();
        let ra: Vec<bool> = a.edges().iter().map(|e| e.retained).collect();
        let rb: Vec<bool> = b.edges().iter().map(|e| e.retained).collect();
        assert_eq!(ra, rb);
    }

    #[test]
    fn montecarlo_is_reproducible_and_order_independent() {
        let (g, center, leaves) = star(&[6.0, 2.0, 1.0]);
        let mc = BackboneMethod::MonteCarlo {
            samples: 2000,
            seed: 99,
        };
        let forward: Vec<f64> = leaves
            .iter()
            .map(|l| edge_significance(&g, &center, l, &center, &mc).unwrap())
            .collect();
        let backward: Vec<f64> = leaves
            .iter()
            .rev()
            .map(|l| edge_significance(&g, &center, l, &center, &mc).unwrap())
            .collect();
        let mut backward = backward;
        backward.reverse();
        assert_eq!(forward, backward);
    }
}
