//! Closeness and betweenness on generalized weighted shortest paths, plus
//! eigenvector centrality by power iteration.
//!
//! Path cost follows Opsahl-style tuning: an edge of weight w costs
//! 1/w^alpha, so alpha = 0 counts hops, alpha = 1 is Dijkstra on
//! reciprocal weights, and intermediate values trade tie strength against
//! path length. Equally cheap paths are counted fractionally, with
//! equality decided by a relative tolerance because fractional exponents
//! make exact cost ties unrepresentable in floating point.

use crate::country::CountryCode;
use crate::error::Error;
use crate::hash::fnv1a64;
use crate::projection::WeightedCountryGraph;
use crate::scalar::Real;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Relative tolerance under which two path costs count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Tuning exponent for edge costs 1/w^alpha. Non-negative; 0.5 by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self, Error> {
        if alpha.is_finite() && alpha >= 0.0 {
            Ok(Alpha(alpha))
        } else {
            Err(Error::BadAlpha(alpha))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha(0.5)
    }
}

/// Single-source shortest-path summary: generalized distances, counts of
/// minimum-cost paths, and predecessor sets on those paths. Unreachable
/// nodes carry infinite distance and zero paths.
#[derive(Debug, Clone)]
pub struct ShortestPaths<F> {
    pub source: usize,
    pub dist: Vec<F>,
    /// Number of minimum-cost paths from the source (fractional ties are
    /// impossible; f64 holds counts exactly up to 2^53).
    pub sigma: Vec<f64>,
    pub preds: Vec<Vec<u32>>,
    /// Nodes in the order they were settled (non-decreasing distance).
    settled: Vec<u32>,
}

struct HeapEntry<F> {
    dist: F,
    node: u32,
}

impl<F: Real> PartialEq for HeapEntry<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl<F: Real> Eq for HeapEntry<F> {}
impl<F: Real> Ord for HeapEntry<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, node); finite positive costs make partial_cmp total
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}
impl<F: Real> PartialOrd for HeapEntry<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn edge_costs<F: Real>(
    g: &WeightedCountryGraph<F>,
    alpha: Alpha,
) -> Result<Vec<Vec<(u32, F)>>, Error> {
    let a = F::from_f64_lossy(alpha.value());
    let mut adj = g.adjacency();
    for (v, list) in adj.iter_mut().enumerate() {
        for (n, w) in list.iter_mut() {
            if !(*w > F::zero()) {
                return Err(Error::NonPositiveWeight(
                    format!("{}-{}", g.nodes()[v], g.nodes()[*n as usize]),
                    format!("{w}"),
                ));
            }
            *w = F::one() / w.powf(a);
        }
    }
    Ok(adj)
}

fn ties<F: Real>(a: F, b: F) -> bool {
    let tol = F::from_f64_lossy(TIE_TOLERANCE);
    (a - b).abs() <= tol * a.max(b)
}

fn dijkstra_counted<F: Real>(n: usize, costs: &[Vec<(u32, F)>], source: usize) -> ShortestPaths<F> {
    let mut dist = vec![F::infinity(); n];
    let mut sigma = vec![0.0f64; n];
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut settled = Vec::with_capacity(n);
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();

    dist[source] = F::zero();
    sigma[source] = 1.0;
    heap.push(HeapEntry {
        dist: F::zero(),
        node: source as u32,
    });

    while let Some(HeapEntry { node: u, .. }) = heap.pop() {
        let u = u as usize;
        if done[u] {
            continue;
        }
        done[u] = true;
        settled.push(u as u32);
        for &(v, cost) in &costs[u] {
            let v = v as usize;
            if done[v] {
                continue;
            }
            let candidate = dist[u] + cost;
            if dist[v].is_finite() && ties(candidate, dist[v]) {
                sigma[v] += sigma[u];
                preds[v].push(u as u32);
            } else if candidate < dist[v] {
                dist[v] = candidate;
                sigma[v] = sigma[u];
                preds[v].clear();
                preds[v].push(u as u32);
                heap.push(HeapEntry {
                    dist: candidate,
                    node: v as u32,
                });
            }
        }
    }

    ShortestPaths {
        source,
        dist,
        sigma,
        preds,
        settled,
    }
}

/// Generalized shortest paths from one source: distance, minimum-cost path
/// counts, and predecessor sets per node.
pub fn alpha_distances<F: Real>(
    g: &WeightedCountryGraph<F>,
    source: &CountryCode,
    alpha: Alpha,
) -> Result<ShortestPaths<F>, Error> {
    let s = g
        .node_index(source)
        .ok_or_else(|| Error::UnknownCountry(source.to_string()))?;
    let costs = edge_costs(g, alpha)?;
    Ok(dijkstra_counted(g.node_count(), &costs, s))
}

pub fn connected_components<F: Real>(g: &WeightedCountryGraph<F>) -> (usize, Vec<usize>) {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let adj = g.adjacency();
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = count;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if label[v as usize] == usize::MAX {
                    label[v as usize] = count;
                    stack.push(v as usize);
                }
            }
        }
        count += 1;
    }
    (count, label)
}

/// Closeness: inverse sum of generalized distances to every other node.
/// Errors on disconnected graphs; see [`closeness_by_component`] for the
/// per-component variant.
pub fn closeness<F: Real>(g: &WeightedCountryGraph<F>, alpha: Alpha) -> Result<Vec<F>, Error> {
    if g.node_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    let (components, _) = connected_components(g);
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    Ok(closeness_unchecked(g, alpha)?.0)
}

/// Closeness computed within each connected component, annotated with the
/// component size per node. A node with no reachable peer scores zero.
pub fn closeness_by_component<F: Real>(
    g: &WeightedCountryGraph<F>,
    alpha: Alpha,
) -> Result<(Vec<F>, Vec<usize>), Error> {
    if g.node_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    closeness_unchecked(g, alpha)
}

fn closeness_unchecked<F: Real>(
    g: &WeightedCountryGraph<F>,
    alpha: Alpha,
) -> Result<(Vec<F>, Vec<usize>), Error> {
    let n = g.node_count();
    let costs = edge_costs(g, alpha)?;
    let (_, labels) = connected_components(g);
    let mut component_size = vec![0usize; n];
    for &l in &labels {
        component_size[l] += 1;
    }
    let sizes: Vec<usize> = labels.iter().map(|&l| component_size[l]).collect();

    let mut scores = Vec::with_capacity(n);
    for v in 0..n {
        let sp = dijkstra_counted(n, &costs, v);
        let mut total = F::zero();
        let mut reachable = 0usize;
        for (u, d) in sp.dist.iter().enumerate() {
            if u != v && d.is_finite() {
                total += *d;
                reachable += 1;
            }
        }
        scores.push(if reachable == 0 {
            F::zero()
        } else {
            F::one() / total
        });
    }
    Ok((scores, sizes))
}

/// Betweenness: for every unordered pair the fraction of minimum-cost
/// paths through each intermediary, summed without normalization
/// (Brandes accumulation). Disconnected graphs are fine; unreachable
/// pairs contribute nothing.
pub fn betweenness<F: Real>(g: &WeightedCountryGraph<F>, alpha: Alpha) -> Result<Vec<F>, Error> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let costs = edge_costs(g, alpha)?;
    let mut score = vec![F::zero(); n];
    for s in 0..n {
        let sp = dijkstra_counted(n, &costs, s);
        let mut delta = vec![F::zero(); n];
        for &w in sp.settled.iter().rev() {
            let w = w as usize;
            for &v in &sp.preds[w] {
                let v = v as usize;
                let ratio = F::from_f64_lossy(sp.sigma[v] / sp.sigma[w]);
                let contribution = ratio * (F::one() + delta[w]);
                delta[v] += contribution;
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    // each unordered pair was accumulated from both endpoints
    let half = F::from_f64_lossy(0.5);
    Ok(score.into_iter().map(|x| x * half).collect())
}

/// Dominant eigenvector of the weight matrix, normalized to unit maximum
/// entry. Power iteration with a +I shift so bipartite-like spectra
/// (lambda paired with -lambda) still converge.
pub fn eigenvector_centrality<F: Real>(
    g: &WeightedCountryGraph<F>,
    tol: F,
    max_iter: usize,
) -> Result<Vec<F>, Error> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let (components, _) = connected_components(g);
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let adj = g.adjacency();
    let mut x = vec![F::one(); n];
    let mut residual = F::infinity();
    for _ in 0..max_iter {
        let mut next = vec![F::zero(); n];
        for v in 0..n {
            let mut acc = x[v]; // the +I shift
            for &(u, w) in &adj[v] {
                acc += w * x[u as usize];
            }
            next[v] = acc;
        }
        let max = next.iter().cloned().fold(F::zero(), F::max);
        if !(max > F::zero()) {
            return Err(Error::NoConvergence {
                iters: max_iter,
                residual: f64::NAN,
            });
        }
        for value in next.iter_mut() {
            *value = *value / max;
        }
        residual = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (*a - *b).abs())
            .fold(F::zero(), F::max);
        x = next;
        if residual < tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        iters: max_iter,
        residual: residual.to_f64_lossy(),
    })
}

/// Closeness and betweenness bundled with the parameters that produced
/// them and a fingerprint of the analyzed edge list.
#[derive(Debug, Clone)]
pub struct CentralityScores<F> {
    pub nodes: Vec<CountryCode>,
    pub closeness: Vec<F>,
    pub betweenness: Vec<F>,
    pub alpha: f64,
    pub graph_fingerprint: u64,
    /// Component size per node when computed component-restricted.
    pub component_sizes: Option<Vec<usize>>,
}

/// Stable hash of the edge list (countries and rendered weights).
pub fn graph_fingerprint<F: Real>(g: &WeightedCountryGraph<F>) -> u64 {
    fnv1a64(g.to_tsv().as_bytes())
}

pub fn centrality_scores<F: Real>(
    g: &WeightedCountryGraph<F>,
    alpha: Alpha,
    component_restrict: bool,
) -> Result<CentralityScores<F>, Error> {
    let (closeness_scores, sizes) = if component_restrict {
        let (s, c) = closeness_by_component(g, alpha)?;
        (s, Some(c))
    } else {
        (closeness(g, alpha)?, None)
    };
    Ok(CentralityScores {
        nodes: g.nodes().to_vec(),
        closeness: closeness_scores,
        betweenness: betweenness(g, alpha)?,
        alpha: alpha.value(),
        graph_fingerprint: graph_fingerprint(g),
        component_sizes: sizes,
    })
}

impl<F: Real> CentralityScores<F> {
    /// TSV: country, closeness, betweenness, alpha (component_size
    /// appended when component-restricted).
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        match &self.component_sizes {
            Some(sizes) => {
                out.push_str("country\tcloseness\tbetweenness\talpha\tcomponent_size\n");
                for (i, node) in self.nodes.iter().enumerate() {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        node, self.closeness[i], self.betweenness[i], self.alpha, sizes[i]
                    ));
                }
            }
            None => {
                out.push_str("country\tcloseness\tbetweenness\talpha\n");
                for (i, node) in self.nodes.iter().enumerate() {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        node, self.closeness[i], self.betweenness[i], self.alpha
                    ));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn code(c: &str) -> CountryCode {
        CountryCode::new(c).unwrap()
    }

    fn graph(nodes: &[&str], edges: &[(&str, &str, f64)]) -> WeightedCountryGraph<f64> {
        let nodes: Vec<CountryCode> = nodes.iter().map(|c| code(c)).collect();
        let edges: Vec<(CountryCode, CountryCode, f64)> = edges
            .iter()
            .map(|&(a, b, w)| (code(a), code(b), w))
            .collect();
        WeightedCountryGraph::from_edges(&nodes, &edges).unwrap()
    }

    #[test]
    fn single_edge_distance_is_inverse_sqrt_weight_at_half() {
        let g = graph(&["AAA", "BBB"], &[("AAA", "BBB", 4.0)]);
        let sp = alpha_distances(&g, &code("AAA"), Alpha::new(0.5).unwrap()).unwrap();
        let b = g.node_index(&code("BBB")).unwrap();
        assert_abs_diff_eq!(sp.dist[b], 0.5, epsilon = 1e-15);
        assert_eq!(sp.sigma[b], 1.0);
    }

    #[test]
    fn alpha_zero_reduces_to_hop_count() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 9.0),
                ("BBB", "CCC", 0.1),
                ("CCC", "DDD", 42.0),
                ("AAA", "CCC", 7.0),
            ],
        );
        let sp = alpha_distances(&g, &code("AAA"), Alpha::new(0.0).unwrap()).unwrap();
        let idx = |c: &str| g.node_index(&code(c)).unwrap();
        assert_eq!(sp.dist[idx("BBB")], 1.0);
        assert_eq!(sp.dist[idx("CCC")], 1.0);
        assert_eq!(sp.dist[idx("DDD")], 2.0);
    }

    #[test]
    fn equal_cost_routes_are_both_counted() {
        // direct edge w=1 vs two hops of w=4 at alpha=0.5: both cost 1.0
        let g = graph(
            &["AAA", "BBB", "MMM"],
            &[
                ("AAA", "BBB", 1.0),
                ("AAA", "MMM", 4.0),
                ("MMM", "BBB", 4.0),
            ],
        );
        let sp = alpha_distances(&g, &code("AAA"), Alpha::default()).unwrap();
        let b = g.node_index(&code("BBB")).unwrap();
        assert_abs_diff_eq!(sp.dist[b], 1.0, epsilon = 1e-12);
        assert_eq!(sp.sigma[b], 2.0);
        assert_eq!(sp.preds[b].len(), 2);
    }

    #[test]
    fn unreachable_nodes_have_infinite_distance() {
        let g = graph(&["AAA", "BBB", "CCC"], &[("AAA", "BBB", 1.0)]);
        let sp = alpha_distances(&g, &code("AAA"), Alpha::default()).unwrap();
        let c = g.node_index(&code("CCC")).unwrap();
        assert!(sp.dist[c].is_infinite());
        assert_eq!(sp.sigma[c], 0.0);
    }

    #[test]
    fn closeness_on_unit_path() {
        let g = graph(
            &["AAA", "BBB", "CCC"],
            &[("AAA", "BBB", 1.0), ("BBB", "CCC", 1.0)],
        );
        for alpha in [0.0, 0.5, 1.0] {
            let c = closeness(&g, Alpha::new(alpha).unwrap()).unwrap();
            let idx = |s: &str| g.node_index(&code(s)).unwrap();
            assert_relative_eq!(c[idx("BBB")], 0.5, epsilon = 1e-12);
            assert_relative_eq!(c[idx("AAA")], 1.0 / 3.0, epsilon = 1e-12);
            assert_relative_eq!(c[idx("CCC")], 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn closeness_on_unit_triangle_is_half_everywhere() {
        let g = graph(
            &["AAA", "BBB", "CCC"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("AAA", "CCC", 1.0),
            ],
        );
        let c = closeness(&g, Alpha::default()).unwrap();
        for v in c {
            assert_relative_eq!(v, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn closeness_on_weighted_path_at_alpha_half() {
        let g = graph(
            &["AAA", "BBB", "CCC"],
            &[("AAA", "BBB", 4.0), ("BBB", "CCC", 1.0)],
        );
        let c = closeness(&g, Alpha::default()).unwrap();
        let idx = |s: &str| g.node_index(&code(s)).unwrap();
        assert_relative_eq!(c[idx("AAA")], 0.5, epsilon = 1e-12);
        assert_relative_eq!(c[idx("BBB")], 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(c[idx("CCC")], 0.4, epsilon = 1e-12);
    }

    #[test]
    fn closeness_errors_on_disconnected_unless_restricted() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[("AAA", "BBB", 1.0), ("CCC", "DDD", 2.0)],
        );
        assert!(matches!(
            closeness(&g, Alpha::default()),
            Err(Error::Disconnected { components: 2 })
        ));
        let (scores, sizes) = closeness_by_component(&g, Alpha::default()).unwrap();
        assert_eq!(sizes, vec![2, 2, 2, 2]);
        let idx = |s: &str| g.node_index(&code(s)).unwrap();
        assert_relative_eq!(scores[idx("AAA")], 1.0, epsilon = 1e-12);
        // w=2 at alpha 0.5 -> distance 1/sqrt(2)
        assert_relative_eq!(scores[idx("CCC")], 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn isolated_node_scores_zero_closeness() {
        let g = graph(&["AAA", "BBB", "CCC"], &[("AAA", "BBB", 1.0)]);
        let (scores, sizes) = closeness_by_component(&g, Alpha::default()).unwrap();
        let c = g.node_index(&code("CCC")).unwrap();
        assert_eq!(scores[c], 0.0);
        assert_eq!(sizes[c], 1);
    }

    #[test]
    fn betweenness_on_path_is_one_at_the_middle() {
        let g = graph(
            &["AAA", "BBB", "CCC"],
            &[("AAA", "BBB", 1.0), ("BBB", "CCC", 1.0)],
        );
        let b = betweenness(&g, Alpha::default()).unwrap();
        let idx = |s: &str| g.node_index(&code(s)).unwrap();
        assert_relative_eq!(b[idx("BBB")], 1.0, epsilon = 1e-12);
        assert_eq!(b[idx("AAA")], 0.0);
        assert_eq!(b[idx("CCC")], 0.0);
    }

    #[test]
    fn betweenness_on_four_cycle_is_half_everywhere() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("CCC", "DDD", 1.0),
                ("DDD", "AAA", 1.0),
            ],
        );
        let b = betweenness(&g, Alpha::default()).unwrap();
        for v in b {
            assert_relative_eq!(v, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn betweenness_on_triangle_is_zero() {
        let g = graph(
            &["AAA", "BBB", "CCC"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("AAA", "CCC", 1.0),
            ],
        );
        let b = betweenness(&g, Alpha::default()).unwrap();
        assert_eq!(b, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn betweenness_works_on_disconnected_graphs() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD", "EEE"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("DDD", "EEE", 1.0),
            ],
        );
        let b = betweenness(&g, Alpha::default()).unwrap();
        let idx = |s: &str| g.node_index(&code(s)).unwrap();
        assert_relative_eq!(b[idx("BBB")], 1.0, epsilon = 1e-12);
        assert_eq!(b[idx("DDD")], 0.0);
    }

    #[test]
    fn non_positive_weight_is_rejected() {
        // from_edges already rejects these; go through map_weights to hit
        // the centrality-level check
        let g = graph(&["AAA", "BBB"], &[("AAA", "BBB", 1.0)]).map_weights(|w| w - 1.0);
        assert!(matches!(
            alpha_distances(&g, &code("AAA"), Alpha::default()),
            Err(Error::NonPositiveWeight(..))
        ));
        assert!(matches!(
            betweenness(&g, Alpha::default()),
            Err(Error::NonPositiveWeight(..))
        ));
    }

    #[test]
    fn eigenvector_on_star_peaks_at_the_hub() {
        let g = graph(
            &["HHH", "AAA", "BBB", "CCC", "DDD"],
            &[
                ("HHH", "AAA", 1.0),
                ("HHH", "BBB", 1.0),
                ("HHH", "CCC", 1.0),
                ("HHH", "DDD", 1.0),
            ],
        );
        let x = eigenvector_centrality(&g, 1e-12, 10_000).unwrap();
        let idx = |s: &str| g.node_index(&code(s)).unwrap();
        assert_relative_eq!(x[idx("HHH")], 1.0, epsilon = 1e-9);
        let leaf = x[idx("AAA")];
        assert!(leaf < 1.0);
        for s in ["BBB", "CCC", "DDD"] {
            assert_relative_eq!(x[idx(s)], leaf, epsilon = 1e-9);
        }
        assert_relative_eq!(leaf, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn eigenvector_on_regular_graph_is_uniform() {
        // 4-cycle: 2-regular
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("CCC", "DDD", 1.0),
                ("DDD", "AAA", 1.0),
            ],
        );
        let x = eigenvector_centrality(&g, 1e-12, 10_000).unwrap();
        for v in x {
            assert_relative_eq!(v, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn eigenvector_on_two_nodes_is_unit_everywhere() {
        let g = graph(&["AAA", "BBB"], &[("AAA", "BBB", 7.0)]);
        let x = eigenvector_centrality(&g, 1e-12, 10_000).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn eigenvector_reports_non_convergence() {
        let g = graph(
            &["HHH", "AAA", "BBB"],
            &[("HHH", "AAA", 1.0), ("HHH", "BBB", 3.0)],
        );
        let err = eigenvector_centrality(&g, 1e-15, 2).unwrap_err();
        match err {
            Error::NoConvergence { iters, residual } => {
                assert_eq!(iters, 2);
                assert!(residual.is_finite());
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn distances_are_symmetric() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 2.0),
                ("BBB", "CCC", 3.0),
                ("CCC", "DDD", 0.5),
                ("AAA", "DDD", 1.5),
            ],
        );
        let alpha = Alpha::default();
        let n = g.node_count();
        let all: Vec<ShortestPaths<f64>> = g
            .nodes()
            .iter()
            .map(|c| alpha_distances(&g, c, alpha).unwrap())
            .collect();
        for i in 0..n {
            for j in 0..n {
                assert_relative_eq!(all[i].dist[j], all[j].dist[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn uniform_weight_scaling_rescales_distances_and_keeps_betweenness() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 2.0),
                ("BBB", "CCC", 3.0),
                ("CCC", "DDD", 0.5),
                ("AAA", "DDD", 1.5),
                ("AAA", "CCC", 4.0),
            ],
        );
        let c = 5.0;
        let scaled = g.map_weights(|w| w * c);
        let alpha = Alpha::new(0.5).unwrap();
        let factor = c.powf(-0.5);
        for node in g.nodes() {
            let d1 = alpha_distances(&g, node, alpha).unwrap();
            let d2 = alpha_distances(&scaled, node, alpha).unwrap();
            for (a, b) in d1.dist.iter().zip(&d2.dist) {
                if a.is_finite() {
                    assert_relative_eq!(*b, a * factor, epsilon = 1e-10);
                }
            }
            assert_eq!(d1.sigma, d2.sigma);
        }
        let b1 = betweenness(&g, alpha).unwrap();
        let b2 = betweenness(&scaled, alpha).unwrap();
        for (a, b) in b1.iter().zip(&b2) {
            assert_relative_eq!(*a, *b, epsilon = 1e-12);
        }
        // closeness rescales by c^alpha
        let c1 = closeness(&g, alpha).unwrap();
        let c2 = closeness(&scaled, alpha).unwrap();
        for (a, b) in c1.iter().zip(&c2) {
            assert_relative_eq!(*b, a * c.powf(0.5), epsilon = 1e-10);
        }
    }

    #[test]
    fn degree_one_nodes_have_zero_betweenness() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD", "EEE"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 2.0),
                ("CCC", "DDD", 3.0),
                ("CCC", "EEE", 1.0),
            ],
        );
        let b = betweenness(&g, Alpha::default()).unwrap();
        for (v, node) in g.nodes().iter().enumerate() {
            if g.degree(v) == 1 {
                assert_eq!(b[v], 0.0, "degree-1 node {node} must have betweenness 0");
            }
        }
    }

    #[test]
    fn alpha_must_be_non_negative() {
        assert!(Alpha::new(-0.1).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert_eq!(Alpha::default().value(), 0.5);
    }

    #[test]
    fn scores_work_in_f32_too() {
        let nodes: Vec<CountryCode> = ["AAA", "BBB", "CCC"].iter().map(|c| code(c)).collect();
        let edges = [
            (code("AAA"), code("BBB"), 1.0f32),
            (code("BBB"), code("CCC"), 1.0f32),
        ];
        let g32 = WeightedCountryGraph::from_edges(&nodes, &edges).unwrap();
        let c = closeness(&g32, Alpha::default()).unwrap();
        assert!((c[1] - 0.5).abs() < 1e-6);
    }
}
