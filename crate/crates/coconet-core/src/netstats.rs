//! Descriptive network statistics: degrees, components, hop-based average
//! path length, and weighted modularity under greedy agglomerative
//! community detection.

use crate::error::Error;
use crate::projection::WeightedCountryGraph;
use crate::scalar::Real;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

/// Whether average path length spans all reachable pairs or only the
/// largest component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AplScope {
    #[default]
    AllComponents,
    GiantComponent,
}

/// One row of summary statistics. `modularity` and
/// `average_path_length` are undefined (None) on edgeless graphs;
/// APL is also undefined on single-node graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSummary<F> {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: F,
    pub mean_weighted_degree: F,
    pub modularity: Option<F>,
    pub connected_components: usize,
    pub average_path_length: Option<F>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected-component count and per-node labels via union-find.
pub fn components_union_find<F: Real>(g: &WeightedCountryGraph<F>) -> (usize, Vec<usize>) {
    let n = g.node_count();
    let mut uf = UnionFind::new(n);
    for &(i, j, _) in g.edges() {
        uf.union(i as usize, j as usize);
    }
    let mut labels = vec![0usize; n];
    let mut next = 0usize;
    let mut seen: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        let root = uf.find(v);
        let label = *seen[root].get_or_insert_with(|| {
            let l = next;
            next += 1;
            l
        });
        labels[v] = label;
    }
    (next, labels)
}

/// Weighted modularity of a node partition:
/// Q = sum_c [W_c/m - (S_c/2m)^2] with W_c the intra-community weight,
/// S_c the community strength, m the total edge weight. None when m = 0.
pub fn modularity<F: Real>(g: &WeightedCountryGraph<F>, partition: &[usize]) -> Option<F> {
    assert_eq!(partition.len(), g.node_count());
    let blocks = partition.iter().max().map_or(0, |&m| m + 1);
    let mut m_total = F::zero();
    let mut intra = vec![F::zero(); blocks];
    let mut strength = vec![F::zero(); blocks];
    for &(i, j, w) in g.edges() {
        m_total += w;
        let (ci, cj) = (partition[i as usize], partition[j as usize]);
        if ci == cj {
            intra[ci] += w;
        }
        strength[ci] += w;
        strength[cj] += w;
    }
    if !(m_total > F::zero()) {
        return None;
    }
    let two_m = m_total + m_total;
    let mut q = F::zero();
    for c in 0..blocks {
        let frac = strength[c] / two_m;
        q += intra[c] / m_total - frac * frac;
    }
    Some(q)
}

/// Greedy agglomerative modularity maximization: repeatedly merge the
/// connected community pair with the best modularity gain until no merge
/// improves it. Ties are broken by a seed-derived priority, so the result
/// is deterministic for a fixed seed and node order.
pub fn detect_communities<F: Real>(g: &WeightedCountryGraph<F>, seed: u64) -> Vec<usize> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut m_total = F::zero();
    for &(_, _, w) in g.edges() {
        m_total += w;
    }
    if !(m_total > F::zero()) {
        return (0..n).collect();
    }

    // between[a][b]: total weight between communities a and b (a != b)
    let mut between = vec![vec![F::zero(); n]; n];
    let mut strength = vec![F::zero(); n];
    for &(i, j, w) in g.edges() {
        let (i, j) = (i as usize, j as usize);
        between[i][j] += w;
        between[j][i] += w;
        strength[i] += w;
        strength[j] += w;
    }
    let mut alive = vec![true; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();

    let mut priority: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    priority.shuffle(&mut rng);

    let two_m2 = {
        let two_m = m_total + m_total;
        two_m * m_total // 2m^2
    };

    loop {
        let mut best: Option<(F, usize, usize)> = None;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            for b in a + 1..n {
                if !alive[b] || !(between[a][b] > F::zero()) {
                    continue;
                }
                let gain = between[a][b] / m_total - strength[a] * strength[b] / two_m2;
                let better = match &best {
                    None => true,
                    Some((bg, ba, bb)) => {
                        gain > *bg
                            || (gain == *bg
                                && (priority[a], priority[b]) < (priority[*ba], priority[*bb]))
                    }
                };
                if better {
                    best = Some((gain, a, b));
                }
            }
        }
        match best {
            Some((gain, a, b)) if gain > F::zero() => {
                // merge b into a
                alive[b] = false;
                let moved = std::mem::take(&mut members[b]);
                members[a].extend(moved);
                strength[a] = strength[a] + strength[b];
                for c in 0..n {
                    if c != a && c != b && alive[c] {
                        let add = between[b][c];
                        between[a][c] += add;
                        between[c][a] += add;
                    }
                }
                for c in 0..n {
                    between[b][c] = F::zero();
                    between[c][b] = F::zero();
                }
            }
            _ => break,
        }
    }

    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        if alive[a] {
            for &v in &members[a] {
                labels[v] = next;
            }
            next += 1;
        }
    }
    debug_assert!(labels.iter().all(|&l| l != usize::MAX));
    labels
}

fn hop_distances<F: Real>(adj: &[Vec<(u32, F)>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &(v, _) in &adj[u] {
            let v = v as usize;
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Mean hop distance over reachable unordered pairs (weights are ignored;
/// listing-scale path lengths are conventionally reported hop-based).
pub fn average_path_length<F: Real>(g: &WeightedCountryGraph<F>, scope: AplScope) -> Option<F> {
    let n = g.node_count();
    let adj = g.adjacency();
    let in_scope: Vec<bool> = match scope {
        AplScope::AllComponents => vec![true; n],
        AplScope::GiantComponent => {
            let (count, labels) = components_union_find(g);
            let mut sizes = vec![0usize; count];
            for &l in &labels {
                sizes[l] += 1;
            }
            let giant = sizes
                .iter()
                .enumerate()
                .max_by_key(|&(l, &s)| (s, std::cmp::Reverse(l)))
                .map(|(l, _)| l)?;
            labels.iter().map(|&l| l == giant).collect()
        }
    };
    let mut total = 0usize;
    let mut pairs = 0usize;
    for v in 0..n {
        if !in_scope[v] {
            continue;
        }
        for (u, d) in hop_distances(&adj, v).into_iter().enumerate() {
            if u > v && in_scope[u] {
                if let Some(d) = d {
                    total += d;
                    pairs += 1;
                }
            }
        }
    }
    if pairs == 0 {
        None
    } else {
        Some(F::from_f64_lossy(total as f64 / pairs as f64))
    }
}

/// Full summary row. `seed` drives the community-detection tie-break.
pub fn summarize<F: Real>(
    g: &WeightedCountryGraph<F>,
    apl_scope: AplScope,
    seed: u64,
) -> Result<NetworkSummary<F>, Error> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let e = g.edge_count();
    let mut weight_sum = F::zero();
    for &(_, _, w) in g.edges() {
        weight_sum += w;
    }
    let nf = F::from_f64_lossy(n as f64);
    let (components, _) = components_union_find(g);
    let partition = detect_communities(g, seed);
    Ok(NetworkSummary {
        nodes: n,
        edges: e,
        mean_degree: F::from_f64_lossy(2.0 * e as f64) / nf,
        mean_weighted_degree: (weight_sum + weight_sum) / nf,
        modularity: modularity(g, &partition),
        connected_components: components,
        average_path_length: average_path_length(g, apl_scope),
    })
}

/// TSV rows mirroring the per-category descriptive table: category,
/// nodes, edges, degree, weighted_degree, modularity, cc, apl.
pub fn netstats_tsv<F: Real>(rows: &[(String, NetworkSummary<F>)]) -> String {
    let mut out =
        String::from("category\tnodes\tedges\tdegree\tweighted_degree\tmodularity\tcc\tapl\n");
    for (category, s) in rows {
        let modularity = s.modularity.map_or("NA".to_owned(), |q| format!("{q}"));
        let apl = s
            .average_path_length
            .map_or("NA".to_owned(), |a| format!("{a}"));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            category,
            s.nodes,
            s.edges,
            s.mean_degree,
            s.mean_weighted_degree,
            modularity,
            s.connected_components,
            apl
        ));
    }
    out
}

pub fn netstats_json<F: Real>(rows: &[(String, NetworkSummary<F>)]) -> String {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|(category, s)| {
            serde_json::json!({
                "category": category,
                "nodes": s.nodes,
                "edges": s.edges,
                "degree": s.mean_degree.to_f64_lossy(),
                "weighted_degree": s.mean_weighted_degree.to_f64_lossy(),
                "modularity": s.modularity.map(|q| q.to_f64_lossy()),
                "cc": s.connected_components,
                "apl": s.average_path_length.map(|a| a.to_f64_lossy()),
            })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("netstats serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::connected_components as traversal_components;
    use crate::country::CountryCode;
    use approx::assert_relative_eq;

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

    fn two_triangles() -> WeightedCountryGraph<f64> {
        graph(
            &["AAA", "BBB", "CCC", "XXX", "YYY", "ZZZ"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("AAA", "CCC", 1.0),
                ("XXX", "YYY", 1.0),
                ("YYY", "ZZZ", 1.0),
                ("XXX", "ZZZ", 1.0),
            ],
        )
    }

    #[test]
    fn disjoint_triangles_summary() {
        let g = two_triangles();
        let s = summarize(&g, AplScope::AllComponents, 0).unwrap();
        assert_eq!(s.nodes, 6);
        assert_eq!(s.edges, 6);
        assert_eq!(s.connected_components, 2);
        assert_relative_eq!(s.mean_degree, 2.0, epsilon = 1e-15);
        assert_relative_eq!(s.mean_weighted_degree, 2.0, epsilon = 1e-15);
        assert_eq!(s.average_path_length, Some(1.0));
        // the two-block partition has Q = 2 (1/2 - 1/4)/... = 0.5 exactly
        assert_eq!(s.modularity, Some(0.5));
    }

    #[test]
    fn path_summary_matches_hand_counts() {
        let g = graph(
            &["AAA", "BBB", "CCC"],
            &[("AAA", "BBB", 1.0), ("BBB", "CCC", 1.0)],
        );
        let s = summarize(&g, AplScope::AllComponents, 0).unwrap();
        assert_relative_eq!(s.mean_degree, 4.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(s.average_path_length.unwrap(), 4.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn edgeless_graph_has_no_apl_or_modularity() {
        let nodes: Vec<CountryCode> = ["AAA", "BBB", "CCC", "DDD", "EEE"]
            .iter()
            .map(|c| code(c))
            .collect();
        let g = WeightedCountryGraph::<f64>::from_edges(&nodes, &[]).unwrap();
        let s = summarize(&g, AplScope::AllComponents, 0).unwrap();
        assert_eq!(s.connected_components, 5);
        assert_eq!(s.average_path_length, None);
        assert_eq!(s.modularity, None);
        let tsv = netstats_tsv(&[("Combined".to_owned(), s)]);
        assert!(tsv.contains("Combined\t5\t0\t0\t0\tNA\t5\tNA\n"));
    }

    #[test]
    fn single_node_graph_has_null_apl() {
        let g = WeightedCountryGraph::<f64>::from_edges(&[code("AAA")], &[]).unwrap();
        let s = summarize(&g, AplScope::AllComponents, 0).unwrap();
        assert_eq!(s.average_path_length, None);
        assert_eq!(s.connected_components, 1);
    }

    #[test]
    fn all_in_one_partition_has_zero_modularity() {
        // power-of-two weights keep every sum exact, so Q is exactly 0
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 2.0),
                ("BBB", "CCC", 0.5),
                ("CCC", "DDD", 4.0),
                ("AAA", "DDD", 0.25),
            ],
        );
        let q = modularity(&g, &[0, 0, 0, 0]).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn communities_in_disjoint_cliques_are_the_cliques() {
        let g = two_triangles();
        let labels = detect_communities(&g, 0);
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[1], labels[2]);
        assert_eq!(labels[3], labels[4]);
        assert_eq!(labels[4], labels[5]);
        assert_ne!(labels[0], labels[3]);
    }

    #[test]
    fn single_clique_collapses_to_one_block() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD"],
            &[
                ("AAA", "BBB", 1.0),
                ("AAA", "CCC", 1.0),
                ("AAA", "DDD", 1.0),
                ("BBB", "CCC", 1.0),
                ("BBB", "DDD", 1.0),
                ("CCC", "DDD", 1.0),
            ],
        );
        let labels = detect_communities(&g, 0);
        assert!(labels.iter().all(|&l| l == labels[0]));
    }

    #[test]
    fn detection_is_deterministic_for_a_fixed_seed() {
        let g = two_triangles();
        assert_eq!(detect_communities(&g, 7), detect_communities(&g, 7));
    }

    #[test]
    fn apl_ignores_weights() {
        let g1 = graph(
            &["AAA", "BBB", "CCC"],
            &[("AAA", "BBB", 1.0), ("BBB", "CCC", 1.0)],
        );
        let g2 = g1.map_weights(|w| w * 100.0);
        assert_eq!(
            average_path_length::<f64>(&g1, AplScope::AllComponents),
            average_path_length::<f64>(&g2, AplScope::AllComponents)
        );
    }

    #[test]
    fn giant_component_scope_restricts_apl() {
        // path of 3 (apl 4/3) plus an isolated pair at distance 1
        let g = graph(
            &["AAA", "BBB", "CCC", "XXX", "YYY"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("XXX", "YYY", 1.0),
            ],
        );
        let all = average_path_length::<f64>(&g, AplScope::AllComponents).unwrap();
        let giant = average_path_length::<f64>(&g, AplScope::GiantComponent).unwrap();
        assert_relative_eq!(all, 5.0 / 4.0, epsilon = 1e-15);
        assert_relative_eq!(giant, 4.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn union_find_matches_traversal_components() {
        let g = graph(
            &["AAA", "BBB", "CCC", "DDD", "EEE", "FFF"],
            &[
                ("AAA", "BBB", 1.0),
                ("BBB", "CCC", 1.0),
                ("DDD", "EEE", 1.0),
            ],
        );
        let (uf_count, uf_labels) = components_union_find(&g);
        let (tr_count, tr_labels) = traversal_components(&g);
        assert_eq!(uf_count, tr_count);
        // same partition up to relabeling
        for a in 0..g.node_count() {
            for b in 0..g.node_count() {
                assert_eq!(uf_labels[a] == uf_labels[b], tr_labels[a] == tr_labels[b]);
            }
        }
    }
}
