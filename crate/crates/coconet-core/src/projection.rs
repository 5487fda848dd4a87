//! One-mode projection of the bipartite incidence onto countries.
//!
//! Two countries are tied with weight sum_k 1/(n_k - 1) over their
//! co-listed items k, so an item listed everywhere contributes little and
//! an item shared by exactly two countries contributes 1. Weights are
//! accumulated generically; the default instantiation uses exact rationals
//! and converts to floats only at the analytics boundary.

use crate::country::CountryCode;
use crate::error::Error;
use crate::ingest::BipartiteGraph;
use crate::scalar::{Real, WeightScalar};
use std::collections::BTreeMap;

/// Undirected weighted country graph. No self-loops, weights strictly
/// positive, edges stored once with node indices i < j in lexical country
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCountryGraph<W> {
    nodes: Vec<CountryCode>,
    edges: Vec<(u32, u32, W)>,
}

impl<W: WeightScalar> WeightedCountryGraph<W> {
    /// Build a graph from explicit edges. Nodes are sorted; edges are
    /// normalized to i < j, deduplicated by summing, and checked positive.
    pub fn from_edges(
        nodes: &[CountryCode],
        edges: &[(CountryCode, CountryCode, W)],
    ) -> Result<Self, Error> {
        let mut sorted: Vec<CountryCode> = nodes.to_vec();
        sorted.sort();
        sorted.dedup();
        let index: BTreeMap<CountryCode, u32> = sorted
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i as u32))
            .collect();
        let mut acc: BTreeMap<(u32, u32), W> = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::SelfPair(a.to_string()));
            }
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::UnknownCountry(a.to_string()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::UnknownCountry(b.to_string()))?;
            if !(*w > W::zero()) {
                return Err(Error::NonPositiveWeight(format!("{a}-{b}"), format!("{w}")));
            }
            let key = (ia.min(ib), ia.max(ib));
            let slot = acc.entry(key).or_insert_with(W::zero);
            *slot += *w;
        }
        Ok(WeightedCountryGraph {
            nodes: sorted,
            edges: acc.into_iter().map(|((i, j), w)| (i, j, w)).collect(),
        })
    }

    pub fn nodes(&self) -> &[CountryCode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Edges as (i, j, weight) with i < j, sorted.
    pub fn edges(&self) -> &[(u32, u32, W)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_index(&self, code: &CountryCode) -> Option<usize> {
        self.nodes.binary_search(code).ok()
    }

    /// Adjacency lists (neighbor index, weight), neighbors in index order.
    pub fn adjacency(&self) -> Vec<Vec<(u32, W)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(i, j, w) in &self.edges {
            adj[i as usize].push((j, w));
            adj[j as usize].push((i, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(n, _)| n);
        }
        adj
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j, _)| i as usize == node || j as usize == node)
            .count()
    }

    /// Strength: sum of incident edge weights.
    pub fn strength(&self, node: usize) -> W {
        let mut s = W::zero();
        for &(i, j, w) in &self.edges {
            if i as usize == node || j as usize == node {
                s += w;
            }
        }
        s
    }

    /// Convert weights to a floating-point scalar for the analytics layer.
    pub fn to_real<F: Real>(&self) -> WeightedCountryGraph<F> {
        WeightedCountryGraph {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j, w)| (i, j, F::from_f64_lossy(w.to_f64().expect("finite weight"))))
                .collect(),
        }
    }

    /// Apply a function to every weight, keeping the structure.
    pub fn map_weights<V: WeightScalar>(&self, f: impl Fn(W) -> V) -> WeightedCountryGraph<V> {
        WeightedCountryGraph {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(i, j, w)| (i, j, f(w))).collect(),
        }
    }

    /// Weighted edge list: lines `i<TAB>j<TAB>weight`, countries in lexical
    /// order within a line, lines sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\tj\tweight\n");
        for &(i, j, w) in &self.edges {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                self.nodes[i as usize], self.nodes[j as usize], w
            ));
        }
        out
    }

    /// JSON export mirroring the TSV content.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|&(i, j, w)| {
                serde_json::json!({
                    "i": self.nodes[i as usize].as_str(),
                    "j": self.nodes[j as usize].as_str(),
                    "weight": format!("{w}"),
                })
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("edge list serializes")
    }
}

/// Weight of the tie between countries i and j: sum over co-listed items k
/// of 1/(n_k - 1). Items listed by a single country are never co-listed
/// and contribute nothing. Returns zero when the pair shares no item.
pub fn edge_weight<W: WeightScalar>(
    b: &BipartiteGraph,
    i: &CountryCode,
    j: &CountryCode,
) -> Result<W, Error> {
    if i == j {
        return Err(Error::SelfPair(i.to_string()));
    }
    let ci = b
        .country_index(i)
        .ok_or_else(|| Error::UnknownCountry(i.to_string()))? as u32;
    let cj = b
        .country_index(j)
        .ok_or_else(|| Error::UnknownCountry(j.to_string()))? as u32;

    let (items_i, items_j) = (b.country_items(ci as usize), b.country_items(cj as usize));
    let mut w = W::zero();
    let (mut a, mut z) = (0, 0);
    while a < items_i.len() && z < items_j.len() {
        match items_i[a].cmp(&items_j[z]) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => z += 1,
            std::cmp::Ordering::Equal => {
                let nk = b.out_degree(items_i[a] as usize);
                debug_assert!(nk >= 2, "co-listed item must have out-degree >= 2");
                w += W::inverse_count(nk - 1);
                a += 1;
                z += 1;
            }
        }
    }
    Ok(w)
}

/// Project the bipartite graph onto countries. The node set equals the
/// bipartite country set (isolates are retained); an edge exists iff the
/// pair co-lists at least one item.
pub fn project<W: WeightScalar>(b: &BipartiteGraph) -> Result<WeightedCountryGraph<W>, Error> {
    if b.countries().is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut acc: BTreeMap<(u32, u32), W> = BTreeMap::new();
    for item in 0..b.items().len() {
        let listed = b.item_countries(item);
        let nk = listed.len();
        if nk < 2 {
            continue;
        }
        let contribution = W::inverse_count(nk - 1);
        for a in 0..listed.len() {
            for z in a + 1..listed.len() {
                let slot = acc.entry((listed[a], listed[z])).or_insert_with(W::zero);
                *slot += contribution;
            }
        }
    }
    Ok(WeightedCountryGraph {
        nodes: b.countries().to_vec(),
        edges: acc.into_iter().map(|((i, j), w)| (i, j, w)).collect(),
    })
}
