//! Composite diversity score per country: breadth (how many partners),
//! spread (how evenly overlap is distributed over them), and heterogeneity
//! (how dissimilar the partners are to each other), combined in the
//! Rao-Stirling style as sum_{i<j} w(C,i) w(C,j) d(i,j).
//!
//! All quantities are read off the unfiltered bipartite incidence: a
//! country's neighbors are every country it co-lists at least one item
//! with, and d is the Jaccard dissimilarity of the partners' neighbor
//! sets (which may include C itself).

use crate::country::CountryCode;
use crate::error::Error;
use crate::ingest::BipartiteGraph;
use crate::scalar::Real;
use std::collections::BTreeMap;

/// Per-country composite openness.
#[derive(Debug, Clone)]
pub struct OpennessScore<F> {
    pub country: CountryCode,
    /// |N(C)|: number of countries sharing at least one item with C.
    pub breadth: usize,
    pub score: F,
    /// Normalized overlap fractions w(C, i); they sum to 1 when breadth >= 1.
    pub neighbor_weights: BTreeMap<CountryCode, F>,
}

fn overlap_count(b: &BipartiteGraph, x: usize, y: usize) -> usize {
    let (ix, iy) = (b.country_items(x), b.country_items(y));
    let (mut a, mut z, mut n) = (0, 0, 0);
    while a < ix.len() && z < iy.len() {
        match ix[a].cmp(&iy[z]) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => z += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                a += 1;
                z += 1;
            }
        }
    }
    n
}

fn neighbor_set(b: &BipartiteGraph, x: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for y in 0..b.countries().len() {
        if y != x && overlap_count(b, x, y) > 0 {
            out.push(y as u32);
        }
    }
    out
}

/// Item-overlap counts |V_C ∩ V_i| for every country i with positive
/// overlap. C itself is excluded.
pub fn neighbor_overlaps(
    b: &BipartiteGraph,
    c: &CountryCode,
) -> Result<BTreeMap<CountryCode, usize>, Error> {
    let x = b
        .country_index(c)
        .ok_or_else(|| Error::UnknownCountry(c.to_string()))?;
    let mut out = BTreeMap::new();
    for y in 0..b.countries().len() {
        if y == x {
            continue;
        }
        let n = overlap_count(b, x, y);
        if n > 0 {
            out.insert(b.countries()[y], n);
        }
    }
    Ok(out)
}

/// 1 - |N(i) ∩ N(j)| / |N(i) ∪ N(j)| over co-listing neighbor sets.
/// Undefined (an error) when both neighbor sets are empty.
pub fn jaccard_dissimilarity<F: Real>(
    b: &BipartiteGraph,
    i: &CountryCode,
    j: &CountryCode,
) -> Result<F, Error> {
    let xi = b
        .country_index(i)
        .ok_or_else(|| Error::UnknownCountry(i.to_string()))?;
    let xj = b
        .country_index(j)
        .ok_or_else(|| Error::UnknownCountry(j.to_string()))?;
    let (ni, nj) = (neighbor_set(b, xi), neighbor_set(b, xj));
    jaccard_of_sets(i, j, &ni, &nj)
}

fn jaccard_of_sets<F: Real>(
    i: &CountryCode,
    j: &CountryCode,
    ni: &[u32],
    nj: &[u32],
) -> Result<F, Error> {
    let (mut a, mut z) = (0, 0);
    let mut intersection = 0usize;
    while a < ni.len() && z < nj.len() {
        match ni[a].cmp(&nj[z]) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => z += 1,
            std::cmp::Ordering::Equal => {
                intersection += 1;
                a += 1;
                z += 1;
            }
        }
    }
    let union = ni.len() + nj.len() - intersection;
    if union == 0 {
        return Err(Error::EmptyNeighborSets(i.to_string(), j.to_string()));
    }
    Ok(F::one() - F::from_f64_lossy(intersection as f64 / union as f64))
}

/// The Rao-Stirling aggregation over unordered neighbor pairs given the
/// normalized weights and a pairwise dissimilarity. Exposed so the
/// aggregation can be checked against hand-computed weights directly.
pub fn pairwise_score<F: Real>(weights: &[F], dissimilarity: impl Fn(usize, usize) -> F) -> F {
    let mut score = F::zero();
    for a in 0..weights.len() {
        for z in a + 1..weights.len() {
            score += weights[a] * weights[z] * dissimilarity(a, z);
        }
    }
    score
}

/// Composite openness of one country: breadth, normalized neighbor
/// weights, and the weighted pairwise-dissimilarity sum. Countries with
/// breadth <= 1 score exactly zero.
pub fn composite_openness<F: Real>(
    b: &BipartiteGraph,
    c: &CountryCode,
) -> Result<OpennessScore<F>, Error> {
    let x = b
        .country_index(c)
        .ok_or_else(|| Error::UnknownCountry(c.to_string()))?;

    let mut neighbors: Vec<u32> = Vec::new();
    let mut overlaps: Vec<usize> = Vec::new();
    for y in 0..b.countries().len() {
        if y == x {
            continue;
        }
        let n = overlap_count(b, x, y);
        if n > 0 {
            neighbors.push(y as u32);
            overlaps.push(n);
        }
    }
    let breadth = neighbors.len();
    let total: usize = overlaps.iter().sum();
    let weights: Vec<F> = overlaps
        .iter()
        .map(|&n| F::from_f64_lossy(n as f64) / F::from_f64_lossy(total as f64))
        .collect();
    let neighbor_weights: BTreeMap<CountryCode, F> = neighbors
        .iter()
        .zip(&weights)
        .map(|(&y, &w)| (b.countries()[y as usize], w))
        .collect();

    if breadth <= 1 {
        return Ok(OpennessScore {
            country: *c,
            breadth,
            score: F::zero(),
            neighbor_weights,
        });
    }

    let sets: Vec<Vec<u32>> = neighbors
        .iter()
        .map(|&y| neighbor_set(b, y as usize))
        .collect();
    let mut score = F::zero();
    for a in 0..breadth {
        for z in a + 1..breadth {
            let d: F = jaccard_of_sets(
                &b.countries()[neighbors[a] as usize],
                &b.countries()[neighbors[z] as usize],
                &sets[a],
                &sets[z],
            )?;
            score += weights[a] * weights[z] * d;
        }
    }
    Ok(OpennessScore {
        country: *c,
        breadth,
        score,
        neighbor_weights,
    })
}

/// Composite openness for every country, in country order.
pub fn all_openness<F: Real>(b: &BipartiteGraph) -> Result<Vec<OpennessScore<F>>, Error> {
    b.countries()
        .iter()
        .map(|c| composite_openness(b, c))
        .collect()
}

/// TSV: country, breadth, openness_score.
pub fn openness_tsv<F: Real>(scores: &[OpennessScore<F>]) -> String {
    let mut out = String::from("country\tbreadth\topenness_score\n");
    for s in scores {
        out.push_str(&format!("{}\t{}\t{}\n", s.country, s.breadth, s.score));
    }
    out
}

pub fn openness_json<F: Real>(scores: &[OpennessScore<F>]) -> String {
    let rows: Vec<serde_json::Value> = scores
        .iter()
        .map(|s| {
            serde_json::json!({
                "country": s.country.as_str(),
                "breadth": s.breadth,
                "openness_score": s.score.to_f64_lossy(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("openness serializes")
}
