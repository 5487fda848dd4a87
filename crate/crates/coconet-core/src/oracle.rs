//! Brute-force reference implementations used by the test suites. Each
//! oracle takes the slow-but-obvious route (exhaustive enumeration,
//! explicit auxiliary regressions, naive loops) and stays independent of
//! the production code paths it checks.

use crate::centrality::TIE_TOLERANCE;
use crate::country::CountryCode;
use crate::ingest::{build_bipartite, BipartiteGraph, ListingRecord};
use crate::projection::WeightedCountryGraph;
use crate::scalar::WeightScalar;
use chrono::NaiveDate;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Projection by the naive double loop: every country pair, every item.
pub fn projection_bruteforce<W: WeightScalar>(
    b: &BipartiteGraph,
) -> Vec<(CountryCode, CountryCode, W)> {
    let countries = b.countries();
    let mut edges = Vec::new();
    for i in 0..countries.len() {
        for j in i + 1..countries.len() {
            let mut w = W::zero();
            for item in 0..b.items().len() {
                let listed = b.item_countries(item);
                if listed.contains(&(i as u32)) && listed.contains(&(j as u32)) {
                    w += W::inverse_count(b.out_degree(item) - 1);
                }
            }
            if w > W::zero() {
                edges.push((countries[i], countries[j], w));
            }
        }
    }
    edges
}

/// All-pairs shortest-path data from exhaustive simple-path enumeration.
pub struct EnumeratedPaths {
    pub dist: Vec<Vec<f64>>,
    pub count: Vec<Vec<f64>>,
    /// through[s][t][v]: minimum-cost s-t paths with v strictly inside.
    pub through: Vec<Vec<Vec<f64>>>,
}

/// Enumerate every simple path and keep the minimum-cost ones per pair,
/// with ties decided by the same relative tolerance the production code
/// uses.
pub fn enumerate_paths(g: &WeightedCountryGraph<f64>, alpha: f64) -> EnumeratedPaths {
    let n = g.node_count();
    let adj = g.adjacency();
    let costs: Vec<Vec<(usize, f64)>> = adj
        .iter()
        .map(|list| {
            list.iter()
                .map(|&(v, w)| (v as usize, 1.0 / w.powf(alpha)))
                .collect()
        })
        .collect();

    let mut dist = vec![vec![f64::INFINITY; n]; n];
    let mut count = vec![vec![0.0; n]; n];
    let mut through = vec![vec![vec![0.0; n]; n]; n];

    // collected (cost, interior bitmask) per target for one source
    let mut paths: Vec<Vec<(f64, u64)>> = Vec::new();

    fn dfs(
        u: usize,
        cost: f64,
        visited: u64,
        costs: &[Vec<(usize, f64)>],
        paths: &mut [Vec<(f64, u64)>],
        source: usize,
    ) {
        for &(v, c) in &costs[u] {
            if visited & (1 << v) != 0 {
                continue;
            }
            // interior of source -> ... -> u -> v: the visited set minus
            // the source (v is not in it yet)
            let interior = visited & !(1 << source);
            paths[v].push((cost + c, interior));
            dfs(v, cost + c, visited | (1 << v), costs, paths, source);
        }
    }

    for s in 0..n {
        paths.clear();
        paths.resize(n, Vec::new());
        dfs(s, 0.0, 1 << s, &costs, &mut paths, s);
        for t in 0..n {
            if t == s {
                dist[s][t] = 0.0;
                continue;
            }
            let best = paths[t]
                .iter()
                .map(|&(c, _)| c)
                .fold(f64::INFINITY, f64::min);
            if !best.is_finite() {
                continue;
            }
            dist[s][t] = best;
            for &(c, interior) in &paths[t] {
                if (c - best).abs() <= TIE_TOLERANCE * c.max(best) {
                    count[s][t] += 1.0;
                    for v in 0..n {
                        if interior & (1 << v) != 0 {
                            through[s][t][v] += 1.0;
                        }
                    }
                }
            }
        }
    }
    EnumeratedPaths {
        dist,
        count,
        through,
    }
}

impl EnumeratedPaths {
    /// Closeness per node; None when some peer is unreachable.
    pub fn closeness(&self) -> Vec<Option<f64>> {
        let n = self.dist.len();
        (0..n)
            .map(|i| {
                let mut total = 0.0;
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    if !self.dist[i][j].is_finite() {
                        return None;
                    }
                    total += self.dist[i][j];
                }
                Some(1.0 / total)
            })
            .collect()
    }

    /// Unnormalized betweenness over unordered pairs.
    pub fn betweenness(&self) -> Vec<f64> {
        let n = self.dist.len();
        let mut out = vec![0.0; n];
        for j in 0..n {
            for k in j + 1..n {
                if self.count[j][k] == 0.0 {
                    continue;
                }
                for (v, slot) in out.iter_mut().enumerate() {
                    if v != j && v != k {
                        *slot += self.through[j][k][v] / self.count[j][k];
                    }
                }
            }
        }
        out
    }
}

/// Unweighted Brandes on BFS levels, mirroring the production
/// accumulation discipline (settle order sorted by (distance, index)) so
/// alpha = 0 results must agree bit for bit.
pub fn unweighted_betweenness(g: &WeightedCountryGraph<f64>) -> Vec<f64> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut score = vec![0.0; n];
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut order: Vec<usize> = Vec::new();
        dist[s] = 0;
        let mut frontier = vec![s];
        while !frontier.is_empty() {
            order.extend(&frontier);
            let mut next = Vec::new();
            for &u in &frontier {
                for &(v, _) in &adj[u] {
                    let v = v as usize;
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        next.push(v);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            frontier = next;
        }
        let mut sigma = vec![0.0; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        sigma[s] = 1.0;
        for &u in &order {
            for &(v, _) in &adj[u] {
                let v = v as usize;
                if dist[v] == dist[u].wrapping_add(1) {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
        let mut delta = vec![0.0; n];
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    for v in score.iter_mut() {
        *v *= 0.5;
    }
    score
}

/// Hop distances by plain BFS.
pub fn bfs_distances(g: &WeightedCountryGraph<f64>, source: usize) -> Vec<Option<usize>> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut dist = vec![None; n];
    dist[source] = Some(0);
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adj[u] {
            let v = v as usize;
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Composite openness by the naive triple loop over neighbor pairs with
/// per-pair set recomputation.
pub fn composite_openness_tripleloop(b: &BipartiteGraph, c: &CountryCode) -> f64 {
    let countries = b.countries();
    let x = b.country_index(c).expect("country in graph");
    let overlap = |p: usize, q: usize| -> usize {
        let (a, z) = (b.country_items(p), b.country_items(q));
        a.iter().filter(|i| z.contains(i)).count()
    };
    let neighbors: Vec<usize> = (0..countries.len())
        .filter(|&y| y != x && overlap(x, y) > 0)
        .collect();
    if neighbors.len() <= 1 {
        return 0.0;
    }
    let total: usize = neighbors.iter().map(|&y| overlap(x, y)).sum();
    let neighbor_set = |p: usize| -> Vec<usize> {
        (0..countries.len())
            .filter(|&y| y != p && overlap(p, y) > 0)
            .collect()
    };
    let mut score = 0.0;
    for (ai, &i) in neighbors.iter().enumerate() {
        for &j in neighbors.iter().skip(ai + 1) {
            let wi = overlap(x, i) as f64 / total as f64;
            let wj = overlap(x, j) as f64 / total as f64;
            let ni = neighbor_set(i);
            let nj = neighbor_set(j);
            let inter = ni.iter().filter(|v| nj.contains(v)).count();
            let union = ni.len() + nj.len() - inter;
            let d = 1.0 - inter as f64 / union as f64;
            score += wi * wj * d;
        }
    }
    score
}

/// Solve a symmetric linear system by Gaussian elimination with partial
/// pivoting; the independent route for the regression oracles.
fn gaussian_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[pivot][k].abs() < 1e-12 {
            return None;
        }
        a.swap(k, pivot);
        b.swap(k, pivot);
        for i in k + 1..n {
            let factor = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= factor * a[k][j];
            }
            b[i] -= factor * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in k + 1..n {
            acc -= a[k][j] * x[j];
        }
        x[k] = acc / a[k][k];
    }
    Some(x)
}

/// R^2 of y regressed on the columns plus an intercept, via normal
/// equations (a different solver and decomposition than production).
pub fn r_squared_normal_equations(y: &[f64], columns: &[Vec<f64>]) -> Option<f64> {
    let n = y.len();
    let mut design: Vec<Vec<f64>> = vec![vec![1.0; n]];
    design.extend(columns.iter().cloned());
    let p = design.len();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for i in 0..p {
        for j in 0..p {
            xtx[i][j] = design[i].iter().zip(&design[j]).map(|(a, b)| a * b).sum();
        }
        xty[i] = design[i].iter().zip(y).map(|(a, b)| a * b).sum();
    }
    let beta = gaussian_solve(xtx, xty)?;
    let mean = y.iter().sum::<f64>() / n as f64;
    let mut rss = 0.0;
    let mut tss = 0.0;
    for row in 0..n {
        let fitted: f64 = (0..p).map(|j| beta[j] * design[j][row]).sum();
        rss += (y[row] - fitted).powi(2);
        tss += (y[row] - mean).powi(2);
    }
    if tss > 0.0 {
        Some(1.0 - rss / tss)
    } else {
        None
    }
}

/// VIFs by explicit auxiliary regressions through the normal equations.
pub fn vif_bruteforce(columns: &[Vec<f64>]) -> Vec<f64> {
    (0..columns.len())
        .map(|j| {
            let others: Vec<Vec<f64>> = columns
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, c)| c.clone())
                .collect();
            match r_squared_normal_equations(&columns[j], &others) {
                Some(r2) if 1.0 - r2 > 1e-12 => 1.0 / (1.0 - r2),
                _ => f64::INFINITY,
            }
        })
        .collect()
}

/// Breusch-Pagan score statistic by the explicit auxiliary regression.
pub fn bp_statistic_bruteforce(residuals: &[f64], columns: &[Vec<f64>]) -> f64 {
    let n = residuals.len();
    let ubar = residuals.iter().map(|e| e * e).sum::<f64>() / n as f64;
    if ubar <= 0.0 {
        return 0.0;
    }
    let y: Vec<f64> = residuals.iter().map(|e| e * e / ubar).collect();
    match r_squared_normal_equations(&y, columns) {
        Some(r2) => n as f64 * r2.max(0.0),
        None => 0.0,
    }
}

/// Adjusted Rand index between two partitions.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let ka = a.iter().max().map_or(0, |&m| m + 1);
    let kb = b.iter().max().map_or(0, |&m| m + 1);
    let mut table = vec![vec![0usize; kb]; ka];
    for i in 0..n {
        table[a[i]][b[i]] += 1;
    }
    let choose2 = |x: usize| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_ij: f64 = table.iter().flatten().map(|&x| choose2(x)).sum();
    let sum_a: f64 = (0..ka).map(|i| choose2(table[i].iter().sum())).sum();
    let sum_b: f64 = (0..kb)
        .map(|j| choose2((0..ka).map(|i| table[i][j]).sum()))
        .sum();
    let expected = sum_a * sum_b / choose2(n);
    let max = 0.5 * (sum_a + sum_b);
    if (max - expected).abs() < 1e-12 {
        return 1.0;
    }
    (sum_ij - expected) / (max - expected)
}

/// Country code for generated fixtures: AAA, AAB, ...
pub fn test_country(index: usize) -> CountryCode {
    let mut chars = [b'A'; 3];
    let mut rest = index;
    for slot in (0..3).rev() {
        chars[slot] = b'A' + (rest % 26) as u8;
        rest /= 26;
    }
    CountryCode::new(std::str::from_utf8(&chars).unwrap()).unwrap()
}

/// Random connected weighted graph: a random spanning tree plus extra
/// edges, weights log-uniform in [0.1, 10].
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra_edges: usize,
) -> WeightedCountryGraph<f64> {
    let nodes: Vec<CountryCode> = (0..n).map(test_country).collect();
    let mut edges: Vec<(CountryCode, CountryCode, f64)> = Vec::new();
    let weight = |rng: &mut ChaCha8Rng| 10f64.powf(rng.gen_range(-1.0..1.0));
    let mut present = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        present.insert((u, v));
        edges.push((nodes[u], nodes[v], weight(rng)));
    }
    let mut attempts = 0;
    let mut added = 0;
    while added < extra_edges && attempts < 50 * extra_edges.max(1) {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if present.insert(key) {
            edges.push((nodes[key.0], nodes[key.1], weight(rng)));
            added += 1;
        }
    }
    WeightedCountryGraph::from_edges(&nodes, &edges).expect("generated edges are valid")
}

/// Random bipartite incidence over the given country and item counts.
pub fn random_bipartite(rng: &mut ChaCha8Rng, countries: usize, items: usize) -> BipartiteGraph {
    let date = NaiveDate::from_ymd_opt(2015, 1, 1).unwrap();
    let mut records = Vec::new();
    for k in 0..items {
        let listers = rng.gen_range(1..=countries);
        let picked = rand::seq::index::sample(rng, countries, listers);
        for c in picked.iter() {
            records.push(ListingRecord {
                date,
                country: test_country(c),
                item_id: format!("I{k:04}"),
                category: None,
            });
        }
    }
    // make sure every country exists even if it listed nothing
    for c in 0..countries {
        records.push(ListingRecord {
            date,
            country: test_country(c),
            item_id: format!("SOLO{c:03}"),
            category: None,
        });
    }
    build_bipartite(&records, None, 1).expect("non-empty bipartite fixture")
}
