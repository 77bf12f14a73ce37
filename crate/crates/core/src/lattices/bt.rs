use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::LatticeHNF;
use crate::error::{Error, Result};
use crate::int;
use crate::quaternion::QuaternionOrder;

/// The invariant part of the Bruhat-Tits tree at `p`, vertices being
/// primitive representatives of homothety classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BTGraph {
    pub p: i64,
    pub vertices: Vec<LatticeHNF>,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
    /// `v_p` of the ring index; bounds the diameter.
    pub radius: u32,
}

/// The p+1 tree neighbours of the class of `l`.
pub fn tree_neighbors(l: &LatticeHNF, p: i64) -> Vec<LatticeHNF> {
    l.sublattices(p).into_iter().map(|s| s.primitive()).collect()
}

pub fn bt_graph(r: &QuaternionOrder, p: i64) -> Result<BTGraph> {
    if !int::is_prime_i64(p) {
        return Err(Error::NotPrime(p));
    }
    let index = r.ring_index()?;
    let radius = int::valuation(index, p);
    let root = LatticeHNF::UNIT;
    let mut id: HashMap<LatticeHNF, usize> = HashMap::from([(root, 0)]);
    let mut vertices = vec![root];
    let mut depth = vec![0u32];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if depth[u] == radius {
            continue;
        }
        for nb in tree_neighbors(&vertices[u], p) {
            if !nb.invariant_under_order(r) {
                continue;
            }
            let v = match id.get(&nb) {
                Some(&v) => v,
                None => {
                    let v = vertices.len();
                    id.insert(nb, v);
                    vertices.push(nb);
                    depth.push(depth[u] + 1);
                    queue.push_back(v);
                    v
                }
            };
            let e = (u.min(v), u.max(v));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    edges.sort_unstable();
    Ok(BTGraph { p, vertices, edges, root: 0, radius })
}

/// `G` is the `k`-neighbourhood of the geodesic `path` with `l` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDecomposition {
    pub k: u32,
    pub l: u32,
    pub path: Vec<LatticeHNF>,
}

impl BTGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Every degree lies in `{0, 1, 2, p+1}`.
    pub fn degree_law_holds(&self) -> bool {
        let full = (self.p + 1) as usize;
        self.degrees().into_iter().all(|d| d <= 2 || d == full)
    }

    fn distances(&self) -> Vec<Vec<u32>> {
        let n = self.vertices.len();
        let mut d = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.vertices[i].tree_distance(&self.vertices[j], self.p);
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        d
    }
}

/// Number of vertices within distance `k` of an `l`-edge path in the
/// `(p+1)`-regular tree.
pub fn neighborhood_size(p: i64, k: u32, l: u32) -> i64 {
    let s: i64 = (0..k).map(|i| p.pow(i)).sum();
    if l == 0 {
        1 + (p + 1) * s
    } else {
        let l = i64::from(l);
        (l + 1) + (2 * p + (l - 1) * (p - 1)) * s
    }
}

/// Minimal `(k, l)` such that the graph is the `k`-neighbourhood of an
/// `l`-edge geodesic, with `2k + l <= v_p(Delta)` enforced.
pub fn path_decompose(g: &BTGraph) -> Result<PathDecomposition> {
    let n = g.vertices.len();
    if n == 0 {
        return Err(Error::StructureViolation("empty graph".into()));
    }
    let dist = g.distances();
    let mut best: Option<(u32, u32, usize, usize)> = None;
    for u in 0..n {
        for v in u..n {
            let l = dist[u][v];
            // the geodesic must lie in G: count its vertices among G
            let on_path: Vec<usize> = (0..n).filter(|&w| dist[u][w] + dist[w][v] == l).collect();
            if on_path.len() != l as usize + 1 {
                continue;
            }
            let k = (0..n).map(|w| on_path.iter().map(|&x| dist[w][x]).min().unwrap_or(0)).max().unwrap_or(0);
            if neighborhood_size(g.p, k, l) != n as i64 {
                continue;
            }
            let cand = (k, l, u, v);
            if best.is_none_or(|b| (k, l) < (b.0, b.1)) {
                best = Some(cand);
            }
        }
    }
    let Some((k, l, u, v)) = best else {
        return Err(Error::StructureViolation(format!(
            "invariant graph at p={} with vertices {:?} is not a neighbourhood of a path",
            g.p, g.vertices
        )));
    };
    if 2 * k + l > g.radius {
        return Err(Error::StructureViolation(format!(
            "2k + l = {} exceeds v_p(Delta) = {} at p = {}",
            2 * k + l,
            g.radius,
            g.p
        )));
    }
    let mut path: Vec<usize> = (0..n).filter(|&w| dist[u][w] + dist[w][v] == l).collect();
    path.sort_by_key(|&w| dist[u][w]);
    Ok(PathDecomposition { k, l, path: path.into_iter().map(|w| g.vertices[w]).collect() })
}
