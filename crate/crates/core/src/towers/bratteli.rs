//! Ordered Bratteli diagrams: extraction from nested partitions, telescoping,
//! the Vershik successor on path prefixes, and incidence matrices.

use serde::{Deserialize, Serialize};

use super::{KRPartition, NestedKRSequence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub range: usize,
    pub order: usize,
}

/// Graded diagram with a single root vertex at level 0. `edges[n]` joins
/// level `n` to level `n + 1` and is sorted by `(range, order)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BratteliDiagram {
    vertices: Vec<usize>,
    edges: Vec<Vec<Edge>>,
    #[serde(default)]
    essentially_simple: bool,
    /// Vertex of the minimal (resp. maximal) infinite path at each level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_path: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_path: Option<Vec<usize>>,
}

/// Outcome of [`vershik_step`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VershikResult {
    Next(Vec<usize>),
    NeedsMoreLevels,
    WrapToMinimal(Vec<usize>),
}

impl BratteliDiagram {
    /// Validate and sort a diagram given by vertex counts per level and edges
    /// per gap. The diagram is not marked essentially simple.
    pub fn new(vertices: Vec<usize>, edges: Vec<Vec<Edge>>) -> Result<BratteliDiagram> {
        let d = BratteliDiagram { vertices, edges, essentially_simple: false, min_path: None, max_path: None };
        d.validated()
    }

    /// Check the invariants of a deserialized diagram and sort its edges.
    pub fn validated(mut self) -> Result<BratteliDiagram> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if self.vertices.first() != Some(&1) {
            return bad("level 0 must hold exactly one vertex".into());
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return bad("need one edge set between consecutive levels".into());
        }
        for (n, es) in self.edges.iter_mut().enumerate() {
            es.sort_by_key(|e| (e.range, e.order));
            let mut has_out = vec![false; self.vertices[n]];
            let mut indeg = vec![0usize; self.vertices[n + 1]];
            for e in es.iter() {
                if e.source >= self.vertices[n] || e.range >= self.vertices[n + 1] {
                    return bad(format!("edge {e:?} at level {n} is out of range"));
                }
                if e.order != indeg[e.range] {
                    return bad(format!("orders into vertex {} at level {} are not 0..k", e.range, n + 1));
                }
                indeg[e.range] += 1;
                has_out[e.source] = true;
            }
            if has_out.contains(&false) {
                return bad(format!("a vertex at level {n} has no outgoing edge"));
            }
            if indeg.contains(&0) {
                return bad(format!("a vertex at level {} has no incoming edge", n + 1));
            }
        }
        for p in [&self.min_path, &self.max_path].into_iter().flatten() {
            if p.len() != self.vertices.len() || p.iter().zip(&self.vertices).any(|(v, n)| v >= n) {
                return bad("marked path does not fit the levels".into());
            }
        }
        Ok(self)
    }

    /// Vertex counts per level, root level first.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Vec<Edge>] {
        &self.edges
    }

    /// Number of levels after the root.
    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn essentially_simple(&self) -> bool {
        self.essentially_simple
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Index of the order-0 edge into vertex `v` of level `n + 1`.
    fn first_in(&self, n: usize, v: usize) -> usize {
        self.edges[n].partition_point(|e| e.range < v)
    }

    fn is_max(&self, n: usize, i: usize) -> bool {
        let e = self.edges[n][i];
        self.edges[n].get(i + 1).is_none_or(|f| f.range != e.range)
    }

    /// Edge indices from the root to vertex `v` at level `len` using only
    /// order-0 edges.
    fn minimal_path_to(&self, len: usize, mut v: usize) -> Vec<usize> {
        let mut path = vec![0; len];
        for n in (0..len).rev() {
            path[n] = self.first_in(n, v);
            v = self.edges[n][path[n]].source;
        }
        path
    }

    fn check_prefix(&self, path: &[usize]) -> Result<()> {
        let bad = |m: &str| Err(Error::IncomposablePrefix(m.to_string()));
        if path.is_empty() {
            return bad("empty prefix");
        }
        if path.len() > self.depth() {
            return bad("prefix longer than the diagram");
        }
        let mut v = 0;
        for (n, &i) in path.iter().enumerate() {
            let Some(e) = self.edges[n].get(i) else {
                return bad("edge index out of range");
            };
            if e.source != v {
                return bad("consecutive edges do not meet");
            }
            v = e.range;
        }
        Ok(())
    }

    /// Number of paths from the root to each vertex of `level`.
    pub fn path_counts(&self, level: usize) -> Vec<u64> {
        pushforward(self, &[1], 0, level)
    }
}

/// Ordered diagram of a nested sequence. Level 0 is the trivial partition;
/// level `n + 1` holds the towers of the `n`-th stored partition. Each tower's
/// base orbit is traced through the coarser towers and every pass gives one
/// edge, ordered by pass.
pub fn bratteli_from_nested(seq: &NestedKRSequence) -> Result<BratteliDiagram> {
    let space = seq.space();
    let mut levels = vec![KRPartition::trivial(space)];
    levels.extend(seq.levels().iter().cloned());
    let mut edges = Vec::new();
    for pair in levels.windows(2) {
        let (coarse, fine) = (&pair[0], &pair[1]);
        let mut es = Vec::new();
        for (t, tower) in fine.towers().iter().enumerate() {
            let mut k = 0;
            let mut order = 0;
            while k < tower.height {
                let here = space.shift_image(&tower.base, k as i64);
                let mut found = None;
                for (i, c) in coarse.towers().iter().enumerate() {
                    if space.is_subset(&here, &c.base)? {
                        found = Some(i);
                        break;
                    }
                }
                let i = found
                    .ok_or_else(|| Error::TraceFailure(format!("level {k} of tower {t} starts no coarse tower")))?;
                let h = coarse.towers()[i].height;
                let top = space.shift_image(&tower.base, (k + h - 1) as i64);
                if k + h > tower.height || !space.is_subset(&top, &coarse.atom(i, h - 1))? {
                    return Err(Error::TraceFailure(format!("pass through tower {i} is cut short")));
                }
                es.push(Edge { source: i, range: t, order });
                order += 1;
                k += h;
            }
        }
        edges.push(es);
    }
    let x = seq.point();
    let before = x.shifted(-1)?;
    let mut min_path = Vec::new();
    let mut max_path = Vec::new();
    for kr in &levels {
        min_path.push(kr.locate(x)?.0);
        max_path.push(kr.locate(&before)?.0);
    }
    let vertices = levels.iter().map(|k| k.towers().len()).collect();
    BratteliDiagram { vertices, edges, essentially_simple: true, min_path: Some(min_path), max_path: Some(max_path) }
        .validated()
}

/// Successor of a path prefix: the first non-maximal edge moves to its
/// successor and the edges below it become minimal.
pub fn vershik_step(d: &BratteliDiagram, path: &[usize]) -> Result<VershikResult> {
    d.check_prefix(path)?;
    let Some(i) = (0..path.len()).find(|&n| !d.is_max(n, path[n])) else {
        let len = path.len();
        if let (true, Some(maxp), Some(minp)) = (d.essentially_simple, &d.max_path, &d.min_path) {
            let top = d.edges[len - 1][path[len - 1]].range;
            if top == maxp[len] {
                return Ok(VershikResult::WrapToMinimal(d.minimal_path_to(len, minp[len])));
            }
        }
        return Ok(VershikResult::NeedsMoreLevels);
    };
    let mut next = path.to_vec();
    next[i] += 1;
    let below = d.minimal_path_to(i, d.edges[i][next[i]].source);
    next[..i].copy_from_slice(&below);
    Ok(VershikResult::Next(next))
}

/// Keep only the levels in `levels` (which must start at 0 and increase);
/// edges become paths, ordered with the upper edge most significant.
pub fn telescope(d: &BratteliDiagram, levels: &[usize]) -> Result<BratteliDiagram> {
    if levels.first() != Some(&0) {
        return Err(Error::BadSubsequence("must start at the root level 0".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadSubsequence("levels must strictly increase".into()));
    }
    if *levels.last().unwrap() > d.depth() {
        return Err(Error::BadSubsequence("level beyond the diagram".into()));
    }
    let mut edges = Vec::new();
    for w in levels.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut es = Vec::new();
        for v in 0..d.vertices[b] {
            let mut sources = Vec::new();
            paths_down(d, a, b, v, &mut sources);
            for (order, source) in sources.into_iter().enumerate() {
                es.push(Edge { source, range: v, order });
            }
        }
        edges.push(es);
    }
    let pick = |p: &Option<Vec<usize>>| p.as_ref().map(|p| levels.iter().map(|&l| p[l]).collect());
    BratteliDiagram {
        vertices: levels.iter().map(|&l| d.vertices[l]).collect(),
        edges,
        essentially_simple: d.essentially_simple,
        min_path: pick(&d.min_path),
        max_path: pick(&d.max_path),
    }
    .validated()
}

/// Sources at level `a` of all paths from level `a` to vertex `v` at level
/// `b`, in path order.
fn paths_down(d: &BratteliDiagram, a: usize, b: usize, v: usize, out: &mut Vec<usize>) {
    if a == b {
        out.push(v);
        return;
    }
    let start = d.first_in(b - 1, v);
    for e in d.edges[b - 1][start..].iter().take_while(|e| e.range == v) {
        paths_down(d, a, b - 1, e.source, out);
    }
}

/// `M_n[range][source]` = number of edges from level `n` to level `n + 1`.
pub fn incidence_matrices(d: &BratteliDiagram) -> Vec<Vec<Vec<u64>>> {
    d.edges
        .iter()
        .enumerate()
        .map(|(n, es)| {
            let mut m = vec![vec![0u64; d.vertices[n]]; d.vertices[n + 1]];
            for e in es {
                m[e.range][e.source] += 1;
            }
            m
        })
        .collect()
}

/// `M_{to-1} ⋯ M_from v`.
pub fn pushforward(d: &BratteliDiagram, v: &[u64], from: usize, to: usize) -> Vec<u64> {
    let mats = incidence_matrices(d);
    let mut v = v.to_vec();
    for m in &mats[from..to] {
        v = m.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
    }
    v
}
