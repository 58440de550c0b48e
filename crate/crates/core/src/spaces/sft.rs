//! Two-sided shifts of finite type via the pruned higher-block (De Bruijn) graph.

use std::collections::{BTreeSet, VecDeque};

use super::{Limits, Symbol, Word};
use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct Sft {
    /// Block length of the vertices.
    pub(crate) memory: usize,
    /// Surviving vertices, sorted lexicographically.
    pub(crate) vertices: Vec<Word>,
    /// `out[v]` lists `(symbol, target)` sorted by symbol.
    pub(crate) out: Vec<Vec<(Symbol, usize)>>,
    /// Symbols of the designated periodic point, one period.
    pub(crate) period: Word,
}

fn has_forbidden_suffix(w: &[Symbol], forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| w.ends_with(f))
}

impl Sft {
    pub(crate) fn new(alphabet_size: usize, forbidden: Vec<Word>, limits: &Limits) -> Result<Self> {
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(0);
        if forbidden.iter().any(|f| f.is_empty()) {
            return Err(Error::InvalidSpec("forbidden words must be nonempty".into()));
        }
        let memory = longest.saturating_sub(1).max(1);
        let total = (alphabet_size as u128).pow(memory as u32);
        if total > limits.max_language_size as u128 {
            return Err(Error::InvalidSpec(format!("forbidden words too long: {total} candidate blocks")));
        }

        // Allowed blocks of length `memory`, in lexicographic order.
        let mut blocks: Vec<Word> = vec![vec![]];
        for _ in 0..memory {
            let mut next = Vec::with_capacity(blocks.len() * alphabet_size);
            for b in &blocks {
                for s in 0..alphabet_size as Symbol {
                    let mut w = b.clone();
                    w.push(s);
                    if !has_forbidden_suffix(&w, &forbidden) {
                        next.push(w);
                    }
                }
            }
            blocks = next;
        }

        let index = |w: &[Symbol], blocks: &[Word]| blocks.binary_search_by(|b| b.as_slice().cmp(w)).ok();
        let mut out: Vec<Vec<(Symbol, usize)>> = vec![vec![]; blocks.len()];
        for (v, b) in blocks.iter().enumerate() {
            for s in 0..alphabet_size as Symbol {
                let mut w = b.clone();
                w.push(s);
                if has_forbidden_suffix(&w, &forbidden) {
                    continue;
                }
                if let Some(t) = index(&w[1..], &blocks) {
                    out[v].push((s, t));
                }
            }
        }

        // Prune vertices without predecessors or successors until stable.
        let mut alive = vec![true; blocks.len()];
        loop {
            let mut indeg = vec![0usize; blocks.len()];
            let mut outdeg = vec![0usize; blocks.len()];
            for (v, edges) in out.iter().enumerate() {
                if !alive[v] {
                    continue;
                }
                for &(_, t) in edges {
                    if alive[t] {
                        outdeg[v] += 1;
                        indeg[t] += 1;
                    }
                }
            }
            let mut changed = false;
            for v in 0..blocks.len() {
                if alive[v] && (indeg[v] == 0 || outdeg[v] == 0) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renumber = vec![usize::MAX; blocks.len()];
        let mut vertices = Vec::new();
        for (v, b) in blocks.iter().enumerate() {
            if alive[v] {
                renumber[v] = vertices.len();
                vertices.push(b.clone());
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptySft);
        }
        let out: Vec<Vec<(Symbol, usize)>> = out
            .iter()
            .enumerate()
            .filter(|(v, _)| alive[*v])
            .map(|(_, edges)| edges.iter().filter(|(_, t)| alive[*t]).map(|&(s, t)| (s, renumber[t])).collect())
            .collect();

        let period = shortest_cycle(&vertices, &out);
        Ok(Sft { memory, vertices, out, period })
    }

    pub(crate) fn language(&self, n: usize, limits: &Limits) -> Result<Vec<Word>> {
        if n <= self.memory {
            let set: BTreeSet<Word> = self.vertices.iter().map(|v| v[..n].to_vec()).collect();
            return Ok(set.into_iter().collect());
        }
        // Distinct walks spell distinct words, and sorted vertices with
        // symbol-sorted edges emit them in lexicographic order.
        let mut words = Vec::new();
        let mut stack: Vec<(usize, Word)> = Vec::new();
        for (v, b) in self.vertices.iter().enumerate().rev() {
            stack.push((v, b.clone()));
        }
        while let Some((v, w)) = stack.pop() {
            if w.len() == n {
                words.push(w);
                if words.len() > limits.max_language_size {
                    return Err(Error::CertificationFailure(format!(
                        "more than {} words of length {n}",
                        limits.max_language_size
                    )));
                }
                continue;
            }
            for &(s, t) in self.out[v].iter().rev() {
                let mut next = w.clone();
                next.push(s);
                stack.push((t, next));
            }
        }
        Ok(words)
    }
}

/// One period of the shortest cycle, ties broken by the smallest start vertex.
/// Reading the first symbol of each vertex along the cycle gives the point.
fn shortest_cycle(vertices: &[Word], out: &[Vec<(Symbol, usize)>]) -> Word {
    let mut best: Option<Vec<usize>> = None;
    for start in 0..vertices.len() {
        let mut parent = vec![usize::MAX; vertices.len()];
        let mut queue = VecDeque::new();
        let mut found = None;
        for &(_, t) in &out[start] {
            if parent[t] == usize::MAX {
                parent[t] = start;
                queue.push_back(t);
            }
        }
        while let Some(v) = queue.pop_front() {
            if v == start {
                found = Some(v);
                break;
            }
            for &(_, t) in &out[v] {
                if parent[t] == usize::MAX {
                    parent[t] = v;
                    queue.push_back(t);
                }
            }
        }
        if found.is_none() {
            continue;
        }
        let mut cycle = vec![start];
        let mut v = parent[start];
        while v != start {
            cycle.push(v);
            v = parent[v];
        }
        cycle.reverse();
        // cycle now reads start's predecessor chain forwards, ending before start.
        cycle.rotate_right(1);
        if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
            best = Some(cycle);
        }
    }
    // Pruning leaves every vertex with an out-edge, so some cycle exists.
    let cycle = best.expect("pruned graph has a cycle");
    cycle.iter().map(|&v| vertices[v][0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::new(2, vec![vec![1, 1]], &Limits::default()).unwrap()
    }

    #[test]
    fn golden_mean_graph_has_two_vertices() {
        let g = golden();
        assert_eq!(g.vertices, vec![vec![0], vec![1]]);
        assert_eq!(g.out[1], vec![(0, 0)]);
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let g = golden();
        let limits = Limits::default();
        let counts: Vec<usize> = (1..=8).map(|n| g.language(n, &limits).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21, 34, 55]);
        assert_eq!(g.language(2, &limits).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn pruning_removes_dead_ends() {
        // Forbid ab and bb: b can never be followed, so only a^Z survives.
        let g = Sft::new(2, vec![vec![0, 1], vec![1, 1], vec![1, 0]], &Limits::default()).unwrap();
        assert_eq!(g.vertices, vec![vec![0]]);
        assert_eq!(g.period, vec![0]);
    }

    #[test]
    fn empty_sft() {
        let r = Sft::new(2, vec![vec![0], vec![1]], &Limits::default());
        assert!(matches!(r, Err(Error::EmptySft)));
    }

    #[test]
    fn periodic_point_is_admissible() {
        let g = Sft::new(3, vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![0, 1]], &Limits::default()).unwrap();
        let p = &g.period;
        let limits = Limits::default();
        let lang = g.language(4, &limits).unwrap();
        for i in 0..p.len() {
            let w: Word = (0..4).map(|k| p[(i + k) % p.len()]).collect();
            assert!(lang.binary_search(&w).is_ok());
        }
    }
}
