use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    CayleyTree,
    LinearChain,
}

/// Nodes with generation labels plus an undirected edge set.
///
/// Tree nodes are numbered breadth-first from the root, so each generation
/// occupies a contiguous index block and the children of node `k` are
/// `2k + 1` and `2k + 2`. For chains the generation label is the staggering
/// index `n mod 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    kind: LatticeKind,
    generations: Vec<usize>,
    /// `(parent, child)` for trees, `(i, i + 1)` for chains, sorted by
    /// (generation of the first node, first node, second node).
    edges: Vec<(usize, usize)>,
}

pub const MAX_TREE_GENERATIONS: usize = 4;
pub const MAX_SITES: usize = 16;

impl Lattice {
    pub fn cayley_tree(generations: usize) -> Result<Self> {
        if !(1..=MAX_TREE_GENERATIONS).contains(&generations) {
            return Err(Error::InvalidArgument(format!(
                "tree generations must be in 1..={MAX_TREE_GENERATIONS}, got {generations}"
            )));
        }
        let n = (1usize << generations) - 1;
        let gens = (0..n).map(|k| (usize::BITS - 1 - (k + 1).leading_zeros()) as usize).collect();
        let edges = (1..n).map(|k| ((k - 1) / 2, k)).collect();
        Ok(Self::assemble(LatticeKind::CayleyTree, gens, edges))
    }

    pub fn linear_chain(n_sites: usize) -> Result<Self> {
        if !(1..=MAX_SITES).contains(&n_sites) {
            return Err(Error::InvalidArgument(format!("chain length must be in 1..={MAX_SITES}, got {n_sites}")));
        }
        let gens = (0..n_sites).map(|n| n % 2).collect();
        let edges = (1..n_sites).map(|k| (k - 1, k)).collect();
        Ok(Self::assemble(LatticeKind::LinearChain, gens, edges))
    }

    fn assemble(kind: LatticeKind, generations: Vec<usize>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_by_key(|&(a, b)| (generations[a], a, b));
        Self { kind, generations, edges }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn n_nodes(&self) -> usize {
        self.generations.len()
    }

    pub fn generation(&self, node: usize) -> usize {
        self.generations[node]
    }

    pub fn generations(&self) -> &[usize] {
        &self.generations
    }

    /// Number of distinct generation labels (tree depth for trees).
    pub fn n_generations(&self) -> usize {
        self.generations.iter().max().map_or(0, |g| g + 1)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == node {
                    Some(b)
                } else if b == node {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Hop counts from `source` to every node (`None` if unreachable).
    pub fn graph_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_nodes()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected with exactly `n - 1` edges, i.e. a single path between any
    /// two nodes.
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n_nodes() && self.graph_distances(0).iter().all(Option::is_some)
    }

    /// Plain-text edge list: `# kind: ...`, `# generations: l0 l1 ...`, then
    /// one `i j` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind {
            LatticeKind::CayleyTree => "cayley_tree",
            LatticeKind::LinearChain => "linear_chain",
        };
        let _ = writeln!(out, "# kind: {kind}");
        let gens: Vec<String> = self.generations.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(out, "# generations: {}", gens.join(" "));
        for (a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut gens: Option<Vec<usize>> = None;
        let mut edges = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let parse_err = |message: String| Error::Parse { line: k + 1, message };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(rest) = comment.strip_prefix("generations:") {
                    let g = rest
                        .split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|e| parse_err(e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    gens = Some(g);
                } else if let Some(rest) = comment.strip_prefix("kind:") {
                    kind = Some(match rest.trim() {
                        "cayley_tree" => LatticeKind::CayleyTree,
                        "linear_chain" => LatticeKind::LinearChain,
                        other => return Err(parse_err(format!("unknown lattice kind {other:?}"))),
                    });
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(format!("expected `i j`, found {line:?}")));
            }
            let a = fields[0].parse::<usize>().map_err(|e| parse_err(e.to_string()))?;
            let b = fields[1].parse::<usize>().map_err(|e| parse_err(e.to_string()))?;
            edges.push((a, b));
        }
        let gens = gens.ok_or(Error::Parse { line: 0, message: "missing `# generations:` header".into() })?;
        if edges.iter().any(|&(a, b)| a >= gens.len() || b >= gens.len() || a == b) {
            return Err(Error::Parse { line: 0, message: "edge endpoint out of range".into() });
        }
        let kind = kind.unwrap_or(LatticeKind::CayleyTree);
        Ok(Self::assemble(kind, gens, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_generation_tree() {
        let t = Lattice::cayley_tree(3).unwrap();
        assert_eq!(t.n_nodes(), 7);
        assert_eq!(t.edges(), &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]);
        assert_eq!(t.generations(), &[0, 1, 1, 2, 2, 2, 2]);
        assert!(t.is_tree());
    }

    #[test]
    fn tree_sizes() {
        let t1 = Lattice::cayley_tree(1).unwrap();
        assert_eq!((t1.n_nodes(), t1.edges().len()), (1, 0));
        let t4 = Lattice::cayley_tree(4).unwrap();
        assert_eq!((t4.n_nodes(), t4.edges().len()), (15, 14));
        for l in 0..4 {
            assert_eq!(t4.generations().iter().filter(|&&g| g == l).count(), 1 << l);
        }
        // every non-root node has exactly one edge to the previous generation
        for k in 1..15 {
            let up = t4.neighbors(k).into_iter().filter(|&p| t4.generation(p) + 1 == t4.generation(k)).count();
            assert_eq!(up, 1);
        }
        assert!(Lattice::cayley_tree(0).is_err());
        assert!(Lattice::cayley_tree(5).is_err());
    }

    #[test]
    fn chain_layout() {
        let c = Lattice::linear_chain(5).unwrap();
        assert_eq!(c.generations(), &[0, 1, 0, 1, 0]);
        assert_eq!(c.edges().len(), 4);
        assert!(c.edges().contains(&(2, 3)));
        assert!(c.is_tree());
    }

    #[test]
    fn distances_from_first_second_generation_spin() {
        let t = Lattice::cayley_tree(3).unwrap();
        let d = t.graph_distances(3);
        let got: Vec<usize> = [1, 0, 4, 2, 5, 6].iter().map(|&j| d[j].unwrap()).collect();
        assert_eq!(got, vec![1, 2, 2, 3, 4, 4]);
    }

    #[test]
    fn edge_list_round_trip() {
        for lat in [Lattice::cayley_tree(4).unwrap(), Lattice::linear_chain(6).unwrap()] {
            let text = lat.to_edge_list();
            assert!(text.lines().any(|l| l.starts_with("# generations:")));
            assert_eq!(Lattice::from_edge_list(&text).unwrap(), lat);
        }
        assert!(Lattice::from_edge_list("0 1\n").is_err());
        assert!(Lattice::from_edge_list("# generations: 0 1\n0 x\n").is_err());
    }
}
