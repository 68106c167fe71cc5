//! Simple undirected graphs on up to 24 vertices with bit-row adjacency.
//!
//! Vertex labels are dense integers `0..n`; anything with external labels lives
//! in the CLI layer. All operations are pure and values are immutable once
//! constructed, so everything here is safe to share across threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap so a neighborhood always fits one machine word and the exact
/// algorithms downstream stay at desk scale.
pub const MAX_VERTICES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unsupported vertex count {0} (supported range is 1..={MAX_VERTICES})")]
    UnsupportedSize(usize),
    #[error("operation would produce {0} vertices, over the cap {MAX_VERTICES}")]
    SizeOverflow(usize),
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("malformed graph6 input at byte {position}")]
    MalformedGraph6 { position: usize },
}

/// Simple undirected graph: `adj[i]` is the neighborhood of `i` as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::UnsupportedSize(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u != v {
                g.adj[u] |= 1 << v;
                g.adj[v] |= 1 << u;
            }
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| self.has_edge(u, v).then_some((u, v)))
        })
    }

    /// Mask with bits `0..n` set.
    pub fn full_mask(&self) -> u32 {
        if self.n == 32 { !0 } else { (1u32 << self.n) - 1 }
    }

    /// No two vertices of `set` adjacent.
    pub fn is_independent(&self, set: u32) -> bool {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.adj[v] & set != 0 {
                return false;
            }
        }
        true
    }

    /// All pairs of `set` adjacent.
    pub fn is_clique(&self, set: u32) -> bool {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.adj[v] & set != set & !(1 << v) {
                return false;
            }
        }
        true
    }

    pub fn complement(&self) -> Graph {
        let full = self.full_mask();
        let adj = (0..self.n)
            .map(|v| full & !self.adj[v] & !(1 << v))
            .collect();
        Graph { n: self.n, adj }
    }

    /// Induced subgraph on the vertices of `set`, relabeled to `0..|set|` in
    /// increasing original order.
    pub fn induced_subgraph(&self, set: u32) -> Result<Graph, GraphError> {
        let set = set & self.full_mask();
        if set == 0 {
            return Err(GraphError::EmptySet);
        }
        let verts: Vec<usize> = mask_vertices(set).collect();
        let mut g = Graph::empty(verts.len())?;
        for (a, &u) in verts.iter().enumerate() {
            for (b, &v) in verts.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.adj[a] |= 1 << b;
                    g.adj[b] |= 1 << a;
                }
            }
        }
        Ok(g)
    }

    pub fn remove_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        self.induced_subgraph(self.full_mask() & !(1 << v))
    }

    /// Fully connected disjoint union: every cross pair becomes an edge.
    pub fn join(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::SizeOverflow(n));
        }
        let mut g = self.disjoint_union(other)?;
        let left = (1u32 << self.n) - 1;
        let right = g.full_mask() & !left;
        for v in 0..self.n {
            g.adj[v] |= right;
        }
        for v in self.n..n {
            g.adj[v] |= left;
        }
        Ok(g)
    }

    /// Disjoint union with no cross edges.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::SizeOverflow(n));
        }
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|&row| row << self.n));
        Ok(Graph { n, adj })
    }

    /// Lexicographic product: `(u1, u2) ~ (v1, v2)` iff `u1 ~ v1`, or `u1 == v1`
    /// and `u2 ~ v2`. Vertex `(u1, u2)` gets index `u1 * other.n + u2`.
    pub fn lexicographic_product(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n * other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::SizeOverflow(n));
        }
        let mut g = Graph::empty(n)?;
        for u1 in 0..self.n {
            for u2 in 0..other.n {
                let a = u1 * other.n + u2;
                for v1 in 0..self.n {
                    for v2 in 0..other.n {
                        let b = v1 * other.n + v2;
                        if a < b
                            && (self.has_edge(u1, v1) || (u1 == v1 && other.has_edge(u2, v2)))
                        {
                            g.adj[a] |= 1 << b;
                            g.adj[b] |= 1 << a;
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Append a new vertex `v' = n` with `N(v') = N(v)` and no edge `{v, v'}`.
    pub fn copy_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.duplicate_vertex(v, false)
    }

    /// Append a new vertex `v' = n` with `N(v') = N(v) ∪ {v}`.
    pub fn split_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.duplicate_vertex(v, true)
    }

    fn duplicate_vertex(&self, v: usize, with_edge: bool) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let n = self.n + 1;
        if n > MAX_VERTICES {
            return Err(GraphError::SizeOverflow(n));
        }
        let mut adj = self.adj.clone();
        let mut row = self.adj[v];
        if with_edge {
            row |= 1 << v;
        }
        adj.push(row);
        for u in mask_vertices(row) {
            adj[u] |= 1 << self.n;
        }
        Ok(Graph { n, adj })
    }

    /// Connected components as vertex masks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<u32> {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for v in 0..self.n {
            if seen & (1 << v) != 0 {
                continue;
            }
            let mut comp = 1u32 << v;
            loop {
                let mut grown = comp;
                for u in mask_vertices(comp) {
                    grown |= self.adj[u];
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// First embedding (in lexicographic order over pattern-vertex images) of
    /// `pattern` as an induced subgraph of `self`, if any.
    pub fn find_induced_subgraph(&self, pattern: &Graph) -> Option<Vec<usize>> {
        if pattern.n > self.n {
            return None;
        }
        let mut map = Vec::with_capacity(pattern.n);
        let mut used = 0u32;
        if self.embed(pattern, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    fn embed(&self, pattern: &Graph, map: &mut Vec<usize>, used: &mut u32) -> bool {
        let k = map.len();
        if k == pattern.n {
            return true;
        }
        'cand: for u in 0..self.n {
            if *used & (1 << u) != 0 || self.degree(u) < pattern.degree(k) {
                continue;
            }
            for (j, &mj) in map.iter().enumerate() {
                if pattern.has_edge(j, k) != self.has_edge(mj, u) {
                    continue 'cand;
                }
            }
            map.push(u);
            *used |= 1 << u;
            if self.embed(pattern, map, used) {
                return true;
            }
            map.pop();
            *used &= !(1 << u);
        }
        false
    }

    /// Lexicographically first pair `(v, v')` with matching neighborhoods away
    /// from each other; `split` when the pair is itself an edge, `copy` otherwise.
    pub fn detect_twins(&self) -> Option<(usize, usize, TwinKind)> {
        for v in 0..self.n {
            for w in v + 1..self.n {
                let nv = self.adj[v] & !(1 << w);
                let nw = self.adj[w] & !(1 << v);
                if nv == nw {
                    let kind = if self.has_edge(v, w) { TwinKind::Split } else { TwinKind::Copy };
                    return Some((v, w, kind));
                }
            }
        }
        None
    }

    /// Decides vertex-transitivity by searching, for every target vertex, an
    /// automorphism sending vertex 0 there.
    pub fn is_vertex_transitive(&self) -> Result<bool, GraphError> {
        if self.n > 12 {
            return Err(GraphError::SizeOverflow(self.n));
        }
        for target in 1..self.n {
            if self.degree(target) != self.degree(0) {
                return Ok(false);
            }
            let mut map = vec![usize::MAX; self.n];
            map[0] = target;
            let mut used = 1u32 << target;
            if !self.automorphism_extend(&mut map, &mut used, 1) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn automorphism_extend(&self, map: &mut Vec<usize>, used: &mut u32, k: usize) -> bool {
        if k == self.n {
            return true;
        }
        'cand: for u in 0..self.n {
            if *used & (1 << u) != 0 || self.degree(u) != self.degree(k) {
                continue;
            }
            for j in 0..k {
                if self.has_edge(j, k) != self.has_edge(map[j], u) {
                    continue 'cand;
                }
            }
            map[k] = u;
            *used |= 1 << u;
            if self.automorphism_extend(map, used, k + 1) {
                return true;
            }
            map[k] = usize::MAX;
            *used &= !(1 << u);
        }
        false
    }

    /// graph6 line for this graph (no header, no trailing newline).
    pub fn to_graph6(&self) -> String {
        let mut bits = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for v in 1..self.n {
            for u in 0..v {
                bits.push(self.has_edge(u, v));
            }
        }
        let mut out = String::new();
        out.push((self.n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let mut b = 0u8;
            for (i, &bit) in chunk.iter().enumerate() {
                if bit {
                    b |= 1 << (5 - i);
                }
            }
            out.push((b + 63) as char);
        }
        out
    }

    /// Parses one graph6 line. Loop/digraph formats (`;`, `&` headers) and
    /// graphs over 24 vertices are rejected.
    pub fn from_graph6(line: &str) -> Result<Graph, GraphError> {
        let bytes = line.trim_end_matches(['\n', '\r']).as_bytes();
        if bytes.is_empty() {
            return Err(GraphError::MalformedGraph6 { position: 0 });
        }
        let bytes = if bytes.starts_with(b">>graph6<<") { &bytes[10..] } else { bytes };
        if bytes.is_empty() || bytes[0] == b';' || bytes[0] == b'&' {
            return Err(GraphError::MalformedGraph6 { position: 0 });
        }
        // 126 opens a multi-byte size; those are all > 62 vertices, over our cap.
        if bytes[0] == 126 {
            return Err(GraphError::UnsupportedSize(63));
        }
        if !(63..=126).contains(&bytes[0]) {
            return Err(GraphError::MalformedGraph6 { position: 0 });
        }
        let n = (bytes[0] - 63) as usize;
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::UnsupportedSize(n));
        }
        let nbits = n * (n - 1) / 2;
        let nbytes = nbits.div_ceil(6);
        if bytes.len() != 1 + nbytes {
            return Err(GraphError::MalformedGraph6 { position: bytes.len().min(1 + nbytes) });
        }
        let mut g = Graph::empty(n)?;
        let mut idx = 0usize;
        'outer: for v in 1..n {
            for u in 0..v {
                let byte = bytes[1 + idx / 6];
                if !(63..=126).contains(&byte) {
                    return Err(GraphError::MalformedGraph6 { position: 1 + idx / 6 });
                }
                if (byte - 63) >> (5 - idx % 6) & 1 == 1 {
                    g.adj[u] |= 1 << v;
                    g.adj[v] |= 1 << u;
                }
                idx += 1;
                if idx == nbits {
                    break 'outer;
                }
            }
        }
        // Padding bits past the triangle must be zero.
        for i in nbits..nbytes * 6 {
            let byte = bytes[1 + i / 6];
            if !(63..=126).contains(&byte) || (byte - 63) >> (5 - i % 6) & 1 == 1 {
                return Err(GraphError::MalformedGraph6 { position: 1 + i / 6 });
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwinKind {
    Copy,
    Split,
}

/// Iterate the vertices of a bitmask in increasing order.
pub fn mask_vertices(mask: u32) -> impl Iterator<Item = usize> {
    std::iter::successors(
        (mask != 0).then(|| mask.trailing_zeros() as usize),
        move |&v| {
            let rest = mask & !((2u32 << v) - 1);
            (rest != 0).then(|| rest.trailing_zeros() as usize)
        },
    )
}

/// Subsets of `mask` of size `k`, in lexicographic order of their bit patterns.
pub fn subsets_of_size(mask: u32, k: usize) -> Vec<u32> {
    let verts: Vec<usize> = mask_vertices(mask).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    fn rec(verts: &[usize], k: usize, start: usize, pick: &mut Vec<usize>, d: usize, out: &mut Vec<u32>) {
        if d == k {
            out.push(pick[..k].iter().fold(0u32, |m, &v| m | 1 << v));
            return;
        }
        for i in start..verts.len() {
            pick[d] = verts[i];
            rec(verts, k, i + 1, pick, d + 1, out);
        }
    }
    if k <= verts.len() {
        rec(&verts, k, 0, &mut pick, 0, &mut out);
    }
    out
}

pub mod fixtures {
    //! Named graphs used throughout: cycles, anticycles, cliques, the claw, and
    //! the two special graphs on 7 and 15 vertices. The 15-vertex one is the
    //! frustration graph of all nontrivial two-qubit Pauli strings and is built
    //! from those strings at every call, never from a hard-coded edge list.

    use super::{Graph, GraphError};
    use crate::gf2::{frustration_graph, PauliString};

    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        if n < 3 {
            return Err(GraphError::UnsupportedSize(n));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn anticycle(n: usize) -> Result<Graph, GraphError> {
        Ok(cycle(n)?.complement())
    }

    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }

    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        Graph::empty(n)
    }

    /// The claw K_{1,3}, center 0.
    pub fn claw() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    /// The 7-vertex graph whose only full-support facet is the all-ones vector;
    /// its standard realization is `ZII, XII, ZYI, YIZ, YXX, IZI, XXI` in vertex
    /// order, and the edge set below is the frustration graph of those strings.
    pub fn g7() -> Graph {
        Graph::from_edges(
            7,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0),
                (0, 3), (0, 4), (1, 3), (1, 4), (3, 6), (4, 6), (2, 5),
            ],
        )
        .unwrap()
    }

    /// The Pauli strings realizing [`g7`], in vertex order.
    pub fn g7_strings() -> Vec<PauliString> {
        ["ZII", "XII", "ZYI", "YIZ", "YXX", "IZI", "XXI"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    /// All 15 nontrivial two-qubit Pauli strings, ordered like base-4 numerals
    /// over the alphabet I < X < Y < Z.
    pub fn two_qubit_strings() -> Vec<PauliString> {
        let letters = ['I', 'X', 'Y', 'Z'];
        let mut out = Vec::with_capacity(15);
        for &a in &letters {
            for &b in &letters {
                if (a, b) != ('I', 'I') {
                    out.push(format!("{a}{b}").parse().unwrap());
                }
            }
        }
        out
    }

    /// Frustration graph of [`two_qubit_strings`].
    pub fn g15() -> Graph {
        frustration_graph(&two_qubit_strings()).unwrap()
    }

    /// Registry addressable by name: `cycle(5)`, `anticycle(7)`, `complete(3)`,
    /// `empty(4)`, `claw`, `g7`, `g15`.
    pub fn by_name(name: &str) -> Option<Graph> {
        let name = name.trim().to_ascii_lowercase();
        if let Some(rest) = name.strip_suffix(')') {
            let (kind, arg) = rest.split_once('(')?;
            let n: usize = arg.trim().parse().ok()?;
            return match kind.trim() {
                "cycle" => cycle(n).ok(),
                "anticycle" => anticycle(n).ok(),
                "complete" => complete(n).ok(),
                "empty" => empty(n).ok(),
                _ => None,
            };
        }
        match name.as_str() {
            "claw" => Some(claw()),
            "g7" => Some(g7()),
            "g15" => Some(g15()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    pub fn random_graph(n: usize, rng: &mut StdRng) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn graph6_star_example() {
        // Decoded by hand per the graph6 bit layout and cross-checked against an
        // independent decoder: D?{ is the star with center 4 on 5 vertices.
        let g = Graph::from_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(g.to_graph6(), "D?{");
    }

    #[test]
    fn graph6_single_vertex() {
        assert_eq!(Graph::empty(1).unwrap().to_graph6(), "@");
        assert_eq!(Graph::from_graph6("@").unwrap().n(), 1);
    }

    #[test]
    fn graph6_round_trip_fixtures_and_random() {
        let mut all = vec![claw(), g7(), g15()];
        for n in 3..=9 {
            all.push(cycle(n).unwrap());
            all.push(anticycle(n).unwrap());
            all.push(complete(n).unwrap());
            all.push(empty(n).unwrap());
        }
        let mut rng = StdRng::seed_from_u64(0x67726170);
        for _ in 0..1000 {
            let n = rng.random_range(1..=12);
            all.push(random_graph(n, &mut rng));
        }
        for g in all {
            let s = g.to_graph6();
            let h = Graph::from_graph6(&s).unwrap();
            assert_eq!(g, h);
            assert_eq!(h.to_graph6(), s);
        }
    }

    #[test]
    fn graph6_cross_check_against_independent_decoder() {
        let data = include_str!("../tests/data/codec_crosscheck.txt");
        for line in data.lines() {
            let mut parts = line.split(' ');
            let s = parts.next().unwrap();
            let n: usize = parts.next().unwrap().parse().unwrap();
            let edges: Vec<(usize, usize)> = parts
                .next()
                .unwrap_or("")
                .split(';')
                .filter(|e| !e.is_empty())
                .map(|e| {
                    let (u, v) = e.split_once(',').unwrap();
                    (u.parse().unwrap(), v.parse().unwrap())
                })
                .collect();
            let g = Graph::from_graph6(s).unwrap();
            assert_eq!(g, Graph::from_edges(n, &edges).unwrap(), "line {line}");
            assert_eq!(g.to_graph6(), s);
        }
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(matches!(
            Graph::from_graph6(""),
            Err(GraphError::MalformedGraph6 { .. })
        ));
        // Truncated edge bytes.
        assert!(Graph::from_graph6("D?").is_err());
        // Digraph6 / sparse6 headers.
        assert!(Graph::from_graph6("&D?{?").is_err());
        assert!(Graph::from_graph6(";D?{?").is_err());
        // 63-vertex size prefix.
        assert!(matches!(
            Graph::from_graph6("~??"),
            Err(GraphError::UnsupportedSize(_))
        ));
        // Nonzero padding bits.
        assert!(Graph::from_graph6("BW").is_ok());
        assert!(Graph::from_graph6("BC").is_err());
    }

    #[test]
    fn join_small_cases() {
        let k2 = empty(1).unwrap().join(&empty(1).unwrap()).unwrap();
        assert_eq!(k2, complete(2).unwrap());
        let wheel = complete(1).unwrap().join(&cycle(5).unwrap()).unwrap();
        assert_eq!(wheel.n(), 6);
        assert_eq!(wheel.degree(0), 5);
        assert_eq!(wheel.edge_count(), 10);
    }

    #[test]
    fn disjoint_union_small_cases() {
        assert_eq!(
            empty(2).unwrap().disjoint_union(&empty(3).unwrap()).unwrap(),
            empty(5).unwrap()
        );
        let two_c5 = cycle(5).unwrap().disjoint_union(&cycle(5).unwrap()).unwrap();
        assert_eq!(two_c5.n(), 10);
        assert_eq!(two_c5.edge_count(), 10);
        assert!(!two_c5.is_connected());
    }

    #[test]
    fn lexicographic_product_cases() {
        let k2 = complete(2).unwrap();
        assert_eq!(k2.lexicographic_product(&k2).unwrap(), complete(4).unwrap());

        // C5[empty(2)] is C5 with every vertex doubled by the copy operation.
        let lex = cycle(5).unwrap().lexicographic_product(&empty(2).unwrap()).unwrap();
        let mut copied = cycle(5).unwrap();
        for v in 0..5 {
            copied = copied.copy_vertex(v).unwrap();
        }
        // Relabel: copy_vertex appends copies at the end; in the product, vertex
        // (u, j) sits at 2u + j. Compare via an explicit isomorphism map.
        let to_lex = |v: usize| if v < 5 { 2 * v } else { 2 * (v - 5) + 1 };
        assert_eq!(lex.n(), copied.n());
        for u in 0..10 {
            for v in 0..10 {
                assert_eq!(copied.has_edge(u, v), lex.has_edge(to_lex(u), to_lex(v)));
            }
        }
    }

    #[test]
    fn copy_and_split_vertex() {
        let e2 = complete(1).unwrap().copy_vertex(0).unwrap();
        assert_eq!(e2, empty(2).unwrap());
        let split = cycle(5).unwrap().split_vertex(0).unwrap();
        assert_eq!(split.n(), 6);
        assert!(split.has_edge(0, 5));
        assert_eq!(split.neighbors(5) & !(1 << 0), split.neighbors(0) & !(1 << 5));
        assert!(matches!(
            cycle(5).unwrap().copy_vertex(7),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn complement_and_induced() {
        assert_eq!(cycle(7).unwrap().complement(), anticycle(7).unwrap());
        let g = g15();
        assert_eq!(g.induced_subgraph(g.full_mask()).unwrap(), g);
        assert!(matches!(g.induced_subgraph(0), Err(GraphError::EmptySet)));
    }

    #[test]
    fn induced_subgraph_search_cases() {
        let c7b = anticycle(7).unwrap();
        let id = c7b.find_induced_subgraph(&c7b).unwrap();
        assert_eq!(id, vec![0, 1, 2, 3, 4, 5, 6]);
        assert!(cycle(7).unwrap().find_induced_subgraph(&c7b).is_none());

        // Second smallest h-imperfect graph: C5 plus a center adjacent to 4 of
        // the 5 ring vertices. It embeds into the two-qubit string graph.
        let fig3b = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 4)],
        )
        .unwrap();
        let emb = g15().find_induced_subgraph(&fig3b).expect("embedding exists");
        for u in 0..6 {
            for v in 0..6 {
                assert_eq!(fig3b.has_edge(u, v), g15().has_edge(emb[u], emb[v]));
            }
        }
    }

    #[test]
    fn embedding_is_induced_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(0x656d62);
        for _ in 0..40 {
            let host = random_graph(rng.random_range(4..=8), &mut rng);
            let k = rng.random_range(2..=host.n());
            let mask = (0..host.n()).filter(|_| rng.random_bool(0.6)).fold(0u32, |m, v| m | 1 << v);
            let mask = if mask.count_ones() as usize >= k { mask } else { (1 << k) - 1 };
            let pattern = host.induced_subgraph(mask).unwrap();
            let emb = host.find_induced_subgraph(&pattern).expect("pattern came from host");
            for u in 0..pattern.n() {
                for v in 0..pattern.n() {
                    assert_eq!(pattern.has_edge(u, v), host.has_edge(emb[u], emb[v]));
                }
            }
        }
    }

    #[test]
    fn twin_detection() {
        let (v, w, kind) = complete(3).unwrap().detect_twins().unwrap();
        assert_eq!((v, w, kind), (0, 1, TwinKind::Split));
        assert!(cycle(5).unwrap().detect_twins().is_none());
        let copied = cycle(5).unwrap().copy_vertex(0).unwrap();
        assert_eq!(copied.detect_twins(), Some((0, 5, TwinKind::Copy)));
    }

    #[test]
    fn vertex_transitivity() {
        assert!(cycle(7).unwrap().is_vertex_transitive().unwrap());
        assert!(anticycle(7).unwrap().is_vertex_transitive().unwrap());
        assert!(!g7().is_vertex_transitive().unwrap());
        assert!(!claw().is_vertex_transitive().unwrap());
        assert!(complete(12).unwrap().is_vertex_transitive().unwrap());
    }

    #[test]
    fn fixture_registry() {
        assert_eq!(by_name("cycle(5)").unwrap(), cycle(5).unwrap());
        assert_eq!(by_name("G7").unwrap(), g7());
        assert_eq!(by_name("g15").unwrap().n(), 15);
        assert!(by_name("petersen").is_none());
    }
}
