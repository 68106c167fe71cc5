//! GF(2) linear algebra and the symplectic representation of Pauli strings.
//!
//! A Pauli string is stored sign-free as two bit vectors: qubit `q` carries
//! `I/X/Z/Y` for `(x, z) = (0,0)/(1,0)/(0,1)/(1,1)`. Two strings anticommute iff
//! the symplectic form `x_p·z_q + z_p·x_q` is odd, so the commutation structure
//! of a string set is exactly a graph, and conversely every graph is realizable
//! with strings of length `rank_F2(A)/2` via the symplectic canonical form of
//! its adjacency matrix.

use crate::graph::Graph;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("matrix is not alternating (symmetric with zero diagonal)")]
    NotAlternating,
    #[error("Pauli strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("dense rendering limited to 6 qubits, got {0}")]
    SizeOverflow(usize),
    #[error("invalid Pauli character {0:?} (expected I, X, Y or Z)")]
    BadCharacter(char),
    #[error("empty Pauli string")]
    EmptyString,
    #[error("strings do not realize the requested graph")]
    WrongFrustration,
}

/// Bit-packed matrix over GF(2); rows are `u32`, so at most 32 columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Gf2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= 32);
        Gf2Matrix { rows, cols, data: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_graph(g: &Graph) -> Self {
        Gf2Matrix {
            rows: g.n(),
            cols: g.n(),
            data: (0..g.n()).map(|v| g.neighbors(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn is_alternating(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| !self.get(i, i))
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Row-echelon rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && rows[r] >> col & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse over GF(2), if the matrix is nonsingular.
    pub fn inverse(&self) -> Option<Gf2Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Gf2Matrix::identity(n).data;
        for col in 0..n {
            let p = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(Gf2Matrix { rows: n, cols: n, data: inv })
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Gf2Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = 0u32;
            for k in 0..self.cols {
                if self.get(i, k) {
                    acc ^= other.data[k];
                }
            }
            out.data[i] = acc;
        }
        out
    }

    /// Column `j` as a bit vector packed into a `u32` (bit `i` = entry `(i, j)`).
    pub fn column(&self, j: usize) -> u32 {
        (0..self.rows).fold(0u32, |m, i| m | (u32::from(self.get(i, j)) << i))
    }
}

/// Congruence reduction of an alternating matrix to `⊕_k J ⊕ 0` with
/// `J = [[0,1],[1,0]]`: returns invertible `L` with `Lᵀ A L` in canonical form
/// and the number of blocks `k = rank/2`. Deterministic pivot choice (first
/// nonzero entry in row order), no randomization.
pub fn symplectic_canonical_form(a: &Gf2Matrix) -> Result<(Gf2Matrix, usize), Gf2Error> {
    if !a.is_alternating() {
        return Err(Gf2Error::NotAlternating);
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut l = Gf2Matrix::identity(n);
    // Column operation col_dst += col_src applied as a congruence (the row
    // operation is implied by keeping m symmetric explicitly).
    let add_col = |m: &mut Gf2Matrix, l: &mut Gf2Matrix, dst: usize, src: usize| {
        for i in 0..n {
            let v = m.get(i, dst) ^ m.get(i, src);
            m.set(i, dst, v);
        }
        for j in 0..n {
            let v = m.get(dst, j) ^ m.get(src, j);
            m.set(dst, j, v);
        }
        // The diagonal stays zero over GF(2): it picked up both updates.
        m.set(dst, dst, false);
        for i in 0..n {
            let v = l.get(i, dst) ^ l.get(i, src);
            l.set(i, dst, v);
        }
    };
    let swap_cols = |m: &mut Gf2Matrix, l: &mut Gf2Matrix, x: usize, y: usize| {
        if x == y {
            return;
        }
        for i in 0..n {
            let (vi, wi) = (m.get(i, x), m.get(i, y));
            m.set(i, x, wi);
            m.set(i, y, vi);
        }
        for j in 0..n {
            let (vj, wj) = (m.get(x, j), m.get(y, j));
            m.set(x, j, wj);
            m.set(y, j, vj);
        }
        for i in 0..n {
            let (vi, wi) = (l.get(i, x), l.get(i, y));
            l.set(i, x, wi);
            l.set(i, y, vi);
        }
    };
    let mut k = 0;
    loop {
        let a0 = 2 * k;
        // First nonzero entry in the untouched block.
        let pivot = (a0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| m.get(i, j));
        let Some((pi, pj)) = pivot else { break };
        swap_cols(&mut m, &mut l, a0, pi);
        let pj = if pj == a0 { pi } else { pj };
        swap_cols(&mut m, &mut l, a0 + 1, pj);
        for r in 0..n {
            if r == a0 || r == a0 + 1 {
                continue;
            }
            let (c1, c2) = (m.get(a0, r), m.get(a0 + 1, r));
            if c1 {
                add_col(&mut m, &mut l, r, a0 + 1);
            }
            if c2 {
                add_col(&mut m, &mut l, r, a0);
            }
        }
        k += 1;
    }
    debug_assert!(canonical_form_holds(a, &l, k));
    Ok((l, k))
}

/// Check `Lᵀ A L == ⊕_k J ⊕ 0`.
pub fn canonical_form_holds(a: &Gf2Matrix, l: &Gf2Matrix, k: usize) -> bool {
    let b = l.transpose().mul(a).mul(l);
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            let expect = i / 2 == j / 2 && i / 2 < k && i != j;
            if b.get(i, j) != expect {
                return false;
            }
        }
    }
    true
}

/// Sign-free Pauli string: qubit `q` is `I/X/Z/Y` for `(x, z)` bits
/// `(0,0)/(1,0)/(0,1)/(1,1)`. Phases never matter here — commutation,
/// expectations squared and eigenvalues ±1 are all phase-insensitive.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    len: usize,
    x_bits: u32,
    z_bits: u32,
}

impl PauliString {
    pub fn new(len: usize, x_bits: u32, z_bits: u32) -> Self {
        assert!(len >= 1 && len <= 32);
        let mask = if len == 32 { !0 } else { (1u32 << len) - 1 };
        PauliString { len, x_bits: x_bits & mask, z_bits: z_bits & mask }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use = "returns a lengthened copy"]
    pub fn padded(&self, len: usize) -> PauliString {
        assert!(len >= self.len);
        PauliString { len, ..*self }
    }

    pub fn x_bits(&self) -> u32 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u32 {
        self.z_bits
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Symplectic inner product `x_p·z_q ⊕ z_p·x_q`.
    pub fn anticommutes(&self, other: &PauliString) -> Result<bool, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch(self.len, other.len));
        }
        let s = (self.x_bits & other.z_bits).count_ones()
            + (self.z_bits & other.x_bits).count_ones();
        Ok(s % 2 == 1)
    }

    /// Kronecker product of the 2x2 factors; Hermitian and involutory. The
    /// overall phase is fixed by taking each Y factor literally.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>, Gf2Error> {
        if self.len > 6 {
            return Err(Gf2Error::SizeOverflow(self.len));
        }
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let factor = |x: bool, z: bool| match (x, z) {
            (false, false) => DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
            (true, false) => DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            (false, true) => DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
            (true, true) => DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        };
        let mut out = DMatrix::identity(1, 1);
        for q in 0..self.len {
            let f = factor(self.x_bits >> q & 1 == 1, self.z_bits >> q & 1 == 1);
            out = out.kronecker(&f);
        }
        Ok(out)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for q in 0..self.len {
            let ch = match (self.x_bits >> q & 1 == 1, self.z_bits >> q & 1 == 1) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliString {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Gf2Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Gf2Error::EmptyString);
        }
        if s.len() > 32 {
            return Err(Gf2Error::SizeOverflow(s.len()));
        }
        let (mut x, mut z) = (0u32, 0u32);
        for (q, ch) in s.chars().enumerate() {
            match ch.to_ascii_uppercase() {
                'I' | '1' => {}
                'X' => x |= 1 << q,
                'Z' => z |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                other => return Err(Gf2Error::BadCharacter(other)),
            }
        }
        Ok(PauliString::new(s.len(), x, z))
    }
}

/// Graph on the index set of `strings` with anticommutation edges.
pub fn frustration_graph(strings: &[PauliString]) -> Result<Graph, Gf2Error> {
    let Some(first) = strings.first() else {
        return Err(Gf2Error::EmptyString);
    };
    let n = strings.len();
    if n > crate::graph::MAX_VERTICES {
        return Err(Gf2Error::SizeOverflow(n));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if strings[i].len() != first.len() {
            return Err(Gf2Error::LengthMismatch(first.len(), strings[i].len()));
        }
        for j in i + 1..n {
            if strings[i].anticommutes(&strings[j])? {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("size checked"))
}

/// A set of equal-length Pauli strings together with the graph they realize;
/// the frustration graph is re-derived and checked at construction.
#[derive(Clone, Debug)]
pub struct Realization {
    strings: Vec<PauliString>,
    graph: Graph,
}

impl Realization {
    pub fn new(strings: Vec<PauliString>, graph: Graph) -> Result<Self, Gf2Error> {
        if frustration_graph(&strings)? != graph {
            return Err(Gf2Error::WrongFrustration);
        }
        Ok(Realization { strings, graph })
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn qubits(&self) -> usize {
        self.strings[0].len()
    }

    /// Same strings on `extra` additional identity qubits.
    pub fn padded(&self, extra: usize) -> Realization {
        let len = self.qubits() + extra;
        Realization {
            strings: self.strings.iter().map(|s| s.padded(len)).collect(),
            graph: self.graph.clone(),
        }
    }
}

/// Minimal-length realization of `g`: strings of length `rank_F2(A)/2`, with
/// vertex `p` reading qubit `i` off the canonical-form columns
/// `u_i = L^{-T} e_{2i-1}`, `v_i = L^{-T} e_{2i}`. Edgeless graphs have rank 0;
/// they get the floor length 1 with every string the same single-qubit Z so a
/// concrete operator exists downstream.
pub fn realize_min(g: &Graph) -> Realization {
    let a = Gf2Matrix::from_graph(g);
    let (l, k) = symplectic_canonical_form(&a).expect("adjacency is alternating");
    let n = g.n();
    if k == 0 {
        let strings = vec![PauliString::new(1, 0, 1); n];
        return Realization::new(strings, g.clone()).expect("commuting strings, empty graph");
    }
    let l_inv_t = l.inverse().expect("L invertible").transpose();
    let strings = (0..n)
        .map(|p| {
            let (mut x, mut z) = (0u32, 0u32);
            for i in 0..k {
                // Qubit i of vertex p: bits (u_i[p], v_i[p]).
                if l_inv_t.get(p, 2 * i) {
                    x |= 1 << i;
                }
                if l_inv_t.get(p, 2 * i + 1) {
                    z |= 1 << i;
                }
            }
            PauliString::new(k, x, z)
        })
        .collect();
    Realization::new(strings, g.clone()).expect("canonical form reproduces the adjacency")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn parse(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn rank_small_cases() {
        let k3 = Gf2Matrix::from_graph(&fixtures::complete(3).unwrap());
        assert_eq!(k3.rank(), 2);
        assert_eq!(Gf2Matrix::zero(4, 4).rank(), 0);
        assert_eq!(Gf2Matrix::identity(5).rank(), 5);
    }

    #[test]
    fn rank_is_even_for_alternating() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(1..=10);
            let mut m = Gf2Matrix::zero(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.5) {
                        m.set(i, j, true);
                        m.set(j, i, true);
                    }
                }
            }
            assert_eq!(m.rank() % 2, 0);
        }
    }

    #[test]
    fn complete_tripartite_rank_at_most_two() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..50 {
            let sizes = [rng.random_range(0..4), rng.random_range(0..4), rng.random_range(1..4)];
            let n: usize = sizes.iter().sum();
            let part = |v: usize| {
                if v < sizes[0] { 0 } else if v < sizes[0] + sizes[1] { 1 } else { 2 }
            };
            let mut m = Gf2Matrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    if i != j && part(i) != part(j) {
                        m.set(i, j, true);
                    }
                }
            }
            assert!(m.rank() <= 2);
        }
    }

    #[test]
    fn symplectic_form_reconstruction() {
        let k3 = Gf2Matrix::from_graph(&fixtures::complete(3).unwrap());
        let (l, k) = symplectic_canonical_form(&k3).unwrap();
        assert_eq!(k, 1);
        assert!(canonical_form_holds(&k3, &l, k));

        let z = Gf2Matrix::zero(4, 4);
        let (l, k) = symplectic_canonical_form(&z).unwrap();
        assert_eq!(k, 0);
        assert_eq!(l, Gf2Matrix::identity(4));

        let c5 = Gf2Matrix::from_graph(&fixtures::cycle(5).unwrap());
        let (l, k) = symplectic_canonical_form(&c5).unwrap();
        assert_eq!(k, c5.rank() / 2);
        assert!(canonical_form_holds(&c5, &l, k));

        let mut asym = Gf2Matrix::zero(2, 2);
        asym.set(0, 1, true);
        assert_eq!(symplectic_canonical_form(&asym), Err(Gf2Error::NotAlternating));
    }

    #[test]
    fn anticommutation_cases() {
        assert!(parse("X").anticommutes(&parse("Z")).unwrap());
        assert!(!parse("XX").anticommutes(&parse("YY")).unwrap());
        // Pairs read off the 9-string set on 4 qubits: YZYX/YYXX differ in two
        // anticommuting slots (no edge), YZYX/YXZZ in three (edge).
        assert!(!parse("YZYX").anticommutes(&parse("YYXX")).unwrap());
        assert!(parse("YZYX").anticommutes(&parse("YXZZ")).unwrap());
        assert!(parse("X").anticommutes(&parse("XX")).is_err());
    }

    #[test]
    fn frustration_graph_cases() {
        let xyz = vec![parse("X"), parse("Y"), parse("Z")];
        assert_eq!(frustration_graph(&xyz).unwrap(), fixtures::complete(3).unwrap());
        let iso = vec![parse("XXI"), parse("YYI"), parse("ZZZ")];
        assert_eq!(frustration_graph(&iso).unwrap(), fixtures::empty(3).unwrap());
    }

    /// The 9-string set on 4 qubits used for the golden beta bracket.
    pub fn g9_strings() -> Vec<PauliString> {
        ["XIII", "IXII", "IIXI", "ZIII", "IZII", "ZZZI", "YZYX", "YYXX", "YXZZ"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    #[test]
    fn g9_has_expected_shape() {
        let g = frustration_graph(&g9_strings()).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.edge_count(), 20);
        // Listed in the source as realizable on 4 qubits; minimal length agrees.
        assert_eq!(Gf2Matrix::from_graph(&g).rank(), 8);
    }

    #[test]
    fn g7_strings_realize_g7() {
        assert_eq!(
            frustration_graph(&fixtures::g7_strings()).unwrap(),
            fixtures::g7()
        );
    }

    #[test]
    fn realize_min_triangle_and_empty() {
        let r = realize_min(&fixtures::complete(3).unwrap());
        assert_eq!(r.qubits(), 1);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(r.strings()[i].anticommutes(&r.strings()[j]).unwrap());
            }
        }

        let e = realize_min(&fixtures::empty(4).unwrap());
        assert_eq!(e.qubits(), 1);
        for s in e.strings() {
            assert_eq!(s.to_string(), "Z");
        }
    }

    #[test]
    fn realize_min_g15_uses_two_qubits() {
        let g15 = fixtures::g15();
        assert_eq!(Gf2Matrix::from_graph(&g15).rank(), 4);
        let r = realize_min(&g15);
        assert_eq!(r.qubits(), 2);
        // 15 strings on 2 qubits realizing all anticommutation patterns must be
        // all nontrivial two-qubit strings up to symplectic relabeling.
        let distinct: std::collections::HashSet<_> =
            r.strings().iter().map(|s| (s.x_bits(), s.z_bits())).collect();
        assert_eq!(distinct.len(), 15);
        assert!(!r.strings().iter().any(|s| s.is_identity()));
    }

    #[test]
    fn realize_min_round_trip_random() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.random_range(1..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let r = realize_min(&g);
            let rank = Gf2Matrix::from_graph(&g).rank();
            assert_eq!(r.qubits(), (rank / 2).max(1));
            assert_eq!(frustration_graph(r.strings()).unwrap(), g);
        }
    }

    #[test]
    fn dense_rendering() {
        let x = parse("X").to_dense().unwrap();
        assert_eq!(x[(0, 1)], Complex64::new(1., 0.));
        assert_eq!(x[(1, 0)], Complex64::new(1., 0.));
        assert_eq!(x[(0, 0)], Complex64::new(0., 0.));

        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..30 {
            let len = rng.random_range(1..=4);
            let p = PauliString::new(len, rng.random::<u32>(), rng.random::<u32>());
            let d = p.to_dense().unwrap();
            let sq = &d * &d;
            let id = DMatrix::<Complex64>::identity(1 << len, 1 << len);
            assert!((sq - id).norm() < 1e-12);
        }
        assert!(parse("IIIIIII").to_dense().is_err());
    }

    #[test]
    fn dense_anticommutator_matches_symplectic() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let len = rng.random_range(1..=3);
            let p = PauliString::new(len, rng.random::<u32>(), rng.random::<u32>());
            let q = PauliString::new(len, rng.random::<u32>(), rng.random::<u32>());
            let (dp, dq) = (p.to_dense().unwrap(), q.to_dense().unwrap());
            let anti = &dp * &dq + &dq * &dp;
            assert_eq!(p.anticommutes(&q).unwrap(), anti.norm() < 1e-12);
        }
    }

    #[test]
    fn string_parsing_and_display() {
        assert_eq!(parse("IXYZ").to_string(), "IXYZ");
        assert!("".parse::<PauliString>().is_err());
        assert!("XQ".parse::<PauliString>().is_err());
    }
}
