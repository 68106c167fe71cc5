//! Exact combinatorics of the stable set polytope STAB(G).
//!
//! Vertices of STAB(G) are the incidence vectors of all independent sets; the
//! facet enumeration runs the double description method on the polar cone with
//! big-integer arithmetic, so the H-representation is exact and reproducible.

use crate::graph::{mask_vertices, subsets_of_size, Graph};
use crate::simplex::{self, Constraint, LpOutcome};
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    #[error("graph too large for exact enumeration ({0} vertices, cap {1})")]
    SizeOverflow(usize, usize),
    #[error("weights must be nonnegative")]
    NegativeWeight,
    #[error("point dimension {0} does not match polytope dimension {1}")]
    DimMismatch(usize, usize),
}

/// All independent sets of a graph, plus the inclusion-maximal ones.
#[derive(Clone, Debug)]
pub struct StableSetFamily {
    all: Vec<u32>,
    maximal: Vec<u32>,
}

impl StableSetFamily {
    /// Every independent set as a bitmask (the empty set included), and the
    /// maximal ones via pivoting clique enumeration on the complement.
    pub fn enumerate(g: &Graph) -> Result<Self, StabError> {
        if g.n() > crate::graph::MAX_VERTICES {
            return Err(StabError::SizeOverflow(g.n(), crate::graph::MAX_VERTICES));
        }
        let mut all = Vec::new();
        let mut stack = vec![(0u32, 0usize)];
        while let Some((set, next)) = stack.pop() {
            all.push(set);
            for v in next..g.n() {
                if g.neighbors(v) & set == 0 {
                    stack.push((set | 1 << v, v + 1));
                }
            }
        }
        all.sort_unstable();
        let maximal = maximal_cliques(&g.complement());
        Ok(StableSetFamily { all, maximal })
    }

    pub fn all(&self) -> &[u32] {
        &self.all
    }

    pub fn maximal(&self) -> &[u32] {
        &self.maximal
    }
}

/// Maximal cliques by Bron-Kerbosch with greedy pivoting, returned sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<u32> {
    fn expand(g: &Graph, r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        // Pivot with the most neighbors in p.
        let pivot = mask_vertices(p | x)
            .max_by_key(|&u| (g.neighbors(u) & p).count_ones())
            .expect("p | x nonempty");
        let candidates = p & !g.neighbors(pivot);
        for v in mask_vertices(candidates) {
            let nv = g.neighbors(v);
            expand(g, r | 1 << v, p & nv, x & nv, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    expand(g, 0, g.full_mask(), 0, &mut out);
    out.sort_unstable();
    out
}

/// Exact weighted independence number with one maximizer.
pub fn alpha(g: &Graph, w: &[Rational]) -> Result<(Rational, u32), StabError> {
    assert_eq!(w.len(), g.n(), "weight length must equal vertex count");
    if w.iter().any(|x| x.is_negative()) {
        return Err(StabError::NegativeWeight);
    }
    let family = StableSetFamily::enumerate(g)?;
    let mut best = (Rational::zero(), 0u32);
    for &set in family.maximal() {
        let value: Rational = mask_vertices(set).map(|v| w[v].clone()).sum();
        if value > best.0 {
            best = (value, set);
        }
    }
    Ok(best)
}

/// Unweighted independence number.
pub fn alpha_unweighted(g: &Graph) -> usize {
    StableSetFamily::enumerate(g)
        .expect("size-capped")
        .maximal()
        .iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// One closed halfspace `normal · x <= rhs` valid for STAB(G); the normal is
/// gcd-reduced with `rhs >= 0`. Nonnegativity facets appear as `-e_i · x <= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rhs: i64,
}

impl Facet {
    pub fn support(&self) -> u32 {
        self.normal
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(0u32, |m, (i, _)| m | 1 << i)
    }

    pub fn normal_rationals(&self) -> Vec<Rational> {
        self.normal.iter().map(|&c| Rational::from_integer(c.into())).collect()
    }

    pub fn value_at(&self, x: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(x)
            .map(|(&c, v)| Rational::from_integer(c.into()) * v)
            .sum()
    }

    pub fn is_nonnegativity(&self) -> bool {
        self.rhs == 0
            && self.normal.iter().filter(|&&c| c != 0).count() == 1
            && self.normal.iter().all(|&c| c == 0 || c == -1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FacetClass {
    Nonnegativity,
    Clique,
    /// Chordless induced odd cycle on `2a + 1` vertices with right-hand side `a`.
    OddHole(usize),
    Other,
}

/// Exact V- and H-representations of STAB(G).
#[derive(Clone, Debug)]
pub struct StabPolytope {
    graph: Graph,
    vertices: Vec<u32>,
    facets: Vec<Facet>,
}

/// Cap for exact double description.
pub const FACET_ENUM_MAX_N: usize = 10;

impl StabPolytope {
    /// Facet enumeration of STAB(G) by double description from the vertex set,
    /// inserting vertices in lexicographic bitmask order.
    pub fn of(g: &Graph) -> Result<Self, StabError> {
        if g.n() > FACET_ENUM_MAX_N {
            return Err(StabError::SizeOverflow(g.n(), FACET_ENUM_MAX_N));
        }
        let family = StableSetFamily::enumerate(g)?;
        let vertices = family.all().to_vec();
        let facets = facets_from_vertices(g.n(), &vertices);
        Ok(StabPolytope { graph: g.clone(), vertices, facets })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Incidence vectors of all independent sets.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facets that are neither nonnegativity nor clique constraints; only these
    /// need a numeric beta comparison.
    pub fn nontrivial_facets(&self) -> Vec<(Facet, FacetClass)> {
        self.classify()
            .into_iter()
            .zip(self.facets.iter())
            .filter(|(class, _)| !matches!(class, FacetClass::Nonnegativity | FacetClass::Clique))
            .map(|(class, facet)| (facet.clone(), class))
            .collect()
    }

    pub fn classify(&self) -> Vec<FacetClass> {
        self.facets.iter().map(|f| classify_facet(&self.graph, f)).collect()
    }

    pub fn is_h_perfect(&self) -> bool {
        !self.classify().iter().any(|c| matches!(c, FacetClass::Other))
    }

    /// Check every facet at `x`; reports violated facets with their slacks
    /// (negative slack = violation amount).
    pub fn point_membership(&self, x: &[Rational]) -> Result<Membership, StabError> {
        if x.len() != self.graph.n() {
            return Err(StabError::DimMismatch(x.len(), self.graph.n()));
        }
        let mut violated = Vec::new();
        for f in &self.facets {
            let slack = Rational::from_integer(f.rhs.into()) - f.value_at(x);
            if slack.is_negative() {
                violated.push((f.clone(), slack));
            }
        }
        Ok(Membership { inside: violated.is_empty(), violated })
    }

    /// Exact hull test used as the independent oracle for the facet list.
    pub fn contains_by_vertex_hull(&self, x: &[Rational]) -> bool {
        let pts: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|&m| {
                (0..self.graph.n())
                    .map(|v| {
                        if m >> v & 1 == 1 { Rational::one() } else { Rational::zero() }
                    })
                    .collect()
            })
            .collect();
        simplex::in_convex_hull(&pts, x)
    }
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub inside: bool,
    pub violated: Vec<(Facet, Rational)>,
}

pub fn classify_facet(g: &Graph, f: &Facet) -> FacetClass {
    if f.is_nonnegativity() {
        return FacetClass::Nonnegativity;
    }
    let support = f.support();
    let zero_one = f.normal.iter().all(|&c| c == 0 || c == 1);
    if zero_one && f.rhs == 1 && g.is_clique(support) {
        return FacetClass::Clique;
    }
    let k = support.count_ones() as usize;
    if zero_one && k >= 5 && k % 2 == 1 && f.rhs == (k as i64 - 1) / 2 && is_induced_cycle(g, support)
    {
        return FacetClass::OddHole((k - 1) / 2);
    }
    FacetClass::Other
}

/// Does `mask` induce a chordless cycle in `g`?
pub fn is_induced_cycle(g: &Graph, mask: u32) -> bool {
    let k = mask.count_ones() as usize;
    if k < 3 {
        return false;
    }
    let mut edges = 0;
    for v in mask_vertices(mask) {
        let deg = (g.neighbors(v) & mask).count_ones();
        if deg != 2 {
            return false;
        }
        edges += deg;
    }
    if edges / 2 != k as u32 {
        return false;
    }
    // Degree-2 everywhere with k edges is a disjoint union of cycles; connected
    // means a single cycle.
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u32 << start;
    loop {
        let mut grown = seen;
        for v in mask_vertices(seen) {
            grown |= g.neighbors(v) & mask;
        }
        if grown == seen {
            break;
        }
        seen = grown;
    }
    seen == mask
}

/// Strong-perfect-graph test by exhaustive odd-hole scan in the graph and its
/// complement (sizes 5, 7, 9 cover the n <= 10 cap).
pub fn is_perfect(g: &Graph) -> Result<bool, StabError> {
    if g.n() > FACET_ENUM_MAX_N {
        return Err(StabError::SizeOverflow(g.n(), FACET_ENUM_MAX_N));
    }
    let gc = g.complement();
    for k in [5usize, 7, 9] {
        if k > g.n() {
            break;
        }
        for mask in subsets_of_size(g.full_mask(), k) {
            if is_induced_cycle(g, mask) || is_induced_cycle(&gc, mask) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Fractional packing number: `max sum w` over `w >= 0` with `sum_{i in C} w_i <= 1`
/// for every maximal clique `C` of `g`. Exact rational simplex.
pub fn fractional_packing(g: &Graph) -> Result<Rational, StabError> {
    if g.n() > 12 {
        return Err(StabError::SizeOverflow(g.n(), 12));
    }
    let cliques = maximal_cliques(g);
    let constraints: Vec<Constraint> = cliques
        .iter()
        .map(|&c| {
            let coeffs = (0..g.n())
                .map(|v| if c >> v & 1 == 1 { Rational::one() } else { Rational::zero() })
                .collect();
            Constraint::new(coeffs, simplex::Cmp::Le, Rational::one())
        })
        .collect();
    let objective = vec![Rational::one(); g.n()];
    match simplex::maximize(&objective, &constraints) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => unreachable!("packing LP is feasible and bounded, got {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Double description on the polar cone.
//
// STAB(G) lifts to the cone over {(v, 1)}; its valid inequalities a·x <= b are
// the rays (-a, b) of the dual cone {y : <(v,1), y> >= 0 for all vertices v}.
// The initial simplicial cone comes from the empty set and the n singletons,
// whose dual basis is {e_1, ..., e_n, (-1, ..., -1, 1)}; the remaining vertex
// constraints are inserted one at a time.
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Ray {
    coords: Vec<BigInt>,
    /// Bit b set = constraint b is tight at this ray (among processed ones).
    tight: Vec<u64>,
}

impl Ray {
    fn reduce(&mut self) {
        let mut g = BigInt::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in self.coords.iter_mut() {
                *c /= &g;
            }
        }
    }
}

fn tight_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn facets_from_vertices(n: usize, vertices: &[u32]) -> Vec<Facet> {
    let dim = n + 1;
    // Constraint vectors (v, 1) in insertion order: singletons and the empty
    // set seed the cone, the rest follow in lexicographic bitmask order.
    let mut order: Vec<u32> = Vec::with_capacity(vertices.len());
    order.push(0);
    for v in 0..n {
        order.push(1 << v);
    }
    for &m in vertices {
        if m.count_ones() >= 2 {
            order.push(m);
        }
    }
    let constraint = |mask: u32| -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); dim];
        for v in mask_vertices(mask) {
            c[v] = BigInt::one();
        }
        c[n] = BigInt::one();
        c
    };
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let words = order.len().div_ceil(64);
    let mut rays: Vec<Ray> = Vec::new();
    // Dual basis of the n + 1 seed constraints.
    for j in 0..n {
        let mut coords = vec![BigInt::zero(); dim];
        coords[j] = BigInt::one();
        rays.push(Ray { coords, tight: vec![0; words] });
    }
    {
        let mut coords = vec![-BigInt::one(); dim];
        coords[n] = BigInt::one();
        rays.push(Ray { coords, tight: vec![0; words] });
    }
    for (b, &mask) in order.iter().enumerate().take(n + 1) {
        let c = constraint(mask);
        for ray in rays.iter_mut() {
            if dot(&c, &ray.coords).is_zero() {
                ray.tight[b / 64] |= 1 << (b % 64);
            }
        }
    }

    for (b, &mask) in order.iter().enumerate().skip(n + 1) {
        let c = constraint(mask);
        let values: Vec<BigInt> = rays.iter().map(|r| dot(&c, &r.coords)).collect();
        let mut keep: Vec<Ray> = Vec::new();
        let mut pos_idx = Vec::new();
        let mut neg_idx = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if v.is_zero() {
                let mut r = rays[i].clone();
                r.tight[b / 64] |= 1 << (b % 64);
                keep.push(r);
            } else if v.is_positive() {
                pos_idx.push(i);
            } else {
                neg_idx.push(i);
            }
        }
        if neg_idx.is_empty() {
            let mut next = Vec::with_capacity(keep.len() + pos_idx.len());
            next.extend(keep);
            next.extend(pos_idx.into_iter().map(|i| rays[i].clone()));
            rays = next;
            continue;
        }
        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos_idx {
            for &q in &neg_idx {
                // Combinatorial adjacency: no third ray is tight everywhere the
                // pair is jointly tight.
                let common: Vec<u64> = rays[p]
                    .tight
                    .iter()
                    .zip(&rays[q].tight)
                    .map(|(a, b)| a & b)
                    .collect();
                let adjacent = !rays.iter().enumerate().any(|(i, r)| {
                    i != p && i != q && tight_subset(&common, &r.tight)
                });
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (&values[p], &values[q]);
                let coords: Vec<BigInt> = rays[p]
                    .coords
                    .iter()
                    .zip(&rays[q].coords)
                    .map(|(cp, cq)| vp * cq - vq * cp)
                    .collect();
                let mut tight = common;
                tight[b / 64] |= 1 << (b % 64);
                let mut ray = Ray { coords, tight };
                ray.reduce();
                created.push(ray);
            }
        }
        let mut next = keep;
        next.extend(pos_idx.into_iter().map(|i| rays[i].clone()));
        next.extend(created);
        rays = next;
    }

    let mut facets: Vec<Facet> = rays
        .into_iter()
        .filter_map(|r| {
            let normal: Vec<i64> = r.coords[..n]
                .iter()
                .map(|c| -c.to_i64().expect("facet coefficients fit i64"))
                .collect();
            let rhs = r.coords[n].to_i64().expect("facet rhs fits i64");
            // The trivial ray 0·x <= 1 is not a facet.
            normal.iter().any(|&c| c != 0).then_some(Facet { normal, rhs })
        })
        .collect();
    facets.sort_by(|a, b| (&a.normal, a.rhs).cmp(&(&b.normal, b.rhs)));
    facets
}
