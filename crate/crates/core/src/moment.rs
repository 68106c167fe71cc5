//! State-polynomial moment hierarchy for upper bounds on beta(G, w).
//!
//! Vertices become letters with `x_i^2 = 1`, anticommuting exactly along edges.
//! A basis of state monomials `u_0 <u_1> ... <u_s>` indexes a moment matrix
//! `[M]_{u,v} = <u* v>`; entries whose reduced symbols coincide are tied
//! together, symbols odd under word reversal are pinned to zero, and `[M]_{1,1}`
//! is pinned to one. Maximizing `sum_i w_i <x_i>^2` over PSD completions is an
//! SDP solved here by operator splitting: alternate the closed-form projection
//! onto the affine class structure with a PSD cone projection.
//!
//! The same machinery yields the Lovasz number, the shadow-tomography
//! refinement `omega_r` via the dual trace form, and variance minimization
//! under caps. Moment solutions can be rounded back to concrete states for
//! warm-starting the see-saw.

use crate::beta::BetaError;
use crate::gf2::Realization;
use crate::graph::Graph;
use crate::linalg::{self, CMatrix, CVector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("basis too large for graph on {0} vertices (cap {1})")]
    SizeOverflow(usize, usize),
    #[error("solver stalled: primal residual {primal:.3e}, dual residual {dual:.3e}")]
    SolverStalled { primal: f64, dual: f64 },
    #[error("constraints are infeasible at this level (residual {residual:.3e})")]
    Infeasible { residual: f64 },
    #[error("no sign pattern reproduced the targets (best residual {best_residual:.3e})")]
    NoGoodSign { best_residual: f64 },
    #[error("cap values must lie in [0, 1]")]
    BadCaps,
    #[error(transparent)]
    Beta(#[from] BetaError),
}

/// Monomial bases of increasing strength. `A` is the Lovasz-type degree-2
/// truncation; `B` adds two-body pseudo-expectations; `C` adds the degree-3
/// block and is off by default in the decision pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisLevel {
    A,
    B,
    C,
}

impl std::fmt::Display for BasisLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisLevel::A => write!(f, "A"),
            BasisLevel::B => write!(f, "B"),
            BasisLevel::C => write!(f, "C"),
        }
    }
}

/// Reduce a letter sequence to the normal form `± x_{i_1} ... x_{i_t}` with
/// strictly ascending indices: adjacent (in G) letters flip the sign per
/// transposition, repeated letters cancel.
pub fn normal_form(letters: &[u8], g: &Graph) -> (i8, Vec<u8>) {
    let mut out: Vec<u8> = Vec::with_capacity(letters.len());
    let mut sign = 1i8;
    for &l in letters {
        let mut pos = out.len();
        while pos > 0 && out[pos - 1] > l {
            if g.has_edge(out[pos - 1] as usize, l as usize) {
                sign = -sign;
            }
            pos -= 1;
        }
        if pos > 0 && out[pos - 1] == l {
            out.remove(pos - 1);
        } else {
            out.insert(pos, l);
        }
    }
    (sign, out)
}

/// Sign picked up by reversing an ascending word: parity of adjacent pairs
/// inside it. Words with negative reversal sign have pseudo-expectation zero.
fn reversal_sign(word: &[u8], g: &Graph) -> i8 {
    let mut edges = 0usize;
    for (a, &u) in word.iter().enumerate() {
        for &v in &word[a + 1..] {
            if g.has_edge(u as usize, v as usize) {
                edges += 1;
            }
        }
    }
    if edges % 2 == 0 {
        1
    } else {
        -1
    }
}

/// State monomial `word * prod_k <scalars_k>`; the word and every scalar are
/// ascending index lists, scalars sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateMonomial {
    pub word: Vec<u8>,
    pub scalars: Vec<Vec<u8>>,
}

impl StateMonomial {
    fn one() -> Self {
        StateMonomial { word: vec![], scalars: vec![] }
    }

    fn new(word: Vec<u8>, mut scalars: Vec<Vec<u8>>) -> Self {
        scalars.sort();
        StateMonomial { word, scalars }
    }

    /// Rendering like `x1<x2><x1x2>` (letters are 1-based in the output).
    pub fn label(&self) -> String {
        let word = |w: &[u8]| w.iter().map(|&i| format!("x{}", i + 1)).collect::<String>();
        if self.word.is_empty() && self.scalars.is_empty() {
            return "1".to_string();
        }
        let mut s = word(&self.word);
        for f in &self.scalars {
            s.push('<');
            s.push_str(&word(f));
            s.push('>');
        }
        s
    }
}

/// Basis of state monomials at the given level.
pub fn build_basis(g: &Graph, level: BasisLevel) -> Result<Vec<StateMonomial>, MomentError> {
    let n = g.n();
    if n > 12 {
        return Err(MomentError::SizeOverflow(n, 12));
    }
    let v = |i: usize| i as u8;
    let mut basis = vec![StateMonomial::one()];
    for i in 0..n {
        basis.push(StateMonomial::new(vec![v(i)], vec![vec![v(i)]]));
    }
    if level == BasisLevel::A {
        return Ok(basis);
    }
    for i in 0..n {
        for j in i + 1..n {
            basis.push(StateMonomial::new(vec![v(i), v(j)], vec![vec![v(i)], vec![v(j)]]));
        }
    }
    // <x_i x_j> vanishes identically for adjacent pairs, so only the
    // commuting (non-edge) pairs enter.
    for i in 0..n {
        for j in 0..n {
            if i != j && !g.has_edge(i, j) {
                let pair = vec![v(i.min(j)), v(i.max(j))];
                basis.push(StateMonomial::new(vec![v(i)], vec![vec![v(j)], pair]));
            }
        }
    }
    if level == BasisLevel::B {
        return Ok(basis);
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                basis.push(StateMonomial::new(
                    vec![v(i), v(j), v(k)],
                    vec![vec![v(i)], vec![v(j)], vec![v(k)]],
                ));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let pair = vec![v(i), v(j)];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                // Representative up to sign: the sorted word.
                let (_, word) = normal_form(&[v(i), v(j), v(k)], g);
                basis.push(StateMonomial::new(word, vec![pair.clone(), vec![v(k)]]));
                basis.push(StateMonomial::new(
                    vec![v(k)],
                    vec![pair.clone(), vec![v(i)], vec![v(j)]],
                ));
            }
            // x_i x_k <x_i x_j><x_j><x_k> and its mirror in j.
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                for (a, b) in [(i, j), (j, i)] {
                    let (_, word) = normal_form(&[v(a), v(k)], g);
                    if word.len() == 2 {
                        basis.push(StateMonomial::new(
                            word,
                            vec![pair.clone(), vec![v(b)], vec![v(k)]],
                        ));
                    }
                }
            }
        }
    }
    basis.sort();
    basis.dedup();
    Ok(basis)
}

/// Symbolic value of a pseudo-expectation product: sign, sorted factor words,
/// and whether some factor is forced to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub sign: i8,
    pub factors: Vec<Vec<u8>>,
    pub zero: bool,
}

/// Reduced symbol of `<u* v>`.
pub fn entry_symbol(u: &StateMonomial, v: &StateMonomial, g: &Graph) -> Symbol {
    let mut seq: Vec<u8> = u.word.iter().rev().cloned().collect();
    seq.extend_from_slice(&v.word);
    let (sign, word) = normal_form(&seq, g);
    let mut factors: Vec<Vec<u8>> = Vec::with_capacity(u.scalars.len() + v.scalars.len() + 1);
    factors.extend(u.scalars.iter().cloned());
    factors.extend(v.scalars.iter().cloned());
    if !word.is_empty() {
        factors.push(word);
    }
    factors.sort();
    let zero = factors.iter().any(|f| reversal_sign(f, g) < 0);
    Symbol { sign, factors, zero }
}

/// How a tied group of matrix cells is constrained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupRule {
    PinOne,
    PinZero,
    Free,
    /// Class value at least this bound (variance caps).
    AtLeast(f64),
}

#[derive(Debug, Clone)]
pub struct CellGroup {
    /// `(row, col, sign)`; every cell of the matrix belongs to exactly one group.
    pub cells: Vec<(usize, usize, f64)>,
    pub rule: GroupRule,
}

/// Assembled moment SDP data: basis, tied cell groups, and for each vertex the
/// group holding `<x_i>^2`.
pub struct MomentProblem {
    pub basis: Vec<StateMonomial>,
    pub groups: Vec<CellGroup>,
    pub objective_groups: Vec<usize>,
    /// Position of `x_i<x_i>` in the basis, per vertex.
    pub xi_positions: Vec<usize>,
}

impl MomentProblem {
    pub fn build(g: &Graph, level: BasisLevel) -> Result<Self, MomentError> {
        Self::from_basis(g, build_basis(g, level)?)
    }

    /// Assemble the moment SDP over an explicit monomial basis. Any basis
    /// containing `1` and all `x_i<x_i>` yields a sound upper bound.
    pub fn from_basis(g: &Graph, basis: Vec<StateMonomial>) -> Result<Self, MomentError> {
        let size = basis.len();
        let mut keys: HashMap<Vec<Vec<u8>>, usize> = HashMap::new();
        let mut groups: Vec<CellGroup> = Vec::new();
        let mut zero_group: Option<usize> = None;
        for i in 0..size {
            for j in i..size {
                let sym = entry_symbol(&basis[i], &basis[j], g);
                let gid = if sym.zero {
                    *zero_group.get_or_insert_with(|| {
                        groups.push(CellGroup { cells: vec![], rule: GroupRule::PinZero });
                        groups.len() - 1
                    })
                } else if sym.factors.is_empty() {
                    *keys.entry(vec![]).or_insert_with(|| {
                        groups.push(CellGroup { cells: vec![], rule: GroupRule::PinOne });
                        groups.len() - 1
                    })
                } else {
                    *keys.entry(sym.factors.clone()).or_insert_with(|| {
                        groups.push(CellGroup { cells: vec![], rule: GroupRule::Free });
                        groups.len() - 1
                    })
                };
                groups[gid].cells.push((i, j, sym.sign as f64));
                if i != j {
                    groups[gid].cells.push((j, i, sym.sign as f64));
                }
            }
        }
        let objective_groups = (0..g.n())
            .map(|i| {
                let key = vec![vec![i as u8], vec![i as u8]];
                *keys.get(&key).expect("basis contains x_i<x_i>")
            })
            .collect();
        let xi_positions = (0..g.n())
            .map(|i| {
                let want = StateMonomial { word: vec![i as u8], scalars: vec![vec![i as u8]] };
                basis.iter().position(|m| *m == want).expect("basis contains x_i<x_i>")
            })
            .collect();
        Ok(MomentProblem { basis, groups, objective_groups, xi_positions })
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Projection onto the affine class structure (exact: groups partition the
    /// cells, so the per-group projections are orthogonal).
    pub fn project_affine(&self, m: &mut DMatrix<f64>) {
        for group in &self.groups {
            match group.rule {
                GroupRule::PinZero => {
                    for &(i, j, _) in &group.cells {
                        m[(i, j)] = 0.0;
                    }
                }
                GroupRule::PinOne => {
                    for &(i, j, s) in &group.cells {
                        m[(i, j)] = s;
                    }
                }
                GroupRule::Free | GroupRule::AtLeast(_) => {
                    let mut mean = 0.0;
                    for &(i, j, s) in &group.cells {
                        mean += s * m[(i, j)];
                    }
                    mean /= group.cells.len() as f64;
                    if let GroupRule::AtLeast(b) = group.rule {
                        mean = mean.max(b);
                    }
                    for &(i, j, s) in &group.cells {
                        m[(i, j)] = s * mean;
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// First-order conic solver.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    /// Over-relaxation factor.
    pub alpha: f64,
    /// Initial penalty.
    pub rho: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-7, max_iters: 200_000, alpha: 1.7, rho: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub value: f64,
    pub matrix: DMatrix<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub min_eigenvalue: f64,
    pub converged: bool,
}

impl SdpSolution {
    /// Error out unless the solver met its residual targets.
    pub fn require_converged(self) -> Result<SdpSolution, MomentError> {
        if self.converged {
            Ok(self)
        } else {
            Err(MomentError::SolverStalled {
                primal: self.primal_residual,
                dual: self.dual_residual,
            })
        }
    }
}

/// Maximize `<C, X>` over `X in affine-set ∩ PSD` by over-relaxed ADMM with an
/// adaptive penalty. The affine projection must be exact. A warm start should
/// be a feasible (or nearly feasible) point.
pub fn admm_maximize(
    size: usize,
    c: &DMatrix<f64>,
    project_affine: &dyn Fn(&mut DMatrix<f64>),
    config: &SolverConfig,
    warm: Option<&DMatrix<f64>>,
) -> SdpSolution {
    let alpha = config.alpha;
    let mut rho = config.rho;
    let mut x = DMatrix::<f64>::zeros(size, size);
    let mut z = warm.cloned().unwrap_or_else(|| DMatrix::<f64>::zeros(size, size));
    let mut u = DMatrix::<f64>::zeros(size, size);
    let mut last_primal = f64::INFINITY;
    let mut last_dual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        iterations += 1;
        // X-step: affine projection of Z - U + C/rho.
        x.copy_from(&z);
        x -= &u;
        x += c * (1.0 / rho);
        project_affine(&mut x);
        // Z-step with over-relaxation.
        let x_hat = &x * alpha + &z * (1.0 - alpha);
        let z_old = z.clone();
        let (znew, _) = linalg::psd_project(&(&x_hat + &u));
        z = znew;
        u += &x_hat - &z;

        if iterations % 25 == 0 || iterations < 5 {
            last_primal = (&x - &z).norm();
            last_dual = rho * (&z - &z_old).norm();
            // Absolute primal tolerance: lambda_min(X) >= -|X - Z|, so this is
            // what backs the PSD certificate on the affine-exact iterate.
            let eps_pri = 0.5 * config.tol;
            let eps_dual = config.tol * (1.0 + rho * u.norm());
            if last_primal < eps_pri && last_dual < eps_dual {
                converged = true;
                break;
            }
            // Penalty balancing.
            if iterations % 50 == 0 {
                if last_primal > 5.0 * last_dual && rho < 1e4 {
                    rho *= 1.5;
                    u /= 1.5;
                } else if last_dual > 5.0 * last_primal && rho > 1e-4 {
                    rho /= 1.5;
                    u *= 1.5;
                }
            }
        }
    }
    // Evaluate on the affine-exact iterate.
    let value = c.dot(&x);
    let min_eig = x
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    SdpSolution {
        value,
        matrix: x,
        primal_residual: last_primal,
        dual_residual: last_dual,
        iterations,
        min_eigenvalue: min_eig,
        converged,
    }
}

/// Level-`level` upper bound on beta(G, w).
pub fn lambda_r(
    g: &Graph,
    w: &[f64],
    level: BasisLevel,
    config: &SolverConfig,
) -> Result<SdpSolution, MomentError> {
    let problem = MomentProblem::build(g, level)?;
    // Warm start at the moment matrix of the best cheap see-saw state, pulled
    // slightly into the interior by mixing with the maximally mixed state.
    let warm = {
        let r = crate::gf2::realize_min(g);
        let ops = crate::beta::dense_strings(&r)?;
        let opts = crate::beta::SeeSawOptions {
            restarts: 2,
            max_iter: 150,
            ..Default::default()
        };
        match crate::beta::seesaw(&r, w, None, &opts) {
            Ok(out) => {
                let dim = ops[0].nrows();
                let mixed = CMatrix::identity(dim, dim) * Complex64::new(0.05 / dim as f64, 0.0)
                    + &out.state * out.state.adjoint() * Complex64::new(0.95, 0.0);
                Some(physical_moment_matrix(&problem, &ops, &mixed))
            }
            Err(_) => None,
        }
    };
    let size = problem.size();
    let mut c = DMatrix::<f64>::zeros(size, size);
    for (i, &wi) in w.iter().enumerate() {
        let pos = problem.xi_positions[i];
        c[(0, pos)] += wi / 2.0;
        c[(pos, 0)] += wi / 2.0;
    }
    Ok(admm_maximize(size, &c, &|m| problem.project_affine(m), config, warm.as_ref()))
}

/// Pseudo-expectation assignment of an actual density matrix: the value of a
/// word is `Re tr(rho * S_{i_1} ... S_{i_t})`, monomials multiply. Always a
/// feasible point of the moment SDP, used to warm-start the solver.
pub fn physical_moment_matrix(
    problem: &MomentProblem,
    ops: &[CMatrix],
    rho: &CMatrix,
) -> DMatrix<f64> {
    let dim = ops[0].nrows();
    let mut cache: HashMap<Vec<u8>, f64> = HashMap::new();
    let mut word_val = |w: &[u8]| -> f64 {
        if let Some(&v) = cache.get(w) {
            return v;
        }
        let mut prod = CMatrix::identity(dim, dim);
        for &l in w {
            prod *= &ops[l as usize];
        }
        let v = (rho * prod).trace().re;
        cache.insert(w.to_vec(), v);
        v
    };
    let n = problem.basis.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let u = &problem.basis[i];
            let v = &problem.basis[j];
            let mut seq: Vec<u8> = u.word.iter().rev().cloned().collect();
            seq.extend_from_slice(&v.word);
            let mut val = word_val(&seq);
            for f in u.scalars.iter().chain(v.scalars.iter()) {
                val *= word_val(f);
            }
            m[(i, j)] = val;
            m[(j, i)] = val;
        }
    }
    m
}

/// Squared-expectation targets `<x_i>^2` read off a moment solution (row of
/// the empty word against `x_i <x_i>`).
pub fn squared_targets(problem: &MomentProblem, solution: &SdpSolution) -> Vec<f64> {
    problem
        .xi_positions
        .iter()
        .map(|&pos| solution.matrix[(0, pos)].clamp(0.0, 1.0))
        .collect()
}

/// Weighted Lovasz number: `max sum_{ij} sqrt(w_i w_j) X_ij` with unit trace,
/// `X_ij = 0` on edges, `X ⪰ 0`.
pub fn lovasz_theta(g: &Graph, w: &[f64], config: &SolverConfig) -> Result<SdpSolution, MomentError> {
    let n = g.n();
    if n > 12 {
        return Err(MomentError::SizeOverflow(n, 12));
    }
    let c = DMatrix::<f64>::from_fn(n, n, |i, j| (w[i] * w[j]).sqrt());
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let project = move |m: &mut DMatrix<f64>| {
        // Symmetrize, zero out edge entries, shift the diagonal to unit trace.
        for i in 0..n {
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)]) / 2.0;
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        for &(i, j) in &edges {
            m[(i, j)] = 0.0;
            m[(j, i)] = 0.0;
        }
        let shift = (1.0 - m.trace()) / n as f64;
        for i in 0..n {
            m[(i, i)] += shift;
        }
    };
    Ok(admm_maximize(n, &c, &project, config, None))
}

/// Shadow-tomography refinement: `omega_r = max sum_i w_i` subject to
/// `lambda_r(G, w) <= 1`, `w >= 0`, solved in the dual trace form over the
/// moment-matrix cone. Returns `omega` in `value`; `1/omega` refines the upper
/// bound on the sample-complexity parameter.
pub fn omega_r(g: &Graph, level: BasisLevel, config: &SolverConfig) -> Result<SdpSolution, MomentError> {
    let problem = MomentProblem::build(g, level)?;
    let size = problem.size();
    // Frobenius norms of the class indicator matrices.
    let norms: Vec<f64> = problem.groups.iter().map(|gr| gr.cells.len() as f64).collect();
    let objective_set: Vec<usize> = problem.objective_groups.clone();
    let mut c = DMatrix::<f64>::zeros(size, size);
    for &gid in &objective_set {
        for &(i, j, s) in &problem.groups[gid].cells {
            c[(i, j)] -= s;
        }
    }
    let is_objective = {
        let mut v = vec![false; problem.groups.len()];
        for &gid in &objective_set {
            v[gid] = true;
        }
        v
    };
    let groups = problem.groups.clone();
    let project = move |m: &mut DMatrix<f64>| {
        for (gid, group) in groups.iter().enumerate() {
            match group.rule {
                GroupRule::PinZero => {
                    // No constraint on the dual at zero-pinned cells.
                }
                GroupRule::PinOne => {
                    // <A0, Z> <= 1.
                    let mut t = 0.0;
                    for &(i, j, s) in &group.cells {
                        t += s * m[(i, j)];
                    }
                    if t > 1.0 {
                        let excess = (t - 1.0) / norms[gid];
                        for &(i, j, s) in &group.cells {
                            m[(i, j)] -= s * excess;
                        }
                    }
                }
                GroupRule::Free | GroupRule::AtLeast(_) => {
                    let mut t = 0.0;
                    for &(i, j, s) in &group.cells {
                        t += s * m[(i, j)];
                    }
                    // Objective classes: <A_i, Z> <= 0; others: = 0.
                    let target = if is_objective[gid] { t.min(0.0) } else { 0.0 };
                    let excess = (t - target) / norms[gid];
                    if excess != 0.0 {
                        for &(i, j, s) in &group.cells {
                            m[(i, j)] -= s * excess;
                        }
                    }
                }
            }
        }
    };
    Ok(admm_maximize(size, &c, &project, config, None))
}

/// Variance floor for `S_i` given caps `1 - <x_j>^2 <= c_j` on the others:
/// minimizes `1 - <x_i>^2` over the level's moment cone. The returned
/// `value` is the variance bound.
pub fn uncertainty_sdp(
    g: &Graph,
    target: usize,
    caps: &[(usize, f64)],
    level: BasisLevel,
    config: &SolverConfig,
) -> Result<SdpSolution, MomentError> {
    if caps.iter().any(|&(_, c)| !(0.0..=1.0).contains(&c)) {
        return Err(MomentError::BadCaps);
    }
    let mut problem = MomentProblem::build(g, level)?;
    for &(j, cap) in caps {
        assert!(j < g.n() && j != target, "cap on the target or out of range");
        let gid = problem.objective_groups[j];
        problem.groups[gid].rule = GroupRule::AtLeast(1.0 - cap);
    }
    let size = problem.size();
    let pos = problem.xi_positions[target];
    let mut c = DMatrix::<f64>::zeros(size, size);
    c[(0, pos)] = 0.5;
    c[(pos, 0)] = 0.5;
    let mut solution = admm_maximize(size, &c, &|m| problem.project_affine(m), config, None);
    if !solution.converged && solution.primal_residual > 1e-3 {
        return Err(MomentError::Infeasible { residual: solution.primal_residual });
    }
    solution.value = 1.0 - solution.value;
    Ok(solution)
}

// ---------------------------------------------------------------------------
// Approximate state extraction.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ExtractConfig {
    /// Residual below which a sign pattern is accepted immediately.
    pub accept: f64,
    /// Residual above which the result is an error.
    pub reject: f64,
    pub coarse_iters: usize,
    pub refine_iters: usize,
    pub keep_for_refine: usize,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            accept: 1e-10,
            reject: 1e-3,
            coarse_iters: 80,
            refine_iters: 600,
            keep_for_refine: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtractedState {
    pub state: CVector,
    pub residual: f64,
    pub signs: Vec<f64>,
}

/// Recover a pure state whose expectations match `targets` (given as squared
/// expectations) for some sign pattern: minimize
/// `sum_i (tr(rho S_i) - a_i sqrt(t_i))^2` over density matrices by projected
/// gradient, trying hinted sign vectors first and falling back to full
/// traversal for n <= 12.
pub fn extract_state(
    r: &Realization,
    targets: &[f64],
    sign_hints: &[Vec<f64>],
    config: &ExtractConfig,
) -> Result<ExtractedState, MomentError> {
    let ops = crate::beta::dense_strings(r)?;
    let n = ops.len();
    assert_eq!(targets.len(), n);
    let dim = ops[0].nrows();
    let roots: Vec<f64> = targets.iter().map(|&t| t.max(0.0).sqrt()).collect();

    let mut candidates: Vec<Vec<f64>> = sign_hints
        .iter()
        .map(|h| h.iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect())
        .collect();
    if n <= 12 {
        for bits in 0u32..(1 << n) {
            candidates
                .push((0..n).map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 }).collect());
        }
    }
    candidates.dedup();

    let descend = |signs: &[f64], iters: usize, start: Option<CMatrix>| -> (CMatrix, f64) {
        let goals: Vec<f64> = signs.iter().zip(&roots).map(|(s, r)| s * r).collect();
        let mut rho = start.unwrap_or_else(|| {
            CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0)
        });
        let residual = |rho: &CMatrix| -> f64 {
            ops.iter()
                .zip(&goals)
                .map(|(s, &y)| {
                    let e = (s * rho).trace().re;
                    (e - y) * (e - y)
                })
                .sum()
        };
        let mut f = residual(&rho);
        let mut step = 0.5 / n as f64;
        for _ in 0..iters {
            let mut grad = CMatrix::zeros(dim, dim);
            for (s, &y) in ops.iter().zip(&goals) {
                let e = (s * &rho).trace().re;
                grad += s * Complex64::new(2.0 * (e - y), 0.0);
            }
            let mut improved = false;
            for _ in 0..30 {
                let cand = linalg::density_project(&(&rho - &grad * Complex64::new(step, 0.0)));
                let fc = residual(&cand);
                if fc < f - 1e-16 {
                    rho = cand;
                    f = fc;
                    improved = true;
                    step *= 1.3;
                    break;
                }
                step *= 0.5;
            }
            if !improved || f < 1e-22 {
                break;
            }
        }
        (rho, f)
    };

    let mut coarse: Vec<(f64, Vec<f64>, CMatrix)> = Vec::new();
    for signs in &candidates {
        let (rho, f) = descend(signs, config.coarse_iters, None);
        if f < config.accept * config.accept {
            return Ok(finish(rho, f, signs.clone()));
        }
        coarse.push((f, signs.clone(), rho));
    }
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0));
    coarse.truncate(config.keep_for_refine.max(1));
    let mut best: Option<(f64, Vec<f64>, CMatrix)> = None;
    for (_, signs, rho) in coarse {
        let (rho, f) = descend(&signs, config.refine_iters, Some(rho));
        if best.as_ref().is_none_or(|b| f < b.0) {
            best = Some((f, signs, rho));
        }
    }
    let (f, signs, rho) = best.expect("at least one candidate");
    let residual = f.sqrt();
    if residual > config.reject {
        return Err(MomentError::NoGoodSign { best_residual: residual });
    }
    Ok(finish(rho, f, signs))
}

fn finish(rho: CMatrix, f: f64, signs: Vec<f64>) -> ExtractedState {
    let (_, top) = linalg::top_eigenpair(&rho);
    ExtractedState { state: top, residual: f.sqrt(), signs }
}
