//! Numerical brackets for the weighted beta number.
//!
//! Lower bounds come from a see-saw between a direction vector `b` and the top
//! eigenvector of `sum_i b_i sqrt(w_i) S_i`; every iterate evaluates a genuine
//! quantum state, so any reported value is a certified lower bound. Upper
//! bounds come from the symmetric-subspace relaxation: the largest eigenvalue
//! of `sum_i w_i S_i ⊗ S_i ⊗ 1^m` compressed to the Bose-symmetric subspace of
//! `m + 2` copies, computed in the occupation-number basis as a second
//! quantized two-body operator. The distance of that eigenvalue to the beta
//! number is at most `4 |w|_1 d / (m + 2)`.

use crate::gf2::{realize_min, Realization};
use crate::graph::Graph;
use crate::linalg::{self, CMatrix, CVector};
use crate::stab;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BetaError {
    #[error("all weights are zero")]
    DegenerateWeights,
    #[error("weights must be nonnegative")]
    NegativeWeight,
    #[error("dense see-saw limited to 6 qubits, realization has {0}")]
    TooManyQubits(usize),
    #[error("symmetric-subspace budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("graph is not certified hbar-perfect")]
    NotCertified,
    #[error("invalid parameter: {0}")]
    DomainError(String),
}

/// Where each side of a bracket came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSource {
    SeeSaw,
    DeFinetti { m: usize },
    Sdp { level: crate::moment::BasisLevel },
    ExactAlpha,
    /// `sum_i w_i`, the bound from `<S_i>^2 <= 1` alone.
    TrivialSum,
}

/// Certified interval for beta(G, w) with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BetaBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_src: BoundSource,
    pub upper_src: BoundSource,
}

#[derive(Debug, Clone)]
pub struct SeeSawOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    /// Also start from a stabilizer-like state of a maximum independent set,
    /// which pins the result at alpha(G, w) or better.
    pub alpha_start: bool,
}

impl Default for SeeSawOptions {
    fn default() -> Self {
        SeeSawOptions { restarts: 10, max_iter: 500, tol: 1e-10, seed: 0x5ee5a17, alpha_start: true }
    }
}

#[derive(Debug, Clone)]
pub struct SeeSawResult {
    pub value: f64,
    pub state: CVector,
    pub direction: Vec<f64>,
    pub iterations: usize,
    pub restarts_used: usize,
    pub seed: u64,
}

fn check_weights(w: &[f64]) -> Result<(), BetaError> {
    if w.iter().any(|&x| x < 0.0) {
        return Err(BetaError::NegativeWeight);
    }
    if w.iter().all(|&x| x == 0.0) {
        return Err(BetaError::DegenerateWeights);
    }
    Ok(())
}

pub fn dense_strings(r: &Realization) -> Result<Vec<CMatrix>, BetaError> {
    if r.qubits() > 6 {
        return Err(BetaError::TooManyQubits(r.qubits()));
    }
    Ok(r.strings().iter().map(|s| s.to_dense().expect("length checked")).collect())
}

/// Common eigenstate (eigenvalues ±1) of the commuting strings indexed by
/// `set`, built by sequential projection from a fixed reference vector.
pub fn independent_set_state(ops: &[CMatrix], set: u32, dim: usize) -> CVector {
    let mut rng = StdRng::seed_from_u64(0xa1fa);
    let mut psi = linalg::random_unit_state(dim, &mut rng);
    for v in crate::graph::mask_vertices(set) {
        let plus = (&ops[v] * &psi) + &psi;
        psi = if plus.norm() > 1e-8 { plus } else { &psi - &(&ops[v] * &psi) };
        let n = psi.norm();
        psi /= Complex64::new(n, 0.0);
    }
    psi
}

/// Alternating maximization of `sum_i w_i <S_i>^2`. Each iterate is monotone
/// nondecreasing; the best state over all starts is returned.
pub fn seesaw(
    r: &Realization,
    w: &[f64],
    init: Option<&CVector>,
    opts: &SeeSawOptions,
) -> Result<SeeSawResult, BetaError> {
    check_weights(w)?;
    assert_eq!(w.len(), r.strings().len());
    let ops = dense_strings(r)?;
    let dim = 1usize << r.qubits();
    let sqrt_w: Vec<f64> = w.iter().map(|&x| x.sqrt()).collect();

    let mut starts: Vec<CVector> = Vec::new();
    if let Some(psi) = init {
        assert_eq!(psi.len(), dim, "init state dimension mismatch");
        starts.push(psi.clone());
    }
    if opts.alpha_start {
        let wq: Vec<crate::Rational> = w
            .iter()
            .map(|&x| crate::Rational::from_float(x).unwrap_or_default())
            .collect();
        if let Ok((_, set)) = stab::alpha(r.graph(), &wq) {
            starts.push(independent_set_state(&ops, set, dim));
        }
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        starts.push(linalg::random_unit_state(dim, &mut rng));
    }

    let mut best: Option<SeeSawResult> = None;
    let mut total_iters = 0usize;
    for start in starts.iter() {
        let mut psi = start.clone();
        let mut value = objective(&ops, w, &psi);
        let mut direction = vec![0.0; w.len()];
        for _ in 0..opts.max_iter {
            total_iters += 1;
            // b <- normalized (sqrt(w_i) <S_i>).
            let exps: Vec<f64> = ops.iter().map(|s| linalg::expectation(s, &psi)).collect();
            let mut b: Vec<f64> = exps.iter().zip(&sqrt_w).map(|(e, s)| e * s).collect();
            let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-300 {
                for x in b.iter_mut() {
                    *x = 1.0;
                }
            } else {
                for x in b.iter_mut() {
                    *x /= norm;
                }
            }
            // psi <- top eigenvector of sum_i b_i sqrt(w_i) S_i.
            let mut h = CMatrix::zeros(dim, dim);
            for ((op, &bi), &si) in ops.iter().zip(&b).zip(&sqrt_w) {
                h += op * Complex64::new(bi * si, 0.0);
            }
            let (_, top) = linalg::top_eigenpair(&h);
            psi = top;
            let next = objective(&ops, w, &psi);
            direction = b;
            if (next - value).abs() < opts.tol {
                value = next;
                break;
            }
            value = next;
        }
        let better = best.as_ref().is_none_or(|b| value > b.value);
        if better {
            best = Some(SeeSawResult {
                value,
                state: psi,
                direction,
                iterations: 0,
                restarts_used: 0,
                seed: opts.seed,
            });
        }
    }
    let mut out = best.expect("at least one start");
    out.iterations = total_iters;
    out.restarts_used = starts.len();
    Ok(out)
}

pub fn objective(ops: &[CMatrix], w: &[f64], psi: &CVector) -> f64 {
    ops.iter()
        .zip(w)
        .map(|(s, &wi)| {
            let e = linalg::expectation(s, psi);
            wi * e * e
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Bose-symmetric subspace machinery.
// ---------------------------------------------------------------------------

/// Occupation-number basis of the Bose-symmetric subspace of `copies` local
/// systems of dimension `d`; dimension `C(copies + d - 1, d - 1)`.
#[derive(Debug, Clone)]
pub struct BoseBasis {
    d: usize,
    copies: usize,
    states: Vec<Vec<u32>>,
}

impl BoseBasis {
    pub fn new(d: usize, copies: usize) -> Self {
        assert!(d >= 1 && copies >= 1);
        let mut states = Vec::new();
        let mut cur = vec![0u32; d];
        gen_states(d, copies as u32, 0, &mut cur, &mut states);
        // Order by colex rank of the stars-and-bars encoding so index lookups
        // are rank computations.
        states.sort_by_key(|s| rank(s));
        debug_assert!(states.iter().enumerate().all(|(i, s)| rank(s) == i));
        BoseBasis { d, copies, states }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn index_of(&self, state: &[u32]) -> usize {
        rank(state)
    }

    pub fn expected_dim(d: usize, copies: usize) -> usize {
        binomial(copies + d - 1, d - 1)
    }
}

fn gen_states(d: usize, total: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos == d - 1 {
        cur[pos] = total;
        out.push(cur.clone());
        return;
    }
    for k in 0..=total {
        cur[pos] = k;
        gen_states(d, total - k, pos + 1, cur, out);
    }
}

/// Colex rank of the stars-and-bars encoding of an occupation vector.
fn rank(state: &[u32]) -> usize {
    let d = state.len();
    let mut acc = 0u32;
    let mut r = 0usize;
    for j in 0..d - 1 {
        acc += state[j];
        let bar = acc as usize + j;
        r += binomial(bar, j + 1);
    }
    r
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out as usize
}

/// Two-body coefficient table `T[(p,q),(r,s)] = sum_i w_i S_i[p,r] S_i[q,s]`
/// stored as nonzero `(p, q, value)` lists per `(r, s)`. All entries are real
/// because each `S ⊗ S` is.
struct TwoBody {
    d: usize,
    entries: Vec<Vec<(usize, usize, f64)>>,
}

impl TwoBody {
    fn build(ops: &[CMatrix], w: &[f64]) -> Self {
        let d = ops[0].nrows();
        let mut maps: Vec<HashMap<(usize, usize), f64>> = vec![HashMap::new(); d * d];
        for (op, &wi) in ops.iter().zip(w) {
            if wi == 0.0 {
                continue;
            }
            for r in 0..d {
                for p in 0..d {
                    let a = op[(p, r)];
                    if a.norm_sqr() < 1e-24 {
                        continue;
                    }
                    for s in 0..d {
                        for q in 0..d {
                            let b = op[(q, s)];
                            if b.norm_sqr() < 1e-24 {
                                continue;
                            }
                            let val = wi * (a * b).re;
                            *maps[r * d + s].entry((p, q)).or_insert(0.0) += val;
                        }
                    }
                }
            }
        }
        let entries = maps
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, usize, f64)> = m
                    .into_iter()
                    .filter(|(_, t)| t.abs() > 1e-15)
                    .map(|((p, q), t)| (p, q, t))
                    .collect();
                v.sort_by_key(|&(p, q, _)| (p, q));
                v
            })
            .collect();
        TwoBody { d, entries }
    }

    /// `out = (1/2) sum_{pqrs} T a_p† a_q† a_s a_r |x>` on the occupation basis.
    fn apply(&self, basis: &BoseBasis, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let d = self.d;
        let mut scratch: Vec<u32> = vec![0; d];
        for (idx, occ) in basis.states().iter().enumerate() {
            let amp = x[idx];
            if amp == 0.0 {
                continue;
            }
            for r in 0..d {
                if occ[r] == 0 {
                    continue;
                }
                for s in 0..d {
                    if occ[s] == 0 || (r == s && occ[s] < 2) {
                        continue;
                    }
                    let ns = occ[s] - u32::from(r == s);
                    let down = (occ[r] as f64 * ns as f64).sqrt();
                    scratch.copy_from_slice(occ);
                    scratch[r] -= 1;
                    scratch[s] -= 1;
                    for &(p, q, t) in &self.entries[r * d + s] {
                        let up = ((scratch[q] + 1) as f64
                            * (scratch[p] + 1 + u32::from(p == q)) as f64)
                            .sqrt();
                        scratch[q] += 1;
                        scratch[p] += 1;
                        let j = basis.index_of(&scratch);
                        out[j] += 0.5 * t * down * up * amp;
                        scratch[p] -= 1;
                        scratch[q] -= 1;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct DefinettiBudget {
    /// Local dimension cap (2^l); the moment hierarchy covers longer strings.
    pub max_d: usize,
    /// Cap on the symmetric-subspace dimension.
    pub max_dim: usize,
}

impl Default for DefinettiBudget {
    fn default() -> Self {
        DefinettiBudget { max_d: 4, max_dim: 2_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct DeFinettiResult {
    pub m: usize,
    pub d: usize,
    /// Largest eigenvalue of the compressed two-copy operator; a valid upper
    /// bound on beta(G, w) on its own.
    pub lambda_max: f64,
    /// Guaranteed distance to beta(G, w): `4 |w|_1 d / (m + 2)`.
    pub rigorous_error: f64,
    pub lanczos_iterations: usize,
    symmetric_vector: Vec<f64>,
    basis: BoseBasis,
}

impl DeFinettiResult {
    pub fn upper_bound(&self) -> f64 {
        self.lambda_max
    }
}

/// Level-`m` symmetric-subspace upper bound on beta(G, w).
pub fn definetti_upper(
    r: &Realization,
    w: &[f64],
    m: usize,
    budget: &DefinettiBudget,
) -> Result<DeFinettiResult, BetaError> {
    check_weights(w)?;
    let d = 1usize << r.qubits();
    if d > budget.max_d {
        return Err(BetaError::BudgetExceeded(format!(
            "local dimension {d} over cap {}",
            budget.max_d
        )));
    }
    let copies = m + 2;
    let dim = BoseBasis::expected_dim(d, copies);
    if dim > budget.max_dim {
        return Err(BetaError::BudgetExceeded(format!(
            "symmetric subspace dimension {dim} over cap {}",
            budget.max_dim
        )));
    }
    let ops = dense_strings(r)?;
    let basis = BoseBasis::new(d, copies);
    debug_assert_eq!(basis.dim(), dim);
    let two_body = TwoBody::build(&ops, w);
    let pairs = (copies * (copies - 1) / 2) as f64;
    let (lam, vector, iters) =
        linalg::lanczos_top(dim, |x, out| two_body.apply(&basis, x, out), None, 1e-10, 200);
    let norm_w: f64 = w.iter().sum();
    Ok(DeFinettiResult {
        m,
        d,
        lambda_max: lam / pairs,
        rigorous_error: 4.0 * norm_w * d as f64 / (m + 2) as f64,
        lanczos_iterations: iters,
        symmetric_vector: vector,
        basis,
    })
}

/// Top eigenvector of the single-copy reduced density matrix of the symmetric
/// eigenvector: the warm start for the see-saw.
pub fn warm_start_state(dfr: &DeFinettiResult) -> CVector {
    let d = dfr.d;
    let copies = dfr.basis.copies() as f64;
    let v = &dfr.symmetric_vector;
    let mut rho = DMatrix::<f64>::zeros(d, d);
    let mut scratch = vec![0u32; d];
    for (idx, occ) in dfr.basis.states().iter().enumerate() {
        if v[idx] == 0.0 {
            continue;
        }
        for p in 0..d {
            if occ[p] == 0 {
                continue;
            }
            for q in 0..d {
                // <v| a_q† a_p |v> term: |occ> -> |occ - e_p + e_q>.
                let factor = (occ[p] as f64 * (occ[q] + 1 - u32::from(p == q)) as f64).sqrt();
                scratch.copy_from_slice(occ);
                scratch[p] -= 1;
                scratch[q] += 1;
                let j = dfr.basis.index_of(&scratch);
                rho[(q, p)] += v[j] * v[idx] * factor / copies;
            }
        }
    }
    let sym = (&rho + rho.transpose()) * 0.5;
    let se = sym.symmetric_eigen();
    let (top, _) = se
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("d >= 1");
    CVector::from_iterator(d, se.eigenvectors.column(top).iter().map(|&x| Complex64::new(x, 0.0)))
}

// ---------------------------------------------------------------------------
// Generalized beta: projected gradient ascent of sum_i w_i |<S_i>|^k.
// ---------------------------------------------------------------------------

/// Lower bound on beta(G, w, k) by Riemannian gradient ascent over the pure
/// state sphere with normalization retraction and Armijo steps.
pub fn generalized_beta_lower(
    r: &Realization,
    w: &[f64],
    k: u32,
    restarts: usize,
    seed: u64,
) -> Result<f64, BetaError> {
    check_weights(w)?;
    if k < 2 {
        return Err(BetaError::DomainError("exponent k must be at least 2".into()));
    }
    if r.qubits() > 5 {
        return Err(BetaError::TooManyQubits(r.qubits()));
    }
    let ops = dense_strings(r)?;
    let dim = 1usize << r.qubits();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;

    // High exponents flatten the landscape, so each run follows a continuation
    // path k' = 2, 4, 8, ... up to k, reusing the previous optimizer.
    let mut schedule = vec![2u32];
    while *schedule.last().unwrap() < k {
        schedule.push((schedule.last().unwrap() * 2).min(k));
    }

    let mut starts: Vec<CVector> = Vec::new();
    {
        let wq: Vec<crate::Rational> = w
            .iter()
            .map(|&x| crate::Rational::from_float(x).unwrap_or_default())
            .collect();
        if let Ok((_, set)) = stab::alpha(r.graph(), &wq) {
            starts.push(independent_set_state(&ops, set, dim));
        }
    }
    for _ in 0..restarts.max(1) {
        starts.push(linalg::random_unit_state(dim, &mut rng));
    }

    for start in starts {
        let mut psi = start;
        for &kk in &schedule {
            let value = |p: &CVector| generalized_objective(&ops, w, kk, p);
            let mut f = value(&psi);
            for _ in 0..2000 {
                let grad = generalized_gradient(&ops, w, kk, &psi);
                let gnorm = grad.norm();
                if gnorm < 1e-12 {
                    break;
                }
                let mut step = 1.0 / (1.0 + gnorm);
                let mut advanced = false;
                for _ in 0..40 {
                    let mut cand = &psi + &grad * Complex64::new(step, 0.0);
                    let n = cand.norm();
                    cand /= Complex64::new(n, 0.0);
                    let fc = value(&cand);
                    if fc >= f + 1e-4 * step * gnorm * gnorm {
                        psi = cand;
                        f = fc;
                        advanced = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !advanced {
                    break;
                }
            }
            if kk == k {
                best = best.max(f);
            }
        }
    }
    Ok(best)
}

pub(crate) fn generalized_objective(ops: &[CMatrix], w: &[f64], k: u32, psi: &CVector) -> f64 {
    ops.iter()
        .zip(w)
        .map(|(s, &wi)| wi * linalg::expectation(s, psi).abs().powi(k as i32))
        .sum()
}

/// Riemannian gradient at a unit state (already tangent).
pub(crate) fn generalized_gradient(ops: &[CMatrix], w: &[f64], k: u32, psi: &CVector) -> CVector {
    let dim = psi.len();
    let mut grad = CVector::zeros(dim);
    for (s, &wi) in ops.iter().zip(w) {
        let e = linalg::expectation(s, psi);
        if e == 0.0 {
            continue;
        }
        let coeff = 2.0 * wi * k as f64 * e.abs().powi(k as i32 - 1) * e.signum();
        grad += (s * psi - psi * Complex64::new(e, 0.0)) * Complex64::new(coeff, 0.0);
    }
    grad
}

// ---------------------------------------------------------------------------
// Bracket assembly.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BracketBudget {
    pub seesaw: SeeSawOptions,
    /// Symmetric-subspace level attempted when the local dimension fits.
    pub definetti_m: usize,
    pub definetti: DefinettiBudget,
    /// Moment-hierarchy levels tried in order.
    pub sdp_levels: Vec<crate::moment::BasisLevel>,
    pub sdp: crate::moment::SolverConfig,
    pub extract: crate::moment::ExtractConfig,
}

impl Default for BracketBudget {
    fn default() -> Self {
        BracketBudget {
            seesaw: SeeSawOptions::default(),
            definetti_m: 16,
            definetti: DefinettiBudget::default(),
            sdp_levels: vec![crate::moment::BasisLevel::A, crate::moment::BasisLevel::B],
            sdp: crate::moment::SolverConfig::default(),
            extract: crate::moment::ExtractConfig { reject: f64::INFINITY, ..Default::default() },
        }
    }
}

/// Bracket beta(G, w) between the best warm-started see-saw value and the
/// smallest available upper bound (symmetric-subspace or moment hierarchy).
pub fn beta_bracket(g: &Graph, w: &[f64], budget: &BracketBudget) -> Result<BetaBracket, BetaError> {
    check_weights(w)?;
    let r = realize_min(g);
    let mut warm_states: Vec<CVector> = Vec::new();
    let mut uppers: Vec<(f64, BoundSource)> = Vec::new();

    // A first see-saw pass for sign hints and a baseline lower bound.
    let first = seesaw(&r, w, None, &budget.seesaw)?;
    let ops = dense_strings(&r)?;
    let first_signs: Vec<f64> =
        ops.iter().map(|s| linalg::expectation(s, &first.state).signum()).collect();

    if let Ok(dfr) = definetti_upper(&r, w, budget.definetti_m, &budget.definetti) {
        warm_states.push(warm_start_state(&dfr));
        uppers.push((dfr.lambda_max, BoundSource::DeFinetti { m: dfr.m }));
    }
    for &level in &budget.sdp_levels {
        let Ok(problem) = crate::moment::MomentProblem::build(g, level) else { continue };
        let Ok(sol) = crate::moment::lambda_r(g, w, level, &budget.sdp) else { continue };
        // Non-converged values are still recorded, flagged by their residuals
        // upstream; the facet loop re-checks convergence before trusting them.
        let targets = crate::moment::squared_targets(&problem, &sol);
        uppers.push((sol.value, BoundSource::Sdp { level }));
        if let Ok(extracted) = crate::moment::extract_state(&r, &targets, &[first_signs.clone()], &budget.extract) {
            warm_states.push(extracted.state);
        }
    }

    let mut best_lower = (first.value, first.state);
    for state in &warm_states {
        let opts = SeeSawOptions {
            restarts: 0,
            alpha_start: false,
            ..budget.seesaw.clone()
        };
        if let Ok(out) = seesaw(&r, w, Some(state), &opts) {
            if out.value > best_lower.0 {
                best_lower = (out.value, out.state);
            }
        }
    }

    // The weighted sum itself bounds beta from above when no solver applied.
    let trivial: f64 = w.iter().sum();
    let (upper, upper_src) = uppers
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((trivial, BoundSource::TrivialSum));
    Ok(BetaBracket { lower: best_lower.0, upper, lower_src: BoundSource::SeeSaw, upper_src })
}

// ---------------------------------------------------------------------------
// Qubit budgets and exact alpha through the hierarchy.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitBudget {
    /// Qubits per copy, `log2(n/c) / 2` (fractional; round up to allocate).
    pub l: f64,
    /// Hierarchy level `ceil(ln(n/c) / eps^2)`.
    pub m: u64,
    /// Total qubits `(m + 2) * ceil(l)`.
    pub total: u64,
}

/// Closed-form qubit budget for encoding an `n`-vertex graph at density `c`
/// and regularized error `eps`. Pure arithmetic.
pub fn qubit_budget(n: u64, c: f64, eps: f64) -> Result<QubitBudget, BetaError> {
    if c <= 0.0 || (n as f64) <= c {
        return Err(BetaError::DomainError(format!("need n > c > 0, got n={n}, c={c}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(BetaError::DomainError(format!("need eps in (0, 1], got {eps}")));
    }
    let ratio = n as f64 / c;
    let l = ratio.log2() / 2.0;
    let m = (ratio.ln() / (eps * eps)).ceil() as u64;
    let total = (m + 2) * (l.ceil() as u64);
    Ok(QubitBudget { l, m, total })
}

/// Exact alpha for certified hbar-perfect graphs: run the symmetric-subspace
/// bound at a level where the rigorous error is below 1/4 and round.
pub fn alpha_via_definetti(
    g: &Graph,
    w: &[f64],
    certified_hbar_perfect: bool,
    budget: &DefinettiBudget,
) -> Result<i64, BetaError> {
    if !certified_hbar_perfect {
        return Err(BetaError::NotCertified);
    }
    check_weights(w)?;
    let r = realize_min(g);
    let d = 1usize << r.qubits();
    let norm_w: f64 = w.iter().sum();
    // 4 |w|_1 d / (m + 2) < 1/4.
    let m = ((16.0 * norm_w * d as f64).ceil() as usize).saturating_sub(2);
    let result = definetti_upper(&r, w, m, budget)?;
    Ok(result.lambda_max.round() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use rand::Rng;

    fn xyz() -> Realization {
        realize_min(&complete(3).unwrap())
    }

    #[test]
    fn seesaw_on_triangle_is_one() {
        let r = xyz();
        let out = seesaw(&r, &[1.0; 3], None, &SeeSawOptions::default()).unwrap();
        assert!((out.value - 1.0).abs() < 1e-9, "got {}", out.value);
        let ops = dense_strings(&r).unwrap();
        assert!((objective(&ops, &[1.0; 3], &out.state) - out.value).abs() < 1e-9);
    }

    #[test]
    fn seesaw_exceeds_alpha_on_anticycle7() {
        let g = anticycle(7).unwrap();
        let r = realize_min(&g);
        let opts = SeeSawOptions { restarts: 50, ..Default::default() };
        let out = seesaw(&r, &[1.0; 7], None, &opts).unwrap();
        assert!(out.value > 2.0 + 1e-3, "got {}", out.value);
    }

    #[test]
    fn seesaw_weight_validation() {
        let r = xyz();
        assert!(matches!(
            seesaw(&r, &[0.0; 3], None, &SeeSawOptions::default()),
            Err(BetaError::DegenerateWeights)
        ));
        assert!(matches!(
            seesaw(&r, &[1.0, -1.0, 1.0], None, &SeeSawOptions::default()),
            Err(BetaError::NegativeWeight)
        ));
    }

    #[test]
    fn seesaw_realization_invariance() {
        let g = cycle(5).unwrap();
        let r = realize_min(&g);
        let padded = r.padded(1);
        let opts = SeeSawOptions { restarts: 6, ..Default::default() };
        let a = seesaw(&r, &[1.0; 5], None, &opts).unwrap();
        let b = seesaw(&padded, &[1.0; 5], None, &opts).unwrap();
        assert!((a.value - b.value).abs() < 1e-6, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn bose_basis_dimensions_and_ranks() {
        for (d, copies) in [(2, 4), (4, 3), (3, 5), (4, 10)] {
            let b = BoseBasis::new(d, copies);
            assert_eq!(b.dim(), BoseBasis::expected_dim(d, copies));
            for (i, s) in b.states().iter().enumerate() {
                assert_eq!(b.index_of(s), i);
                assert_eq!(s.iter().sum::<u32>(), copies as u32);
            }
        }
    }

    #[test]
    fn definetti_single_string_is_exact() {
        let g = empty(1).unwrap();
        let r = realize_min(&g);
        for m in [0, 3, 10] {
            let out = definetti_upper(&r, &[1.0], m, &DefinettiBudget::default()).unwrap();
            assert!((out.lambda_max - 1.0).abs() < 1e-9, "m={m}: {}", out.lambda_max);
        }
    }

    #[test]
    fn definetti_triangle_close_to_one() {
        let r = xyz();
        let out = definetti_upper(&r, &[1.0; 3], 10, &DefinettiBudget::default()).unwrap();
        assert!(out.lambda_max >= 1.0 - 1e-9);
        assert!(out.lambda_max <= 1.2, "got {}", out.lambda_max);
        assert!((out.rigorous_error - 4.0 * 3.0 * 2.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn definetti_monotone_in_level_on_c5() {
        let r = realize_min(&cycle(5).unwrap());
        assert_eq!(r.qubits(), 2);
        let mut prev = f64::INFINITY;
        for m in [2usize, 4, 8, 16] {
            let out = definetti_upper(&r, &[1.0; 5], m, &DefinettiBudget::default()).unwrap();
            assert!(out.lambda_max >= 2.0 - 1e-8, "upper below beta at m={m}");
            assert!(out.lambda_max <= prev + 1e-8, "not monotone at m={m}");
            prev = out.lambda_max;
        }
    }

    #[test]
    fn definetti_budget_rejections() {
        let g7 = g7();
        let r = realize_min(&g7);
        assert_eq!(r.qubits(), 3);
        assert!(matches!(
            definetti_upper(&r, &[1.0; 7], 4, &DefinettiBudget::default()),
            Err(BetaError::BudgetExceeded(_))
        ));
        let r5 = realize_min(&cycle(5).unwrap());
        let tiny = DefinettiBudget { max_d: 4, max_dim: 10 };
        assert!(matches!(
            definetti_upper(&r5, &[1.0; 5], 8, &tiny),
            Err(BetaError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn warm_start_triangle_recovers_bloch_state() {
        let r = xyz();
        let dfr = definetti_upper(&r, &[1.0; 3], 4, &DefinettiBudget::default()).unwrap();
        let psi = warm_start_state(&dfr);
        let ops = dense_strings(&r).unwrap();
        let val = objective(&ops, &[1.0; 3], &psi);
        assert!(val > 0.99, "warm start too far from the Bloch sphere: {val}");
    }

    #[test]
    fn warm_start_single_z_is_basis_state() {
        let r = realize_min(&empty(1).unwrap());
        let dfr = definetti_upper(&r, &[1.0], 6, &DefinettiBudget::default()).unwrap();
        let psi = warm_start_state(&dfr);
        let p0 = psi[0].norm_sqr();
        assert!(p0 < 1e-9 || p0 > 1.0 - 1e-9, "got {p0}");
    }

    #[test]
    fn warm_started_seesaw_on_c5() {
        let r = realize_min(&cycle(5).unwrap());
        let dfr = definetti_upper(&r, &[1.0; 5], 8, &DefinettiBudget::default()).unwrap();
        let psi = warm_start_state(&dfr);
        let opts =
            SeeSawOptions { restarts: 0, alpha_start: false, max_iter: 100, ..Default::default() };
        let out = seesaw(&r, &[1.0; 5], Some(&psi), &opts).unwrap();
        assert!(out.value > 2.0 - 1e-6, "got {}", out.value);
    }

    #[test]
    fn generalized_beta_matches_seesaw_at_k2() {
        let r = realize_min(&cycle(5).unwrap());
        let s = seesaw(&r, &[1.0; 5], None, &SeeSawOptions::default()).unwrap();
        let g = generalized_beta_lower(&r, &[1.0; 5], 2, 8, 77).unwrap();
        assert!((s.value - g).abs() < 1e-6, "{} vs {g}", s.value);
    }

    #[test]
    fn generalized_beta_monotone_in_k() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..5 {
            let n = rng.random_range(2..=5);
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
            let w = vec![1.0; n];
            let v2 = generalized_beta_lower(&r, &w, 2, 6, 5).unwrap();
            let v4 = generalized_beta_lower(&r, &w, 4, 6, 5).unwrap();
            assert!(v4 <= v2 + 1e-8, "k=4 gave {v4} > k=2 {v2}");
        }
    }

    #[test]
    fn generalized_beta_approaches_alpha_on_anticycle7() {
        let r = realize_min(&anticycle(7).unwrap());
        let v = generalized_beta_lower(&r, &[1.0; 7], 32, 12, 99).unwrap();
        assert!(v <= 2.0 + 0.05, "got {v}");
        assert!(v >= 1.5, "ascent collapsed: {v}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let r = realize_min(&cycle(5).unwrap());
        let ops = dense_strings(&r).unwrap();
        let w = [0.7, 1.3, 0.5, 1.0, 2.0];
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..10 {
            let psi = linalg::random_unit_state(4, &mut rng);
            let grad = generalized_gradient(&ops, &w, 4, &psi);
            let dir = linalg::random_unit_state(4, &mut rng);
            let eps = 1e-6;
            let feval = |p: &CVector| {
                let n = p.norm();
                generalized_objective(&ops, &w, 4, &(p / Complex64::new(n, 0.0)))
            };
            let plus = feval(&(&psi + &dir * Complex64::new(eps, 0.0)));
            let minus = feval(&(&psi - &dir * Complex64::new(eps, 0.0)));
            let numeric = (plus - minus) / (2.0 * eps);
            let analytic = grad.dotc(&dir).re;
            let denom = numeric.abs().max(analytic.abs()).max(1e-6);
            assert!(
                (numeric - analytic).abs() / denom < 1e-4,
                "fd {numeric} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn qubit_budget_cases() {
        assert!(qubit_budget(4, 4.0, 0.5).is_err());
        let b = qubit_budget(4, 1.0, 1.0).unwrap();
        assert_eq!((b.l, b.m, b.total), (1.0, 2, 4));
        let b = qubit_budget(4096, 1.0, 0.1).unwrap();
        assert_eq!(b.m, 832);
        assert_eq!(b.total, 5004);
    }

    #[test]
    fn alpha_via_definetti_cases() {
        let k3 = complete(3).unwrap();
        assert_eq!(alpha_via_definetti(&k3, &[1.0; 3], true, &DefinettiBudget::default()).unwrap(), 1);
        let e2 = empty(2).unwrap();
        assert_eq!(alpha_via_definetti(&e2, &[1.0; 2], true, &DefinettiBudget::default()).unwrap(), 2);
        assert!(matches!(
            alpha_via_definetti(&k3, &[1.0; 3], false, &DefinettiBudget::default()),
            Err(BetaError::NotCertified)
        ));
        // C5 needs level 318 at local dimension 4: over the default cap.
        let c5 = cycle(5).unwrap();
        assert!(matches!(
            alpha_via_definetti(&c5, &[1.0; 5], true, &DefinettiBudget::default()),
            Err(BetaError::BudgetExceeded(_))
        ));
    }
}
