//! Downstream consumers of the alpha/beta machinery: entanglement detection
//! and estimation, shadow-tomography sample-complexity brackets, variance
//! uncertainty programs, and ground-state energy bounds.

use crate::beta::{beta_bracket, BracketBudget};
use crate::decider::{decide, DecideOptions, HbarStatus};
use crate::gf2::{frustration_graph, PauliString, Realization};
use crate::graph::{mask_vertices, Graph};
use crate::linalg::{self, CMatrix, CVector};
use crate::moment::{lovasz_theta, omega_r, BasisLevel, SolverConfig};
use crate::simplex::{self, Cmp, Constraint, LpOutcome};
use crate::stab::{self, StabPolytope};
use crate::Rational;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppsError {
    #[error("the two string sets have different frustration graphs")]
    GraphMismatch,
    #[error("operator dimension {got} does not match the expected {want}")]
    BadDimension { got: usize, want: usize },
    #[error("probabilities must be nonnegative and sum to one")]
    NotDistribution,
    #[error("stabilizers must pairwise commute")]
    NonCommutingStabilizers,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("constraints are infeasible")]
    Infeasible,
    #[error("optimizer stalled: {0}")]
    SolverStalled(String),
    #[error(transparent)]
    Beta(#[from] crate::beta::BetaError),
    #[error(transparent)]
    Stab(#[from] stab::StabError),
    #[error(transparent)]
    Gf2(#[from] crate::gf2::Gf2Error),
    #[error(transparent)]
    Moment(#[from] crate::moment::MomentError),
}

/// Validated density matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self, AppsError> {
        let n = mat.nrows();
        if n != mat.ncols() {
            return Err(AppsError::BadDimension { got: mat.ncols(), want: n });
        }
        if (&mat - mat.adjoint()).norm() > 1e-10 || (mat.trace().re - 1.0).abs() > 1e-10 {
            return Err(AppsError::NotDistribution);
        }
        let (vals, _) = linalg::hermitian_eigen(&mat);
        if vals[0] < -1e-10 {
            return Err(AppsError::NotDistribution);
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_pure(psi: &CVector) -> Self {
        DensityMatrix { mat: psi * psi.adjoint() }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn expectation(&self, op: &CMatrix) -> f64 {
        (op * &self.mat).trace().re
    }
}

// ---------------------------------------------------------------------------
// Bipartite nonlinear witness.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessVerdict {
    Entangled,
    Undecided,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    /// `p_i = |<S_i ⊗ S'_i>|`.
    pub point: Vec<f64>,
    pub criterion_value: f64,
    pub threshold: f64,
    /// Whether the threshold is the exact alpha (certified hbar-perfect) or a
    /// beta upper bound.
    pub threshold_exact: bool,
    pub violated_facets: Vec<(Vec<i64>, i64, f64)>,
    pub verdict: WitnessVerdict,
}

/// Evaluate the nonlinear witness `sum_i w_i |<S_i ⊗ S'_i>| <= beta(G, w)` on
/// a bipartite state. Separable states satisfy it, so a violation certifies
/// entanglement. When the frustration graph is certified hbar-perfect the
/// threshold is the exact weighted independence number and the facet
/// membership test runs as well.
pub fn nonlinear_witness(
    rho: &DensityMatrix,
    side_a: &Realization,
    side_b: &Realization,
    w: &[f64],
) -> Result<WitnessReport, AppsError> {
    if side_a.graph() != side_b.graph() {
        return Err(AppsError::GraphMismatch);
    }
    let dim = 1usize << (side_a.qubits() + side_b.qubits());
    if rho.dim() != dim {
        return Err(AppsError::BadDimension { got: rho.dim(), want: dim });
    }
    let point: Vec<f64> = side_a
        .strings()
        .iter()
        .zip(side_b.strings())
        .map(|(a, b)| {
            let op = a.to_dense().expect("checked").kronecker(&b.to_dense().expect("checked"));
            rho.expectation(&op).abs()
        })
        .collect();
    let criterion_value: f64 = point.iter().zip(w).map(|(p, wi)| p * wi).sum();

    let g = side_a.graph();
    let mut threshold_exact = false;
    let mut violated_facets = Vec::new();
    let threshold = if g.n() <= crate::stab::FACET_ENUM_MAX_N
        && matches!(decide(g, &DecideOptions::default()).map(|v| v.status), Ok(HbarStatus::Perfect))
    {
        threshold_exact = true;
        let wq: Vec<Rational> =
            w.iter().map(|&x| Rational::from_float(x).unwrap_or_default()).collect();
        let (alpha, _) = stab::alpha(g, &wq)?;
        let polytope = StabPolytope::of(g)?;
        let pq: Vec<Rational> =
            point.iter().map(|&x| Rational::from_float(x).unwrap_or_default()).collect();
        let membership = polytope.point_membership(&pq)?;
        for (f, slack) in membership.violated {
            violated_facets.push((f.normal.clone(), f.rhs, slack.to_f64().unwrap_or(f64::NAN)));
        }
        alpha.to_f64().unwrap_or(f64::NAN)
    } else {
        beta_bracket(g, w, &BracketBudget::default())?.upper
    };

    let verdict = if criterion_value > threshold + 1e-9 || !violated_facets.is_empty() {
        WitnessVerdict::Entangled
    } else {
        WitnessVerdict::Undecided
    };
    Ok(WitnessReport {
        point,
        criterion_value,
        threshold,
        threshold_exact,
        violated_facets,
        verdict,
    })
}

/// Bell-diagonal two-qubit states: entangled iff `max_i p_i > 1/2`, iff the
/// absolute-correlation point lies outside STAB(K3). Both tests run and must
/// agree.
pub fn bell_diagonal_classify(p: &[f64; 4]) -> Result<(bool, [f64; 3]), AppsError> {
    if p.iter().any(|&x| x < -1e-12) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(AppsError::NotDistribution);
    }
    // Correlations of sum_i p_i |Psi_i><Psi_i| along XX, YY, ZZ.
    let point = [
        (p[0] + p[2] - p[1] - p[3]).abs(),
        (p[1] + p[2] - p[0] - p[3]).abs(),
        (p[0] + p[1] - p[2] - p[3]).abs(),
    ];
    let algebraic = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max) > 0.5 + 1e-12;
    let geometric = point.iter().sum::<f64>() > 1.0 + 1e-9;
    debug_assert_eq!(algebraic, geometric, "classifier disagreement at {p:?}");
    Ok((algebraic, point))
}

// ---------------------------------------------------------------------------
// Two-qutrit witness through two-dimensional subspace covers.
// ---------------------------------------------------------------------------

/// The Pauli triple acting on the qutrit subspace that omits level `skip`.
pub fn qutrit_subspace_paulis(skip: usize) -> [CMatrix; 3] {
    let (a, b) = match skip {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut x = CMatrix::zeros(3, 3);
    x[(a, b)] = Complex64::ONE;
    x[(b, a)] = Complex64::ONE;
    let mut y = CMatrix::zeros(3, 3);
    y[(a, b)] = -Complex64::i();
    y[(b, a)] = Complex64::i();
    let mut z = CMatrix::zeros(3, 3);
    z[(a, a)] = Complex64::ONE;
    z[(b, b)] = -Complex64::ONE;
    [x, y, z]
}

/// Separable two-qutrit states keep the 27-term subspace-cover sum at or below
/// 4; report the left-hand side and the verdict.
pub fn qutrit_cover_witness(rho: &DensityMatrix) -> Result<(f64, WitnessVerdict), AppsError> {
    if rho.dim() != 9 {
        return Err(AppsError::BadDimension { got: rho.dim(), want: 9 });
    }
    let mut lhs = 0.0;
    for i in 0..3 {
        let pi = qutrit_subspace_paulis(i);
        for j in 0..3 {
            let pj = qutrit_subspace_paulis(j);
            for k in 0..3 {
                lhs += rho.expectation(&pi[k].kronecker(&pj[k])).abs();
            }
        }
    }
    let verdict =
        if lhs > 4.0 + 1e-9 { WitnessVerdict::Entangled } else { WitnessVerdict::Undecided };
    Ok((lhs, verdict))
}

// ---------------------------------------------------------------------------
// Multipartite criteria from commuting stabilizers.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BipartitionBound {
    /// Party subset forming one side.
    pub parties: Vec<usize>,
    pub threshold: f64,
    pub threshold_exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultipartiteCriterion {
    pub weights: Vec<f64>,
    pub bounds: Vec<BipartitionBound>,
    /// `max_bp t_bp`: ceiling for every biseparable state.
    pub biseparable_bound: f64,
    /// `min_bp t_bp`: ceiling for every fully separable state.
    pub fully_separable_bound: f64,
    /// `sum_i w_i`: the value a joint eigenstate attains.
    pub stabilizer_value: f64,
    #[serde(skip)]
    hull_vertices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntanglementStructure {
    GenuinelyMultipartite,
    NotFullySeparable,
    Undecided,
}

/// Build the entanglement-structure criterion of a commuting stabilizer set:
/// for each bipartition, the frustration graph of the restricted strings binds
/// `sum_i w_i |<O_i>|` for states separable across it.
pub fn multipartite_criterion(
    stabilizers: &[PauliString],
    w: &[f64],
) -> Result<MultipartiteCriterion, AppsError> {
    let k = stabilizers.len();
    assert_eq!(w.len(), k);
    let parties = stabilizers.first().map_or(0, |s| s.len());
    if parties > 5 {
        return Err(AppsError::BudgetExceeded(format!("{parties} parties, cap 5")));
    }
    for i in 0..k {
        for j in i + 1..k {
            if stabilizers[i].anticommutes(&stabilizers[j])? {
                return Err(AppsError::NonCommutingStabilizers);
            }
        }
    }
    let mut bounds = Vec::new();
    let mut hull_vertices: Vec<Vec<f64>> = Vec::new();
    // Proper bipartitions, each counted once via "party 0 stays on side A".
    for split in 1u32..(1 << (parties - 1)) {
        let side: Vec<usize> = (0..parties).filter(|&q| split >> q & 1 == 0).collect();
        let restricted: Vec<PauliString> = stabilizers
            .iter()
            .map(|s| {
                let (mut x, mut z) = (0u32, 0u32);
                for (new_q, &q) in side.iter().enumerate() {
                    x |= (s.x_bits() >> q & 1) << new_q;
                    z |= (s.z_bits() >> q & 1) << new_q;
                }
                PauliString::new(side.len(), x, z)
            })
            .collect();
        let g = frustration_graph(&restricted)?;
        let verdict = decide(&g, &DecideOptions::default()).map(|v| v.status);
        let (threshold, exact) = if matches!(verdict, Ok(HbarStatus::Perfect)) {
            let wq: Vec<Rational> =
                w.iter().map(|&x| Rational::from_float(x).unwrap_or_default()).collect();
            let (alpha, _) = stab::alpha(&g, &wq)?;
            // The polytope vertices feed distance estimation.
            for &set in StabPolytope::of(&g)?.vertices() {
                hull_vertices
                    .push((0..k).map(|i| f64::from(set >> i & 1 == 1)).collect());
            }
            (alpha.to_f64().unwrap_or(f64::NAN), true)
        } else {
            (beta_bracket(&g, w, &BracketBudget::default())?.upper, false)
        };
        bounds.push(BipartitionBound { parties: side, threshold, threshold_exact: exact });
    }
    hull_vertices.sort_by(|a, b| a.partial_cmp(b).unwrap());
    hull_vertices.dedup();
    let biseparable_bound =
        bounds.iter().map(|b| b.threshold).fold(f64::NEG_INFINITY, f64::max);
    let fully_separable_bound =
        bounds.iter().map(|b| b.threshold).fold(f64::INFINITY, f64::min);
    Ok(MultipartiteCriterion {
        weights: w.to_vec(),
        bounds,
        biseparable_bound,
        fully_separable_bound,
        stabilizer_value: w.iter().sum(),
        hull_vertices,
    })
}

impl MultipartiteCriterion {
    /// Judge measured absolute expectations `|<O_i>|`.
    pub fn evaluate_expectations(&self, abs_expectations: &[f64]) -> (f64, EntanglementStructure) {
        let value: f64 =
            abs_expectations.iter().zip(&self.weights).map(|(p, w)| p.abs() * w).sum();
        let verdict = if value > self.biseparable_bound + 1e-9 {
            EntanglementStructure::GenuinelyMultipartite
        } else if value > self.fully_separable_bound + 1e-9 {
            EntanglementStructure::NotFullySeparable
        } else {
            EntanglementStructure::Undecided
        };
        (value, verdict)
    }

    pub fn evaluate_state(
        &self,
        rho: &DensityMatrix,
        stabilizers: &[PauliString],
    ) -> Result<(f64, EntanglementStructure), AppsError> {
        let exps = stabilizer_expectations(rho, stabilizers)?;
        Ok(self.evaluate_expectations(&exps))
    }

    /// Vertex representation of `Conv(∪_bp STAB(G_bp))`, available when every
    /// bipartition graph was certified.
    pub fn hull_vertices(&self) -> &[Vec<f64>] {
        &self.hull_vertices
    }
}

pub fn stabilizer_expectations(
    rho: &DensityMatrix,
    stabilizers: &[PauliString],
) -> Result<Vec<f64>, AppsError> {
    let parties = stabilizers.first().map_or(0, |s| s.len());
    if rho.dim() != 1 << parties {
        return Err(AppsError::BadDimension { got: rho.dim(), want: 1 << parties });
    }
    Ok(stabilizers
        .iter()
        .map(|s| rho.expectation(&s.to_dense().expect("parties <= 5")).abs())
        .collect())
}

// ---------------------------------------------------------------------------
// Entanglement estimation from criterion violations.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntanglementEstimates {
    /// Taxicab distance to the biseparable hull.
    pub d_taxicab: f64,
    /// Euclidean distance to the biseparable hull.
    pub d_euclidean: f64,
    /// `max_s (lambda_max - lambda_min)(sum_i s_i O_i)`.
    pub lambda_gap: f64,
    /// Trace-distance entanglement: `d_taxicab / lambda_gap`.
    pub e_t_lower: f64,
    /// Hilbert-Schmidt entanglement: `d_euclidean / tr[(sum O_i ⊗ O_i)^2]^{1/4}`.
    pub e_hs_lower: f64,
}

/// Lower bounds on entanglement measures from the distance between the
/// measured point and the biseparable hull of the criterion.
pub fn entanglement_estimates(
    abs_expectations: &[f64],
    criterion: &MultipartiteCriterion,
    stabilizers: &[PauliString],
) -> Result<EntanglementEstimates, AppsError> {
    let k = stabilizers.len();
    if k > 20 {
        return Err(AppsError::BudgetExceeded(format!("{k} stabilizers, cap 20")));
    }
    if criterion.hull_vertices.is_empty() {
        return Err(AppsError::SolverStalled(
            "hull vertices unavailable (uncertified bipartition graph)".into(),
        ));
    }
    let d_taxicab = taxicab_distance_to_hull(abs_expectations, &criterion.hull_vertices);
    let d_euclidean = euclidean_distance_to_hull(abs_expectations, &criterion.hull_vertices);

    // lambda_gap by brute force over sign patterns (dense eigensolves).
    if k >= 21 {
        return Err(AppsError::BudgetExceeded("sign traversal over 2^k capped".into()));
    }
    let ops: Vec<CMatrix> =
        stabilizers.iter().map(|s| s.to_dense().expect("parties <= 5")).collect();
    let dim = ops[0].nrows();
    let mut lambda_gap = 0.0f64;
    for bits in 0u32..(1 << k) {
        let mut h = CMatrix::zeros(dim, dim);
        for (i, op) in ops.iter().enumerate() {
            let s = if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
            h += op * Complex64::new(s, 0.0);
        }
        let (vals, _) = linalg::hermitian_eigen(&h);
        lambda_gap = lambda_gap.max(vals[vals.len() - 1] - vals[0]);
    }

    let mut kron = CMatrix::zeros(dim * dim, dim * dim);
    for op in &ops {
        kron += op.kronecker(op);
    }
    let hs_norm = (&kron * &kron).trace().re.powf(0.25);

    Ok(EntanglementEstimates {
        d_taxicab,
        d_euclidean,
        lambda_gap,
        e_t_lower: d_taxicab / lambda_gap,
        e_hs_lower: d_euclidean / hs_norm,
    })
}

/// Exact L1 distance from `q` to the convex hull of `vertices` (rational LP).
fn taxicab_distance_to_hull(q: &[f64], vertices: &[Vec<f64>]) -> f64 {
    let dim = q.len();
    let nv = vertices.len();
    let rat = |x: f64| Rational::from_float(x).unwrap_or_default();
    // Variables: lambda_1..lambda_nv, t_1..t_dim; minimize sum t subject to
    // -t_d <= q_d - (V lambda)_d <= t_d and lambda in the simplex.
    let mut constraints = Vec::new();
    for d in 0..dim {
        let mut up: Vec<Rational> = vertices.iter().map(|v| rat(v[d])).collect();
        up.extend((0..dim).map(|t| if t == d { Rational::one() } else { Rational::zero() }));
        constraints.push(Constraint::new(up, Cmp::Ge, rat(q[d])));
        let mut lo: Vec<Rational> = vertices.iter().map(|v| rat(v[d])).collect();
        lo.extend((0..dim).map(|t| if t == d { -Rational::one() } else { Rational::zero() }));
        constraints.push(Constraint::new(lo, Cmp::Le, rat(q[d])));
    }
    let mut simplex_row = vec![Rational::one(); nv];
    simplex_row.extend(vec![Rational::zero(); dim]);
    constraints.push(Constraint::new(simplex_row, Cmp::Eq, Rational::one()));
    let mut objective = vec![Rational::zero(); nv];
    objective.extend(vec![Rational::one(); dim]);
    match simplex::minimize(&objective, &constraints) {
        LpOutcome::Optimal { value, .. } => value.to_f64().unwrap_or(f64::NAN),
        _ => f64::NAN,
    }
}

/// Euclidean distance from `q` to the hull by projected gradient over the
/// simplex of hull coefficients.
fn euclidean_distance_to_hull(q: &[f64], vertices: &[Vec<f64>]) -> f64 {
    let nv = vertices.len();
    let dim = q.len();
    let mut lambda = vec![1.0 / nv as f64; nv];
    let residual = |lambda: &[f64]| -> Vec<f64> {
        let mut r = q.to_vec();
        for (l, v) in lambda.iter().zip(vertices) {
            for d in 0..dim {
                r[d] -= l * v[d];
            }
        }
        r
    };
    let value = |lambda: &[f64]| residual(lambda).iter().map(|x| x * x).sum::<f64>();
    let mut f = value(&lambda);
    let mut step = 1.0;
    for _ in 0..20_000 {
        let r = residual(&lambda);
        // grad_j = -2 <v_j, r>.
        let grad: Vec<f64> =
            vertices.iter().map(|v| -2.0 * v.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>()).collect();
        let mut improved = false;
        for _ in 0..40 {
            let cand: Vec<f64> =
                lambda.iter().zip(&grad).map(|(l, g)| l - step * g).collect();
            let cand = linalg::simplex_project(&cand);
            let fc = value(&cand);
            if fc < f - 1e-18 {
                lambda = cand;
                f = fc;
                step *= 1.5;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved || f < 1e-18 {
            break;
        }
    }
    f.max(0.0).sqrt()
}

// ---------------------------------------------------------------------------
// Shadow-tomography sample-complexity brackets.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaBounds {
    /// `1 / alpha*(complement)`; tight for hbar-perfect graphs.
    pub lower: (String, f64),
    /// `1 / theta(complement)`.
    pub upper: f64,
    /// `1 / omega_r`, when the refinement was requested.
    pub refined_upper: Option<f64>,
    /// `beta(G) / n` bracket for vertex-transitive graphs.
    pub transitive_exact: Option<(f64, f64)>,
}

pub fn delta_bounds(
    g: &Graph,
    refine_level: Option<BasisLevel>,
    sdp: &SolverConfig,
) -> Result<DeltaBounds, AppsError> {
    let complement = g.complement();
    let packing = stab::fractional_packing(&complement)?;
    let lower_exact = packing.recip();
    let theta = lovasz_theta(&complement, &vec![1.0; g.n()], sdp)?;
    let refined_upper = match refine_level {
        Some(level) => Some(1.0 / omega_r(g, level, sdp)?.value),
        None => None,
    };
    let transitive_exact = if g.n() <= 12 && g.is_vertex_transitive().unwrap_or(false) {
        let bracket = beta_bracket(g, &vec![1.0; g.n()], &BracketBudget::default())?;
        Some((bracket.lower / g.n() as f64, bracket.upper / g.n() as f64))
    } else {
        None
    };
    Ok(DeltaBounds {
        lower: (lower_exact.to_string(), lower_exact.to_f64().unwrap_or(f64::NAN)),
        upper: 1.0 / theta.value,
        refined_upper,
        transitive_exact,
    })
}

// ---------------------------------------------------------------------------
// Variance uncertainty as an exact linear program.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UncertaintyLpResult {
    pub min_variance: String,
    pub min_variance_f64: f64,
    pub optimizer: Vec<String>,
    /// False when the graph was not certified hbar-perfect, in which case the
    /// value is only a lower bound on the true variance floor.
    pub exact: bool,
}

/// Variance floor of `S_target` under caps on the other variances: exact LP
/// over the facet description of STAB(G) in variance coordinates.
pub fn uncertainty_lp(
    g: &Graph,
    target: usize,
    caps: &[(usize, f64)],
    certified_hbar_perfect: bool,
) -> Result<UncertaintyLpResult, AppsError> {
    if caps.iter().any(|&(_, c)| !(0.0..=1.0).contains(&c)) {
        return Err(AppsError::NotDistribution);
    }
    let polytope = StabPolytope::of(g)?;
    let n = g.n();
    let rat = |x: f64| Rational::from_float(x).unwrap_or_default();
    let mut constraints = Vec::new();
    let unit = |d: usize| -> Vec<Rational> {
        (0..n).map(|t| if t == d { Rational::one() } else { Rational::zero() }).collect()
    };
    for j in 0..n {
        constraints.push(Constraint::new(unit(j), Cmp::Le, Rational::one()));
    }
    for &(j, cap) in caps {
        assert!(j < n && j != target);
        constraints.push(Constraint::new(unit(j), Cmp::Ge, rat(cap)));
    }
    // Facet constraints on (1 - x): sum_k n_k (1 - x_k) <= rhs.
    for facet in polytope.facets() {
        if facet.is_nonnegativity() {
            continue;
        }
        let coeffs: Vec<Rational> =
            facet.normal.iter().map(|&c| -Rational::from_integer(c.into())).collect();
        let shift: Rational =
            facet.normal.iter().map(|&c| Rational::from_integer(c.into())).sum();
        constraints.push(Constraint::new(coeffs, Cmp::Le, Rational::from_integer(facet.rhs.into()) - shift));
    }
    let mut objective = vec![Rational::zero(); n];
    objective[target] = Rational::one();
    match simplex::minimize(&objective, &constraints) {
        LpOutcome::Optimal { value, point } => Ok(UncertaintyLpResult {
            min_variance_f64: value.to_f64().unwrap_or(f64::NAN),
            min_variance: value.to_string(),
            optimizer: point.iter().map(|x| x.to_string()).collect(),
            exact: certified_hbar_perfect,
        }),
        LpOutcome::Infeasible => Err(AppsError::Infeasible),
        LpOutcome::Unbounded => unreachable!("box-bounded LP"),
    }
}

// ---------------------------------------------------------------------------
// Ground-state energy bounds.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundBound {
    pub coefficients: Vec<f64>,
    pub weights: Vec<f64>,
    /// `sum_i a_i^2 / w_i` at the optimum over the packing constraints.
    pub objective: f64,
    /// `-sqrt(objective)`, a floor under the ground-state energy.
    pub bound: f64,
    /// Exact smallest eigenvalue of `sum a_i S_i`, when the dense check ran.
    pub exact_energy: Option<f64>,
}

/// Minimize `sum_i a_i^2 / w_i` over the stable-set packing constraints
/// `sum_{i in I} w_i <= 1` by a log-barrier Newton method; the bound
/// `-sqrt(optimum)` underestimates the ground energy of `sum_i a_i S_i` for
/// hbar-perfect frustration graphs (and remains valid with beta in place of
/// alpha in general).
pub fn ground_bound(a: &[f64], r: &Realization) -> Result<GroundBound, AppsError> {
    let g = r.graph();
    let n = g.n();
    assert_eq!(a.len(), n);
    let family = stab::StableSetFamily::enumerate(g)?;
    let sets: Vec<u32> = family.maximal().to_vec();
    let eps0 = 1e-12;
    let a2: Vec<f64> = a.iter().map(|x| x * x).collect();

    // Strictly feasible start: uniform weights scaled under the largest set.
    let alpha0 = sets.iter().map(|s| s.count_ones()).max().unwrap_or(1) as f64;
    let mut w = vec![0.9 / alpha0; n];
    let mut t = 1.0f64;
    let m_total = (sets.len() + n) as f64;
    while m_total / t > 1e-10 {
        // Newton iterations on t*f(w) + barrier.
        for _ in 0..80 {
            let mut grad = DMatrix::<f64>::zeros(n, 1);
            let mut hess = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                grad[(i, 0)] += t * (-a2[i] / (w[i] * w[i]));
                hess[(i, i)] += t * (2.0 * a2[i] / (w[i] * w[i] * w[i]));
                let slack = w[i] - eps0;
                grad[(i, 0)] += -1.0 / slack;
                hess[(i, i)] += 1.0 / (slack * slack);
            }
            for &set in &sets {
                let slack = 1.0 - mask_vertices(set).map(|v| w[v]).sum::<f64>();
                for u in mask_vertices(set) {
                    grad[(u, 0)] += 1.0 / slack;
                    for v in mask_vertices(set) {
                        hess[(u, v)] += 1.0 / (slack * slack);
                    }
                }
            }
            let Some(chol) = hess.clone().cholesky() else {
                return Err(AppsError::SolverStalled("barrier Hessian not positive".into()));
            };
            let step = chol.solve(&grad);
            // Backtrack to stay strictly feasible and decrease.
            let value = |w: &[f64]| -> f64 {
                let mut val = 0.0;
                for i in 0..n {
                    if w[i] <= eps0 {
                        return f64::INFINITY;
                    }
                    val += t * a2[i] / w[i] - (w[i] - eps0).ln();
                }
                for &set in &sets {
                    let slack = 1.0 - mask_vertices(set).map(|v| w[v]).sum::<f64>();
                    if slack <= 0.0 {
                        return f64::INFINITY;
                    }
                    val -= slack.ln();
                }
                val
            };
            let f0 = value(&w);
            let mut eta = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let cand: Vec<f64> =
                    (0..n).map(|i| w[i] - eta * step[(i, 0)]).collect();
                if value(&cand) < f0 - 1e-14 {
                    w = cand;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            let gnorm = grad.norm();
            if !accepted || gnorm < 1e-10 * t.max(1.0) {
                break;
            }
        }
        t *= 10.0;
    }
    let objective: f64 = a2.iter().zip(&w).map(|(a2, w)| a2 / w).sum();
    let exact_energy = exact_ground_energy(a, r);
    Ok(GroundBound { coefficients: a.to_vec(), weights: w, objective, bound: -objective.sqrt(), exact_energy })
}

/// Valid energy floor at a hand-picked weight vector: the product form
/// `-sqrt((sum_i a_i^2 / w_i) * alpha(G, w))` for a certified graph.
pub fn ground_bound_at(a: &[f64], r: &Realization, w: &[f64]) -> Result<GroundBound, AppsError> {
    let wq: Vec<Rational> =
        w.iter().map(|&x| Rational::from_float(x).unwrap_or_default()).collect();
    let (alpha, _) = stab::alpha(r.graph(), &wq)?;
    let alpha = alpha.to_f64().unwrap_or(f64::NAN);
    let sum: f64 = a.iter().zip(w).map(|(a, w)| a * a / w).sum();
    let objective = sum * alpha;
    Ok(GroundBound {
        coefficients: a.to_vec(),
        weights: w.to_vec(),
        objective,
        bound: -objective.sqrt(),
        exact_energy: exact_ground_energy(a, r),
    })
}

fn exact_ground_energy(a: &[f64], r: &Realization) -> Option<f64> {
    if r.qubits() > 6 {
        return None;
    }
    let dim = 1usize << r.qubits();
    let mut h = CMatrix::zeros(dim, dim);
    for (s, &ai) in r.strings().iter().zip(a) {
        h += s.to_dense().expect("qubits <= 6") * Complex64::new(ai, 0.0);
    }
    let (vals, _) = linalg::hermitian_eigen(&h);
    Some(vals[0])
}

// ---------------------------------------------------------------------------
// Named states and Hamiltonians used by the criteria.
// ---------------------------------------------------------------------------

pub mod states {
    //! Constructors for the states and string families the witnesses target.

    use super::*;

    /// Two-qubit Bell states `(|00> ± |11>)/sqrt(2)`, `(|01> ± |10>)/sqrt(2)`.
    pub fn bell(k: usize) -> CVector {
        let s = 1.0 / 2f64.sqrt();
        let mut v = CVector::zeros(4);
        match k {
            0 => {
                v[0] = Complex64::new(s, 0.0);
                v[3] = Complex64::new(s, 0.0);
            }
            1 => {
                v[0] = Complex64::new(s, 0.0);
                v[3] = Complex64::new(-s, 0.0);
            }
            2 => {
                v[1] = Complex64::new(s, 0.0);
                v[2] = Complex64::new(s, 0.0);
            }
            _ => {
                v[1] = Complex64::new(s, 0.0);
                v[2] = Complex64::new(-s, 0.0);
            }
        }
        v
    }

    /// The eight three-qubit GHZ-type states `(|0ij> ± |1i'j'>)/sqrt(2)`.
    pub fn ghz(k: usize) -> CVector {
        let (ij, sign) = (k / 2, if k % 2 == 0 { 1.0 } else { -1.0 });
        let s = 1.0 / 2f64.sqrt();
        let mut v = CVector::zeros(8);
        let low = ij & 3;
        let high = 4 | (!ij & 3);
        v[low] = Complex64::new(s, 0.0);
        v[high] = Complex64::new(sign * s, 0.0);
        v
    }

    /// Stabilizer generators' products for the GHZ family (signs dropped; only
    /// absolute expectations enter the criteria).
    pub fn ghz_stabilizers() -> Vec<PauliString> {
        ["ZZI", "ZIZ", "IZZ", "XXX", "YYX", "YXY", "XYY"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    /// The five pairwise anticommuting two-qubit strings whose frustration
    /// graph is the 5-clique; enough to detect the `rho_v` family.
    pub fn s5_strings() -> Vec<PauliString> {
        ["IX", "IZ", "XY", "YY", "ZY"].iter().map(|s| s.parse().unwrap()).collect()
    }

    /// The six strings defining the `rho_v` family.
    pub fn rho_v_strings() -> Vec<PauliString> {
        ["IY", "XX", "YZ", "ZX", "ZY", "ZZ"].iter().map(|s| s.parse().unwrap()).collect()
    }

    /// Bipartite 4x4-level state `v * avg_i |psi_{S_i}><psi_{S_i}| + (1-v)/16`,
    /// with `|psi_S> = sum_j |j> ⊗ S|j> / 2` over the six strings above.
    pub fn rho_v(v: f64) -> DensityMatrix {
        let mut rho = CMatrix::identity(16, 16) * Complex64::new((1.0 - v) / 16.0, 0.0);
        for s in rho_v_strings() {
            let op = s.to_dense().expect("two qubits");
            let mut psi = CVector::zeros(16);
            for j in 0..4 {
                for i in 0..4 {
                    psi[j * 4 + i] += op[(i, j)] * Complex64::new(0.5, 0.0);
                }
            }
            rho += &psi * psi.adjoint() * Complex64::new(v / 6.0, 0.0);
        }
        DensityMatrix::new(rho).expect("valid mixture")
    }

    /// Maximally entangled two-qutrit state.
    pub fn psi3() -> CVector {
        let s = 1.0 / 3f64.sqrt();
        let mut v = CVector::zeros(9);
        for i in 0..3 {
            v[i * 3 + i] = Complex64::new(s, 0.0);
        }
        v
    }

    /// `(|12> + |21>)/sqrt(2)` on two qutrits.
    pub fn phi_prime() -> CVector {
        let s = 1.0 / 2f64.sqrt();
        let mut v = CVector::zeros(9);
        v[1 * 3 + 2] = Complex64::new(s, 0.0);
        v[2 * 3 + 1] = Complex64::new(s, 0.0);
        v
    }

    /// `(1-p) |Psi3><Psi3| + p |Phi'><Phi'|`.
    pub fn qutrit_mixture(p: f64) -> DensityMatrix {
        let a = psi3();
        let b = phi_prime();
        DensityMatrix::new(
            &a * a.adjoint() * Complex64::new(1.0 - p, 0.0)
                + &b * b.adjoint() * Complex64::new(p, 0.0),
        )
        .expect("valid mixture")
    }

    /// The entangled-but-unfaithful two-qutrit state (printed amplitudes,
    /// states normalized).
    pub fn unfaithful() -> DensityMatrix {
        let phi1 = [(4usize, 0.628), (8, -0.778)];
        let phi2 = [
            (1usize, 0.807),
            (2, -0.185),
            (3, -0.102),
            (4, -0.027),
            (5, 0.011),
            (6, 0.551),
            (7, -0.024),
            (8, -0.022),
        ];
        let build = |coeffs: &[(usize, f64)]| -> CVector {
            let mut v = CVector::zeros(9);
            for &(i, c) in coeffs {
                v[i] = Complex64::new(c, 0.0);
            }
            let n = v.norm();
            v / Complex64::new(n, 0.0)
        };
        let v1 = build(&phi1);
        let v2 = build(&phi2);
        let rho = (&v1 * v1.adjoint() * Complex64::new(0.50179, 0.0)
            + &v2 * v2.adjoint() * Complex64::new(0.49821, 0.0))
            * Complex64::new(0.999, 0.0)
            + CMatrix::identity(9, 9) * Complex64::new(0.001 / 9.0, 0.0);
        DensityMatrix::new(rho).expect("valid mixture")
    }

    /// Strings of `X_1 + Z_1 + Y_n + sum_i (X_i X_{i+1} + Z_i Z_{i+1})` on `n`
    /// qubits; the frustration graph is the odd cycle on `2n + 1` vertices.
    pub fn ring_model_strings(n: usize) -> Vec<PauliString> {
        let mut out = Vec::new();
        let single = |q: usize, ch: char, n: usize| -> PauliString {
            let mut s: Vec<char> = vec!['I'; n];
            s[q] = ch;
            s.into_iter().collect::<String>().parse().unwrap()
        };
        let double = |q: usize, ch: char, n: usize| -> PauliString {
            let mut s: Vec<char> = vec!['I'; n];
            s[q] = ch;
            s[q + 1] = ch;
            s.into_iter().collect::<String>().parse().unwrap()
        };
        out.push(single(0, 'X', n));
        out.push(single(0, 'Z', n));
        out.push(single(n - 1, 'Y', n));
        for i in 0..n - 1 {
            out.push(double(i, 'X', n));
            out.push(double(i, 'Z', n));
        }
        out
    }

    /// Strings of `X_1 + Z_1 + Y_2 + X_1X_2 + Y_1Y_2 + Z_1Z_2`.
    pub fn heisenberg_pair_strings() -> Vec<PauliString> {
        ["XI", "ZI", "IY", "XX", "YY", "ZZ"].iter().map(|s| s.parse().unwrap()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::states::*;
    use super::*;
    use crate::gf2::realize_min;
    use crate::graph::fixtures;

    #[test]
    fn bell_state_witness_on_triangle() {
        let xyz = realize_min(&fixtures::complete(3).unwrap());
        let rho = DensityMatrix::from_pure(&bell(0));
        let report = nonlinear_witness(&rho, &xyz, &xyz, &[1.0; 3]).unwrap();
        for p in &report.point {
            assert!((p - 1.0).abs() < 1e-10, "point {:?}", report.point);
        }
        assert!((report.criterion_value - 3.0).abs() < 1e-9);
        assert!(report.threshold_exact);
        assert!((report.threshold - 1.0).abs() < 1e-12);
        assert_eq!(report.verdict, WitnessVerdict::Entangled);
        assert!(!report.violated_facets.is_empty());
    }

    #[test]
    fn maximally_mixed_is_undecided() {
        let xyz = realize_min(&fixtures::complete(3).unwrap());
        let rho = DensityMatrix::new(CMatrix::identity(4, 4) * Complex64::new(0.25, 0.0)).unwrap();
        let report = nonlinear_witness(&rho, &xyz, &xyz, &[1.0; 3]).unwrap();
        assert!(report.point.iter().all(|p| p.abs() < 1e-12));
        assert_eq!(report.verdict, WitnessVerdict::Undecided);
    }

    #[test]
    fn witness_rejects_mismatched_graphs() {
        let xyz = realize_min(&fixtures::complete(3).unwrap());
        let e3 = realize_min(&fixtures::empty(3).unwrap());
        let rho = DensityMatrix::new(CMatrix::identity(4, 4) * Complex64::new(0.25, 0.0)).unwrap();
        assert!(matches!(
            nonlinear_witness(&rho, &xyz, &e3, &[1.0; 3]),
            Err(AppsError::GraphMismatch)
        ));
    }

    #[test]
    fn rho_v_family_threshold() {
        // Five anticommuting strings per party: the frustration graph is K5,
        // so separability caps the witness at 1; the mixture crosses at 3/5.
        let s5 = Realization::new(s5_strings(), fixtures::complete(5).unwrap()).unwrap();
        for (v, expect_entangled) in [(0.598, false), (0.602, true)] {
            let rho = rho_v(v);
            let report = nonlinear_witness(&rho, &s5, &s5, &[1.0; 5]).unwrap();
            assert_eq!(
                report.verdict,
                if expect_entangled { WitnessVerdict::Entangled } else { WitnessVerdict::Undecided },
                "v = {v}: value {}",
                report.criterion_value
            );
        }
        // The crossing sits at 5v/3 = 1.
        let report = nonlinear_witness(&rho_v(0.6), &s5, &s5, &[1.0; 5]).unwrap();
        assert!((report.criterion_value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn bell_diagonal_classifier() {
        assert_eq!(bell_diagonal_classify(&[1.0, 0.0, 0.0, 0.0]).unwrap(), (true, [1.0, 1.0, 1.0]));
        let (ent, point) = bell_diagonal_classify(&[0.25; 4]).unwrap();
        assert!(!ent);
        assert_eq!(point, [0.0, 0.0, 0.0]);
        let (ent, _) = bell_diagonal_classify(&[0.6, 0.4, 0.0, 0.0]).unwrap();
        assert!(ent);
        assert!(bell_diagonal_classify(&[0.5, 0.2, 0.0, 0.0]).is_err());
    }

    #[test]
    fn bell_diagonal_classifier_agrees_on_random_distributions() {
        use rand::Rng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(47);
        for _ in 0..10_000 {
            let mut p = [0.0f64; 4];
            let mut total = 0.0;
            for x in p.iter_mut() {
                *x = rng.random::<f64>();
                total += *x;
            }
            for x in p.iter_mut() {
                *x /= total;
            }
            // Inner agreement assert runs inside the classifier.
            bell_diagonal_classify(&p).unwrap();
        }
    }

    use rand::SeedableRng;

    #[test]
    fn qutrit_cover_values() {
        let mixed = DensityMatrix::new(CMatrix::identity(9, 9) * Complex64::new(1.0 / 9.0, 0.0)).unwrap();
        let (lhs, verdict) = qutrit_cover_witness(&mixed).unwrap();
        assert!(lhs.abs() < 1e-12);
        assert_eq!(verdict, WitnessVerdict::Undecided);

        // (2/3)(2|2 - 5p| - 5p + 8) against direct evaluation.
        for p in [0.0, 0.2, 0.4, 0.6, 1.0] {
            let (lhs, _) = qutrit_cover_witness(&qutrit_mixture(p)).unwrap();
            let formula = 2.0 / 3.0 * (2.0 * (2.0 - 5.0 * p).abs() - 5.0 * p + 8.0);
            assert!((lhs - formula).abs() < 1e-9, "p={p}: {lhs} vs {formula}");
        }
        let (min_lhs, _) = qutrit_cover_witness(&qutrit_mixture(0.4)).unwrap();
        assert!((min_lhs - 4.0).abs() < 1e-9);

        let (lhs, verdict) = qutrit_cover_witness(&unfaithful()).unwrap();
        assert!((lhs - 4.8514).abs() < 1e-3, "unfaithful lhs {lhs}");
        assert_eq!(verdict, WitnessVerdict::Entangled);
    }

    #[test]
    fn ghz_criterion_bounds() {
        let stabs = ghz_stabilizers();
        let criterion = multipartite_criterion(&stabs, &[1.0; 7]).unwrap();
        assert_eq!(criterion.biseparable_bound, 3.0);
        let rho = DensityMatrix::from_pure(&ghz(0));
        let (value, verdict) = criterion.evaluate_state(&rho, &stabs).unwrap();
        assert!((value - 7.0).abs() < 1e-9);
        assert_eq!(verdict, EntanglementStructure::GenuinelyMultipartite);

        let weighted = multipartite_criterion(&stabs, &[0.0, 1.0, 1.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(weighted.stabilizer_value, 4.0);
        assert_eq!(weighted.biseparable_bound, 3.0);
        assert_eq!(weighted.fully_separable_bound, 2.0);
    }

    #[test]
    fn ghz_criterion_t1_formula() {
        // t_bp = w_3 + max{w_1 + w_2, w_4 + w_7, w_5 + w_6} for the 1|23 split.
        use rand::Rng;
        let stabs = ghz_stabilizers();
        let mut rng = rand::rngs::StdRng::seed_from_u64(53);
        for _ in 0..5 {
            let w: Vec<f64> = (0..7).map(|_| f64::from(rng.random_range(0..4u32))).collect();
            let criterion = multipartite_criterion(&stabs, &w).unwrap();
            let t1 = criterion
                .bounds
                .iter()
                .find(|b| b.parties == vec![0])
                .expect("1|23 split present");
            let expect =
                w[2] + (w[0] + w[1]).max(w[3] + w[6]).max(w[4] + w[5]);
            assert!((t1.threshold - expect).abs() < 1e-9, "w={w:?}");
            assert!(t1.threshold_exact);
        }
    }

    #[test]
    fn ghz_entanglement_estimates() {
        let stabs = ghz_stabilizers();
        let criterion = multipartite_criterion(&stabs, &[1.0; 7]).unwrap();
        let rho = DensityMatrix::from_pure(&ghz(0));
        let exps = stabilizer_expectations(&rho, &stabs).unwrap();
        let est = entanglement_estimates(&exps, &criterion, &stabs).unwrap();
        assert!((est.lambda_gap - 8.0).abs() < 1e-9);
        assert!((est.d_taxicab - 4.0).abs() < 1e-9);
        assert!((est.e_t_lower - 0.5).abs() < 1e-9);
        assert!(est.e_hs_lower > 0.0);

        // A point inside the hull has zero distance.
        let inside = vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let est = entanglement_estimates(&inside, &criterion, &stabs).unwrap();
        assert!(est.d_taxicab.abs() < 1e-9);
        assert!(est.e_hs_lower.abs() < 1e-6);
    }

    #[test]
    fn lambda_gap_is_eight_for_all_sign_patterns() {
        let stabs = ghz_stabilizers();
        let ops: Vec<CMatrix> = stabs.iter().map(|s| s.to_dense().unwrap()).collect();
        for bits in 0u32..(1 << 7) {
            let mut h = CMatrix::zeros(8, 8);
            for (i, op) in ops.iter().enumerate() {
                let s = if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
                h += op * Complex64::new(s, 0.0);
            }
            let (vals, _) = linalg::hermitian_eigen(&h);
            assert!((vals[7] - vals[0] - 8.0).abs() < 1e-9, "pattern {bits:b}");
        }
    }

    #[test]
    fn delta_bounds_cases() {
        let cfg = SolverConfig { tol: 1e-9, ..Default::default() };
        // K_n: all bounds collapse to 1/n.
        let b = delta_bounds(&fixtures::complete(4).unwrap(), None, &cfg).unwrap();
        assert_eq!(b.lower.0, "1/4");
        assert!((b.upper - 0.25).abs() < 1e-5);
        let (lo, hi) = b.transitive_exact.unwrap();
        assert!((lo - 0.25).abs() < 1e-6 && (hi - 0.25).abs() < 1e-4);

        // C5: exact 2/5 from the transitive shortcut and the packing bound.
        let b = delta_bounds(&fixtures::cycle(5).unwrap(), None, &cfg).unwrap();
        assert_eq!(b.lower.0, "2/5");
        let (lo, hi) = b.transitive_exact.unwrap();
        assert!(lo > 0.4 - 1e-6 && hi < 0.4 + 1e-4, "bracket [{lo}, {hi}]");

        // Anti-heptagon: lower 2/7, upper 1/theta(C7).
        let b = delta_bounds(&fixtures::anticycle(7).unwrap(), None, &cfg).unwrap();
        assert_eq!(b.lower.0, "2/7");
        let theta_c7 = {
            let c = (std::f64::consts::PI / 7.0).cos();
            7.0 * c / (1.0 + c)
        };
        assert!((b.upper - 1.0 / theta_c7).abs() < 1e-5, "upper {}", b.upper);
        let (lo, hi) = b.transitive_exact.unwrap();
        assert!(b.lower.1 <= hi + 1e-9 && lo <= b.upper + 1e-4);
    }

    #[test]
    fn delta_ordering_on_random_graphs() {
        use rand::Rng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(59);
        let cfg = SolverConfig::default();
        for _ in 0..6 {
            let n = rng.random_range(2..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let b = delta_bounds(&g, None, &cfg).unwrap();
            assert!(b.lower.1 <= b.upper + 1e-9, "bracket inverted on {g:?}");
        }
    }

    #[test]
    fn uncertainty_lp_cases() {
        let k3 = fixtures::complete(3).unwrap();
        // Caps zero on both partners are infeasible on the triangle.
        assert!(matches!(
            uncertainty_lp(&k3, 0, &[(1, 0.0), (2, 0.0)], true),
            Err(AppsError::Infeasible)
        ));
        // Caps 1/2 leave the target variance free to vanish.
        let out = uncertainty_lp(&k3, 0, &[(1, 0.5), (2, 0.5)], true).unwrap();
        assert_eq!(out.min_variance, "0");
        // All caps at one: no restriction.
        let out = uncertainty_lp(&k3, 0, &[(1, 1.0), (2, 1.0)], true).unwrap();
        assert_eq!(out.min_variance, "0");
        assert!(uncertainty_lp(&k3, 0, &[(1, 1.5)], true).is_err());
    }

    #[test]
    fn uncertainty_lp_matches_sdp_on_c5() {
        let c5 = fixtures::cycle(5).unwrap();
        let cfg = SolverConfig { tol: 1e-9, ..Default::default() };
        for caps in [
            vec![(1usize, 0.6), (2, 0.7), (3, 0.8), (4, 0.9)],
            vec![(1, 1.0), (2, 0.5), (3, 1.0), (4, 0.5)],
        ] {
            let lp = uncertainty_lp(&c5, 0, &caps, true).unwrap();
            let sdp =
                crate::moment::uncertainty_sdp(&c5, 0, &caps, BasisLevel::B, &cfg).unwrap();
            assert!(
                (lp.min_variance_f64 - sdp.value).abs() < 1e-4,
                "caps {caps:?}: lp {} vs sdp {}",
                lp.min_variance_f64,
                sdp.value
            );
        }
    }

    #[test]
    fn ground_bound_ring_models() {
        for (n, expect_gap) in [(2usize, 0.084594), (3, 0.13099), (4, 0.098687)] {
            let strings = ring_model_strings(n);
            let g = frustration_graph(&strings).unwrap();
            assert_eq!(g, fixtures::cycle(2 * n + 1).unwrap());
            let r = Realization::new(strings, g).unwrap();
            let a = vec![1.0; 2 * n + 1];
            let out = ground_bound(&a, &r).unwrap();
            let expect_bound = -((n * (2 * n + 1)) as f64).sqrt();
            assert!((out.bound - expect_bound).abs() < 1e-6, "bound {}", out.bound);
            let exact = out.exact_energy.unwrap();
            assert!(out.bound <= exact + 1e-9);
            assert!((exact - out.bound - expect_gap).abs() < 1e-4, "gap {}", exact - out.bound);
        }
    }

    #[test]
    fn ground_bound_heisenberg_pair() {
        let strings = heisenberg_pair_strings();
        let g = frustration_graph(&strings).unwrap();
        let r = Realization::new(strings, g).unwrap();
        let a = vec![1.0; 6];
        let out = ground_bound_at(&a, &r, &[2.0, 2.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!((out.objective - 15.0).abs() < 1e-9);
        assert!((out.bound + 15f64.sqrt()).abs() < 1e-9);
        let exact = out.exact_energy.unwrap();
        assert!((exact + 3.722935).abs() < 1e-5, "exact {exact}");
        assert!(out.bound <= exact);

        // Single string: bound is exact.
        let z = Realization::new(vec!["Z".parse().unwrap()], fixtures::empty(1).unwrap()).unwrap();
        let out = ground_bound(&[1.0], &z).unwrap();
        assert!((out.bound + 1.0).abs() < 1e-5);
        assert!((out.exact_energy.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_bound_below_exact_on_random_models() {
        use rand::Rng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(61);
        for _ in 0..50 {
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
            let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let out = ground_bound(&a, &r).unwrap();
            let exact = out.exact_energy.unwrap();
            assert!(out.bound <= exact + 1e-9, "bound {} above exact {exact}", out.bound);
        }
    }

    #[test]
    fn variance_polytope_identity() {
        // min over STAB of sum w_i (1 - x_i) equals sum w_i - alpha(G, w).
        use rand::Rng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(67);
        for g in [fixtures::cycle(5).unwrap(), fixtures::complete(4).unwrap()] {
            let p = StabPolytope::of(&g).unwrap();
            for _ in 0..10 {
                let w: Vec<i64> = (0..g.n()).map(|_| rng.random_range(0..5)).collect();
                let wq = crate::weights_from_ints(&w);
                let (alpha, _) = stab::alpha(&g, &wq).unwrap();
                let best = p
                    .vertices()
                    .iter()
                    .map(|&set| {
                        w.iter()
                            .enumerate()
                            .map(|(i, &wi)| if set >> i & 1 == 1 { 0 } else { wi })
                            .sum::<i64>()
                    })
                    .min()
                    .unwrap();
                let total: i64 = w.iter().sum();
                assert_eq!(
                    Rational::from_integer(best.into()),
                    Rational::from_integer(total.into()) - alpha
                );
            }
        }
    }
}
