//! Shared numerical kernels: Hermitian eigendecompositions, a matrix-free
//! Lanczos iteration with full reorthogonalization, and the cone projections
//! used by the first-order SDP solver and the state-extraction routines.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues ascending together with the unitary of eigenvectors (columns).
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = h.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = CMatrix::from_columns(
        &idx.iter().map(|&i| se.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
pub fn top_eigenpair(h: &CMatrix) -> (f64, CVector) {
    let (vals, vecs) = hermitian_eigen(h);
    let last = vals.len() - 1;
    (vals[last], vecs.column(last).into_owned())
}

/// Real part of `<psi| op |psi>`; exact up to roundoff for Hermitian `op`.
pub fn expectation(op: &CMatrix, psi: &CVector) -> f64 {
    psi.dotc(&(op * psi)).re
}

pub fn random_unit_state(dim: usize, rng: &mut impl Rng) -> CVector {
    let mut v = CVector::from_fn(dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let n = v.norm();
    v /= Complex64::new(n, 0.0);
    v
}

/// Euclidean projection of eigenvalues onto the probability simplex.
pub fn simplex_project(vals: &[f64]) -> Vec<f64> {
    let mut sorted = vals.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    vals.iter().map(|&v| (v - theta).max(0.0)).collect()
}

/// Nearest density matrix: Hermitian part, then eigenvalues onto the simplex.
pub fn density_project(m: &CMatrix) -> CMatrix {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let (vals, vecs) = hermitian_eigen(&herm);
    let clipped = simplex_project(&vals);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        clipped.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Projection of a real symmetric matrix onto the PSD cone; also returns the
/// smallest eigenvalue seen (diagnostic for solver certificates).
pub fn psd_project(m: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let se = m.clone().symmetric_eigen();
    let min = se.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min >= 0.0 {
        return (m.clone(), min);
    }
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (i, &lam) in se.eigenvalues.iter().enumerate() {
        if lam > 0.0 {
            let v = se.eigenvectors.column(i).into_owned();
            out += lam * &v * v.transpose();
        }
    }
    (out, min)
}

/// Largest eigenpair of a symmetric operator given only its action, by Lanczos
/// with full reorthogonalization and restarts. Converged when the residual
/// `|H v - lambda v|` drops below `tol`.
pub fn lanczos_top<F: FnMut(&[f64], &mut [f64])>(
    dim: usize,
    mut apply: F,
    start: Option<Vec<f64>>,
    tol: f64,
    max_rounds: usize,
) -> (f64, Vec<f64>, usize) {
    assert!(dim >= 1);
    if dim == 1 {
        let mut out = vec![0.0];
        apply(&[1.0], &mut out);
        return (out[0], vec![1.0], 1);
    }
    let block = 80.min(dim);
    let mut v0: Vec<f64> = start.unwrap_or_else(|| {
        // Deterministic start with full support.
        (0..dim).map(|i| ((i as f64 + 1.0) * 0.7390851332151607).sin() + 0.01).collect()
    });
    normalize(&mut v0);
    let mut iterations = 0;
    let mut best = (f64::NEG_INFINITY, v0.clone());
    for _ in 0..max_rounds {
        let mut basis: Vec<Vec<f64>> = vec![v0.clone()];
        let mut alphas = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        for j in 0..block {
            apply(&basis[j], &mut w);
            iterations += 1;
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            // Three-term recurrence, then a full reorthogonalization pass.
            axpy(&mut w, -alpha, &basis[j]);
            if j > 0 {
                axpy(&mut w, -betas[j - 1], &basis[j - 1]);
            }
            for b in &basis {
                let c = dot(&w, b);
                axpy(&mut w, -c, b);
            }
            let beta = norm(&w);
            if beta < 1e-14 || j + 1 == block || basis.len() == dim {
                break;
            }
            betas.push(beta);
            let mut next = w.clone();
            scale(&mut next, 1.0 / beta);
            basis.push(next);
        }
        let k = alphas.len();
        let mut tri = DMatrix::zeros(k, k);
        for i in 0..k {
            tri[(i, i)] = alphas[i];
            if i + 1 < k {
                tri[(i, i + 1)] = betas[i];
                tri[(i + 1, i)] = betas[i];
            }
        }
        let se = tri.symmetric_eigen();
        let (top_idx, &lam) = se
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let coeffs = se.eigenvectors.column(top_idx);
        let mut ritz = vec![0.0; dim];
        for (j, b) in basis.iter().enumerate() {
            axpy(&mut ritz, coeffs[j], b);
        }
        normalize(&mut ritz);
        let mut hv = vec![0.0; dim];
        apply(&ritz, &mut hv);
        iterations += 1;
        axpy(&mut hv, -lam, &ritz);
        let residual = norm(&hv);
        if lam > best.0 {
            best = (lam, ritz.clone());
        }
        if residual < tol {
            return (lam, ritz, iterations);
        }
        v0 = ritz;
    }
    (best.0, best.1, iterations)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn scale(a: &mut [f64], s: f64) {
    for x in a.iter_mut() {
        *x *= s;
    }
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    assert!(n > 0.0, "zero start vector");
    scale(a, 1.0 / n);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn hermitian_eigen_of_pauli_sum() {
        // (X + Z)/sqrt(2) has eigenvalues -1, 1.
        let s = 1.0 / 2f64.sqrt();
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(s, 0.),
                Complex64::new(s, 0.),
                Complex64::new(s, 0.),
                Complex64::new(-s, 0.),
            ],
        );
        let (vals, _) = hermitian_eigen(&h);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let (top, v) = top_eigenpair(&h);
        assert!((top - 1.0).abs() < 1e-12);
        assert!((expectation(&h, &v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_projection_properties() {
        let p = simplex_project(&[0.5, 0.3, 0.4]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let p = simplex_project(&[-1.0, 2.0, 0.1]);
        assert!(p.iter().all(|&x| x >= 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_projection_is_valid_state() {
        let mut rng = StdRng::seed_from_u64(9);
        let m = CMatrix::from_fn(6, 6, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let rho = density_project(&m);
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!((&rho - rho.adjoint()).norm() < 1e-12);
        let (vals, _) = hermitian_eigen(&rho);
        assert!(vals[0] > -1e-10);
    }

    #[test]
    fn psd_projection() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let (p, min) = psd_project(&m);
        assert_eq!(min, -2.0);
        assert!((p - DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense_on_random_symmetric() {
        let mut rng = StdRng::seed_from_u64(10);
        for &n in &[3usize, 17, 60, 180] {
            let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
            let sym = (&a + a.transpose()) * 0.5;
            let dense_top = sym
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            let (lam, v, _) = lanczos_top(
                n,
                |x, out| {
                    let xv = DVector::from_column_slice(x);
                    out.copy_from_slice((&sym * xv).as_slice());
                },
                None,
                1e-10,
                50,
            );
            assert!((lam - dense_top).abs() < 1e-8, "n={n}: {lam} vs {dense_top}");
            let xv = DVector::from_column_slice(&v);
            let r = &sym * &xv - xv * lam;
            assert!(r.norm() < 1e-8);
        }
    }
}
