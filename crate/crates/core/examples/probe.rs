use hbar_core::graph::fixtures::*;
use hbar_core::moment::*;
fn main() {
    let cfg = SolverConfig { tol: 1e-7, max_iters: 20_000, ..Default::default() };
    for (name, g, w) in [
        ("C5-C", cycle(5).unwrap(), vec![1.0; 5]),
        ("G7-C", g7(), vec![1.0; 7]),
    ] {
        let t = std::time::Instant::now();
        let sol = lambda_r(&g, &w, BasisLevel::C, &cfg).unwrap();
        println!("{name}: value {:.8} conv {} iters {} pr {:.2e} dr {:.2e} in {:?}",
            sol.value, sol.converged, sol.iterations, sol.primal_residual, sol.dual_residual, t.elapsed());
    }
}
