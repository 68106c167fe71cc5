//! Exact rational simplex with Bland's rule on a dense tableau.
//!
//! All LPs in this crate are tiny (tens of variables), so determinism and
//! exactness win over speed: no scaling, no revised form, no cycling thanks to
//! Bland's pivot choice. Variables are implicitly nonnegative.

use crate::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, cmp: Cmp, rhs: Rational) -> Self {
        Constraint { coeffs, cmp, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Optimal value and one optimal point.
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Maximize `objective·x` over `x ≥ 0` subject to `constraints`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    solve(objective, constraints, true)
}

/// Minimize `objective·x` over `x ≥ 0` subject to `constraints`.
pub fn minimize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    solve(objective, constraints, false)
}

struct Tableau {
    // rows[i] holds the coefficients of row i over all columns; col `ncols-1` is
    // the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x /= &piv;
        }
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..self.ncols {
                let delta = &factor * &self.rows[row][c];
                self.rows[r][c] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced cost row for `costs` over basic solution; entry per column.
    fn reduced_costs(&self, costs: &[Rational]) -> Vec<Rational> {
        let mut red = costs.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            if costs[b].is_zero() {
                continue;
            }
            let cb = costs[b].clone();
            for c in 0..costs.len() {
                let delta = &cb * &self.rows[r][c];
                red[c] -= delta;
            }
        }
        red
    }

    /// One Bland step minimizing `costs`; returns false when optimal, error on
    /// unbounded direction.
    fn bland_step(&mut self, costs: &[Rational]) -> Result<bool, ()> {
        let red = self.reduced_costs(costs);
        let Some(col) = (0..costs.len()).find(|&c| red[c].is_negative()) else {
            return Ok(false);
        };
        let rhs = self.ncols - 1;
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..self.rows.len() {
            if self.rows[r][col].is_positive() {
                let ratio = &self.rows[r][rhs] / &self.rows[r][col];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        match best {
            Some((r, _)) => {
                self.pivot(r, col);
                Ok(true)
            }
            None => Err(()),
        }
    }
}

fn solve(objective: &[Rational], constraints: &[Constraint], max: bool) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    // Normalize rows to nonnegative rhs.
    let mut rows: Vec<(Vec<Rational>, Cmp, Rational)> = constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), n, "constraint arity mismatch");
            if c.rhs.is_negative() {
                let coeffs = c.coeffs.iter().map(|x| -x.clone()).collect();
                let cmp = match c.cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
                (coeffs, cmp, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.cmp, c.rhs.clone())
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Cmp::Le).count();
    let ncols = n + n_slack + n_art + 1;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: vec![0; m], ncols };

    let mut slack_at = n;
    let mut art_at = n + n_slack;
    let mut art_cols = Vec::new();
    for (i, (coeffs, cmp, rhs)) in rows.drain(..).enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        row[..n].clone_from_slice(&coeffs);
        row[ncols - 1] = rhs;
        match cmp {
            Cmp::Le => {
                row[slack_at] = Rational::one();
                tab.basis[i] = slack_at;
                slack_at += 1;
            }
            Cmp::Ge => {
                row[slack_at] = -Rational::one();
                slack_at += 1;
                row[art_at] = Rational::one();
                tab.basis[i] = art_at;
                art_cols.push(art_at);
                art_at += 1;
            }
            Cmp::Eq => {
                row[art_at] = Rational::one();
                tab.basis[i] = art_at;
                art_cols.push(art_at);
                art_at += 1;
            }
        }
        tab.rows.push(row);
    }

    // Phase 1: minimize the artificial sum.
    if !art_cols.is_empty() {
        let mut costs = vec![Rational::zero(); ncols - 1];
        for &c in &art_cols {
            costs[c] = Rational::one();
        }
        loop {
            match tab.bland_step(&costs) {
                Ok(true) => {}
                Ok(false) => break,
                Err(()) => unreachable!("phase-1 objective is bounded below by zero"),
            }
        }
        let rhs_col = ncols - 1;
        let art_value: Rational = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| art_cols.contains(&b))
            .map(|(r, _)| tab.rows[r][rhs_col].clone())
            .sum();
        if !art_value.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Pivot lingering artificials out of the basis when possible.
        for r in 0..m {
            if art_cols.contains(&tab.basis[r]) {
                if let Some(col) =
                    (0..n + n_slack).find(|&c| !tab.rows[r][c].is_zero())
                {
                    tab.pivot(r, col);
                }
                // A fully zero row is a redundant constraint; leave it.
            }
        }
    }

    // Phase 2 on the real objective, with artificial columns barred.
    let mut costs = vec![Rational::zero(); ncols - 1];
    for (c, obj) in objective.iter().enumerate() {
        costs[c] = if max { -obj.clone() } else { obj.clone() };
    }
    let barred = art_cols;
    loop {
        // Bland step that skips barred columns.
        let red = tab.reduced_costs(&costs);
        let enter = (0..ncols - 1).find(|c| !barred.contains(c) && red[*c].is_negative());
        let Some(col) = enter else { break };
        let rhs_col = ncols - 1;
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..m {
            if tab.rows[r][col].is_positive() {
                let ratio = &tab.rows[r][rhs_col] / &tab.rows[r][col];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && tab.basis[r] < tab.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        match best {
            Some((r, _)) => tab.pivot(r, col),
            None => return LpOutcome::Unbounded,
        }
    }

    let mut point = vec![Rational::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = tab.rows[r][ncols - 1].clone();
        }
    }
    let value: Rational = objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();
    LpOutcome::Optimal { value, point }
}

/// Is `x` a convex combination of `points`? Exact feasibility via phase 1.
pub fn in_convex_hull(points: &[Vec<Rational>], x: &[Rational]) -> bool {
    let k = points.len();
    if k == 0 {
        return false;
    }
    let dim = x.len();
    let mut constraints = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        let coeffs = points.iter().map(|p| p[d].clone()).collect();
        constraints.push(Constraint::new(coeffs, Cmp::Eq, x[d].clone()));
    }
    constraints.push(Constraint::new(vec![Rational::one(); k], Cmp::Eq, Rational::one()));
    let objective = vec![Rational::zero(); k];
    !matches!(maximize(&objective, &constraints), LpOutcome::Infeasible)
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_max() {
        // max x + y st x + 2y <= 4, 3x + y <= 6 -> (8/5, 6/5), value 14/5.
        let out = maximize(
            &[int(1), int(1)],
            &[
                Constraint::new(vec![int(1), int(2)], Cmp::Le, int(4)),
                Constraint::new(vec![int(3), int(1)], Cmp::Le, int(6)),
            ],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal { value: rational(14, 5), point: vec![rational(8, 5), rational(6, 5)] }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let out = maximize(
            &[int(1)],
            &[
                Constraint::new(vec![int(1)], Cmp::Ge, int(3)),
                Constraint::new(vec![int(1)], Cmp::Le, int(2)),
            ],
        );
        assert_eq!(out, LpOutcome::Infeasible);

        let out = maximize(&[int(1)], &[Constraint::new(vec![int(0)], Cmp::Le, int(1))]);
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_min() {
        // min x + y st x + y >= 2, x - y = 1 -> (3/2, 1/2).
        let out = minimize(
            &[int(1), int(1)],
            &[
                Constraint::new(vec![int(1), int(1)], Cmp::Ge, int(2)),
                Constraint::new(vec![int(1), int(-1)], Cmp::Eq, int(1)),
            ],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal { value: int(2), point: vec![rational(3, 2), rational(1, 2)] }
        );
    }

    #[test]
    fn hull_membership() {
        let square = vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ];
        assert!(in_convex_hull(&square, &[rational(1, 2), rational(1, 3)]));
        assert!(!in_convex_hull(&square, &[rational(3, 2), rational(1, 3)]));
    }
}
