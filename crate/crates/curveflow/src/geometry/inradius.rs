//! Largest inscribed disk via a three-variable linear program.
//!
//! Primal: maximize `t` over `(c_x, c_y, t)` subject to
//! `t - c_x cos θ_i - c_y sin θ_i ≤ S_i` for every grid node. We run the
//! simplex method on the dual,
//!
//! ```text
//! min Σ λ_i S_i   s.t.   Σ λ_i cos θ_i = 0,  Σ λ_i sin θ_i = 0,  Σ λ_i = 1,  λ ≥ 0,
//! ```
//!
//! which has only three rows, so every iteration is a pair of 3×3 solves.
//! The primal optimum is read off the final dual multipliers.

use super::ThetaGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct InradiusSolution {
    pub radius: f64,
    pub center: (f64, f64),
}

struct Columns<'a> {
    grid: ThetaGrid,
    support: &'a [f64],
}

impl Columns<'_> {
    fn column(&self, i: usize) -> [f64; 3] {
        let t = self.grid.node(i);
        [t.cos(), t.sin(), 1.0]
    }

    fn cost(&self, i: usize) -> f64 {
        self.support[i]
    }
}

pub(super) fn solve(grid: ThetaGrid, support: &[f64]) -> Result<InradiusSolution> {
    let m = grid.len();
    let cols = Columns { grid, support };
    let scale = support.iter().fold(0.0f64, |acc, s| acc.max(s.abs())).max(1.0);
    let tol = 1e-12 * scale;

    // Angles ~120° apart always contain the origin in their convex hull,
    // so this basis is feasible for any even M ≥ 16.
    let mut basis = [0usize, m / 3, 2 * m / 3];
    let max_iters = 20 * m;

    for iter in 0..max_iters {
        let b = basis_matrix(&cols, &basis);
        let lambda = solve3(&b, [0.0, 0.0, 1.0]).ok_or(Error::InfeasibleLp)?;
        let bt = transpose(&b);
        let y = solve3(&bt, [cols.cost(basis[0]), cols.cost(basis[1]), cols.cost(basis[2])])
            .ok_or(Error::InfeasibleLp)?;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::InfeasibleLp);
        }

        // Price out. Dantzig rule with lowest-index ties is deterministic;
        // switch to Bland's rule late to rule out cycling.
        let bland = iter > 4 * m;
        let mut entering = None;
        let mut best = -tol;
        for i in 0..m {
            if basis.contains(&i) {
                continue;
            }
            let a = cols.column(i);
            let reduced = cols.cost(i) - (y[0] * a[0] + y[1] * a[1] + y[2] * a[2]);
            if reduced < best {
                entering = Some(i);
                if bland {
                    break;
                }
                best = reduced;
            }
        }
        let Some(entering) = entering else {
            // Optimal: dual multipliers are the primal (center, radius).
            return Ok(InradiusSolution { radius: y[2], center: (-y[0], -y[1]) });
        };

        let w = solve3(&b, cols.column(entering)).ok_or(Error::InfeasibleLp)?;
        let mut leaving = None;
        let mut best_ratio = f64::INFINITY;
        for j in 0..3 {
            if w[j] > tol {
                let ratio = lambda[j] / w[j];
                if ratio < best_ratio {
                    best_ratio = ratio;
                    leaving = Some(j);
                }
            }
        }
        let Some(leaving) = leaving else {
            return Err(Error::InfeasibleLp);
        };
        basis[leaving] = entering;
    }
    Err(Error::InfeasibleLp)
}

fn basis_matrix(cols: &Columns<'_>, basis: &[usize; 3]) -> [[f64; 3]; 3] {
    let mut b = [[0.0; 3]; 3];
    for (j, &idx) in basis.iter().enumerate() {
        let a = cols.column(idx);
        for row in 0..3 {
            b[row][j] = a[row];
        }
    }
    b
}

fn transpose(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// Gaussian elimination with partial pivoting; `None` on singular systems.
fn solve3(a: &[[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = *a;
    let mut b = rhs;
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).expect("finite pivot")
        })?;
        if m[pivot][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}
