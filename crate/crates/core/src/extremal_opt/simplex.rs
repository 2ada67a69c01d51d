//! Dense bounded-variable primal simplex.
//!
//! Instances here have a handful of rows and a few hundred columns, so the full
//! tableau is kept and updated by explicit pivots.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub kind: RowKind,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexResult {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

const COST_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 50_000;
const DEGENERATE_SWITCH: usize = 50;

struct Tableau {
    m: usize,
    t: Vec<Vec<f64>>, // m rows × total columns, B⁻¹A
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Tableau {
    fn run(&mut self, cost: &[f64]) -> Outcome {
        let ncol = self.x.len();
        let mut degenerate = 0usize;
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Outcome::IterationLimit;
            }
            // Reduced costs.
            let bland = degenerate >= DEGENERATE_SWITCH;
            let mut enter: Option<(usize, f64, f64)> = None; // (column, direction, |d|)
            for j in 0..ncol {
                if self.is_basic[j] || self.lo[j] == self.hi[j] {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..self.m {
                    d -= cost[self.basis[i]] * self.t[i][j];
                }
                let can_up = self.x[j] < self.hi[j];
                let can_down = self.x[j] > self.lo[j];
                let dir = if d < -COST_TOL && can_up {
                    1.0
                } else if d > COST_TOL && can_down {
                    -1.0
                } else {
                    continue;
                };
                if bland {
                    enter = Some((j, dir, d.abs()));
                    break;
                }
                if enter.is_none_or(|e| d.abs() > e.2) {
                    enter = Some((j, dir, d.abs()));
                }
            }
            let Some((j, dir, _)) = enter else {
                return Outcome::Optimal;
            };

            let mut step = self.hi[j] - self.lo[j];
            let mut leave: Option<(usize, f64)> = None; // (row, bound hit)
            for i in 0..self.m {
                let delta = -dir * self.t[i][j];
                if delta.abs() <= PIVOT_TOL {
                    continue;
                }
                let b = self.basis[i];
                let (limit, bound) = if delta < 0.0 {
                    ((self.x[b] - self.lo[b]) / -delta, self.lo[b])
                } else {
                    ((self.hi[b] - self.x[b]) / delta, self.hi[b])
                };
                let limit = limit.max(0.0);
                let better = match leave {
                    None => limit < step,
                    Some((r, _)) => {
                        limit < step || (bland && limit == step && self.basis[i] < self.basis[r])
                    }
                };
                if better {
                    step = limit;
                    leave = Some((i, bound));
                }
            }
            if !step.is_finite() {
                return Outcome::Unbounded;
            }
            self.iterations += 1;
            degenerate = if step <= 1e-14 { degenerate + 1 } else { 0 };

            for i in 0..self.m {
                let b = self.basis[i];
                self.x[b] -= dir * step * self.t[i][j];
            }
            self.x[j] += dir * step;

            if let Some((r, bound)) = leave {
                let out = self.basis[r];
                self.x[out] = bound;
                self.pivot(r, j);
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i][j];
            if f != 0.0 {
                for (v, pr) in self.t[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
            }
        }
        let out = self.basis[r];
        self.is_basic[out] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            rows: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, kind: RowKind, rhs: f64) {
        self.rows.push(Row { coeffs, kind, rhs });
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of rows and bounds at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let v = match r.kind {
                RowKind::Le => lhs - r.rhs,
                RowKind::Ge => r.rhs - lhs,
                RowKind::Eq => (lhs - r.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (i, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[i] - v).max(v - self.upper[i]);
        }
        worst
    }

    pub fn solve(&self) -> SimplexResult {
        let n = self.objective.len();
        let m = self.rows.len();
        let total = n + 2 * m;
        let mut lo = self.lower.clone();
        let mut hi = self.upper.clone();
        for r in &self.rows {
            let (l, h) = match r.kind {
                RowKind::Le => (0.0, f64::INFINITY),
                RowKind::Ge => (f64::NEG_INFINITY, 0.0),
                RowKind::Eq => (0.0, 0.0),
            };
            lo.push(l);
            hi.push(h);
        }
        lo.extend(std::iter::repeat_n(0.0, m));
        hi.extend(std::iter::repeat_n(f64::INFINITY, m));

        let mut x = vec![0.0; total];
        for j in 0..n {
            x[j] = if lo[j].is_finite() {
                lo[j]
            } else if hi[j].is_finite() {
                hi[j]
            } else {
                0.0
            };
        }

        let mut t = vec![vec![0.0; total]; m];
        for (i, r) in self.rows.iter().enumerate() {
            let residual = r.rhs - r.coeffs.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>();
            let sign = if residual < 0.0 { -1.0 } else { 1.0 };
            // Row normalised so that the artificial has coefficient +1.
            for j in 0..n {
                t[i][j] = sign * r.coeffs[j];
            }
            t[i][n + i] = sign;
            t[i][n + m + i] = 1.0;
            x[n + m + i] = residual.abs();
        }
        let mut is_basic = vec![false; total];
        let basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();
        for &b in &basis {
            is_basic[b] = true;
        }
        let mut tab = Tableau {
            m,
            t,
            basis,
            is_basic,
            x,
            lo,
            hi,
            iterations: 0,
        };

        let mut phase1 = vec![0.0; total];
        for c in &mut phase1[n + m..] {
            *c = 1.0;
        }
        let scale = 1.0 + self.rows.iter().fold(0.0f64, |a, r| a.max(r.rhs.abs()));
        let finish = |tab: &Tableau, status: LpStatus| {
            let xs = tab.x[..n].to_vec();
            SimplexResult {
                status,
                objective: self.value(&xs),
                x: xs,
                iterations: tab.iterations,
            }
        };
        match tab.run(&phase1) {
            Outcome::IterationLimit => return finish(&tab, LpStatus::IterationLimit),
            Outcome::Unbounded => return finish(&tab, LpStatus::Infeasible),
            Outcome::Optimal => {}
        }
        let infeasibility: f64 = tab.x[n + m..].iter().sum();
        if infeasibility > FEAS_TOL * scale {
            return finish(&tab, LpStatus::Infeasible);
        }
        for k in n + m..total {
            tab.hi[k] = 0.0;
            if !tab.is_basic[k] {
                tab.x[k] = 0.0;
            }
        }

        let sign = match self.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut phase2 = vec![0.0; total];
        for j in 0..n {
            phase2[j] = sign * self.objective[j];
        }
        let status = match tab.run(&phase2) {
            Outcome::Optimal => LpStatus::Optimal,
            Outcome::Unbounded => LpStatus::Unbounded,
            Outcome::IterationLimit => LpStatus::IterationLimit,
        };
        finish(&tab, status)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36.
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add_row(vec![1.0, 0.0], RowKind::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], RowKind::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], RowKind::Le, 18.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 36.0).abs() < 1e-12);
        assert!((r.x[0] - 2.0).abs() < 1e-12 && (r.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_and_equalities() {
        // min x − y, x + y = 1, x ∈ [−2, 2], y ∈ [−∞, 0.25].
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, -1.0]);
        lp.lower = vec![-2.0, f64::NEG_INFINITY];
        lp.upper = vec![2.0, 0.25];
        lp.add_row(vec![1.0, 1.0], RowKind::Eq, 1.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 0.5).abs() < 1e-12);
        assert!(lp.max_violation(&r.x) < 1e-12);
    }

    #[test]
    fn ge_rows_and_free_variables() {
        // min |shape|: min x, x ≥ −3 via a row, x free.
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.lower = vec![f64::NEG_INFINITY];
        lp.add_row(vec![1.0], RowKind::Ge, -3.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.x[0] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 1.0], RowKind::Le, -1.0);
        assert_eq!(lp.solve().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, -1.0]);
        lp.add_row(vec![1.0, -1.0], RowKind::Ge, 0.0);
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_vertex() {
        // Several constraints meet at the optimum (1, 1).
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 0.0], RowKind::Le, 1.0);
        lp.add_row(vec![0.0, 1.0], RowKind::Le, 1.0);
        lp.add_row(vec![1.0, 1.0], RowKind::Le, 2.0);
        lp.add_row(vec![2.0, 1.0], RowKind::Le, 3.0);
        lp.add_row(vec![1.0, 2.0], RowKind::Le, 3.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 2.0).abs() < 1e-12);
    }
}
