//! Dense two-phase simplex for the tiny programs behind `cl(H + P)` levels.

const EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum LpResult {
    Optimal(f64),
    Unbounded,
    Infeasible,
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.t)
            .map(|(&b, row)| cost[b] * row[self.cols])
            .sum()
    }

    /// Maximizes `cost` over columns with `allowed[j]`, by Bland's rule.
    /// Returns `false` when unbounded.
    fn run(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..self.cols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let rc = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.t)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                rc > EPS
            });
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(f64, usize)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[c] > EPS {
                    let ratio = row[self.cols] / row[c];
                    let better = match best {
                        None => true,
                        Some((r, k)) => ratio < r - EPS || (ratio <= r + EPS && self.basis[i] < self.basis[k]),
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, r)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
        panic!("simplex did not terminate within {MAX_PIVOTS} pivots");
    }
}

/// Maximizes `c·v` subject to `rows[i]·v ≤ rhs[i]` over free `v`.
pub(crate) fn maximize(c: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> LpResult {
    let d = c.len();
    let m = rows.len();
    let n_art = rhs.iter().filter(|&&b| b < 0.0).count();
    // Columns: v⁺, v⁻, slacks, artificials.
    let cols = 2 * d + m + n_art;
    let mut t = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    let mut art = 2 * d + m;
    for (i, (row, &b)) in rows.iter().zip(rhs).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        for j in 0..d {
            t[i][j] = sign * row[j];
            t[i][d + j] = -sign * row[j];
        }
        t[i][2 * d + i] = sign;
        t[i][cols] = sign * b;
        if b < 0.0 {
            t[i][art] = 1.0;
            basis[i] = art;
            art += 1;
        } else {
            basis[i] = 2 * d + i;
        }
    }
    let mut tab = Tableau { t, basis, cols };
    let mut allowed = vec![true; cols];
    if n_art > 0 {
        let mut cost = vec![0.0; cols];
        for v in &mut cost[2 * d + m..] {
            *v = -1.0;
        }
        tab.run(&cost, &allowed);
        let scale = rhs.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
        if tab.objective(&cost) < -1e-9 * scale {
            return LpResult::Infeasible;
        }
        for i in 0..m {
            if tab.basis[i] >= 2 * d + m {
                if let Some(j) = (0..2 * d + m).find(|&j| tab.t[i][j].abs() > 1e-9) {
                    tab.pivot(i, j);
                }
            }
        }
        for a in &mut allowed[2 * d + m..] {
            *a = false;
        }
    }
    let mut cost = vec![0.0; cols];
    for j in 0..d {
        cost[j] = c[j];
        cost[d + j] = -c[j];
    }
    if !tab.run(&cost, &allowed) {
        return LpResult::Unbounded;
    }
    LpResult::Optimal(tab.objective(&cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_free_program() {
        // max s : y0 + s ≤ 1.09, y1 + s ≤ −1.09, y0 ≤ 0, −y1 ≤ 0
        let rows = vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ];
        let r = maximize(&[1.0, 0.0, 0.0], &rows, &[1.09, -1.09, 0.0, 0.0]);
        assert_eq!(r, LpResult::Optimal(-1.09));
    }

    #[test]
    fn unbounded_and_infeasible() {
        assert_eq!(maximize(&[1.0], &[vec![-1.0]], &[0.0]), LpResult::Unbounded);
        assert_eq!(
            maximize(&[1.0], &[vec![1.0], vec![-1.0]], &[-1.0, 0.0]),
            LpResult::Infeasible
        );
    }

    #[test]
    fn matches_vertex_enumeration() {
        // max x + 2y over a pentagon.
        let rows = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let r = maximize(&[1.0, 2.0], &rows, &[3.0, 2.0, 4.0, 1.0, 1.0]);
        assert_eq!(r, LpResult::Optimal(6.0));
    }
}
