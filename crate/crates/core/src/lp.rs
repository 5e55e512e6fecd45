//! Exact dense simplex for small linear programs.
//!
//! Programs are kept in one canonical form: maximize `c·x` subject to
//! `A x ≤ b` and `x ≥ 0`. Lower bounds and equalities are folded into that
//! form by [`StandardLp::add_ge`] and [`StandardLp::add_eq`]. The solver runs a
//! two-phase tableau simplex over [`Rational`]s with Bland's rule, so it
//! cannot cycle and always returns the same basis for the same input.
//!
//! On optimality the dual prices are read off the final basis: `y_i` is the
//! reduced cost of the slack of row `i`. When the primal is degenerate
//! several dual optima exist and the one returned is whichever the final
//! basis determines.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("requested objective level is not attainable")]
    ValueNotAttainable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// `max objective·x  s.t.  matrix·x ≤ rhs, x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardLp {
    pub objective: Vec<Rational>,
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl StandardLp {
    pub fn new(objective: Vec<Rational>) -> Self {
        StandardLp {
            objective,
            matrix: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.len()
    }

    /// Adds `row·x ≤ rhs`.
    pub fn add_le(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.matrix.push(row);
        self.rhs.push(rhs);
        self
    }

    /// Adds `row·x ≥ rhs` as `-row·x ≤ -rhs`.
    pub fn add_ge(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        let row = row.into_iter().map(|v| -v).collect();
        self.add_le(row, -rhs)
    }

    /// Adds `row·x = rhs` as a pair of opposite inequalities.
    pub fn add_eq(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.add_le(row.clone(), rhs.clone());
        self.add_ge(row, rhs)
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        if self.rhs.len() != self.matrix.len() {
            return Err(LpError::Dimension(format!(
                "{} rows but {} right-hand sides",
                self.matrix.len(),
                self.rhs.len()
            )));
        }
        let width = self.objective.len();
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(LpError::Dimension(format!(
                "row {i} has {} entries, expected {width}",
                row.len()
            )));
        }
        Ok(())
    }

    /// Verifies an optimal outcome exactly: primal feasibility, dual
    /// feasibility (`y ≥ 0`, `Aᵀy ≥ c`) and equal objective values.
    pub fn certifies(&self, outcome: &LpOutcome) -> bool {
        let Some(value) = &outcome.value else {
            return false;
        };
        let x = &outcome.primal;
        let y = &outcome.dual;
        if x.len() != self.num_vars() || y.len() != self.num_rows() {
            return false;
        }
        if x.iter().chain(y.iter()).any(|v| v.is_negative()) {
            return false;
        }
        let primal_ok = self
            .matrix
            .iter()
            .zip(&self.rhs)
            .all(|(row, b)| dot(row, x) <= *b);
        let dual_ok = (0..self.num_vars()).all(|j| {
            let col: Rational = self
                .matrix
                .iter()
                .zip(y)
                .map(|(row, yi)| &row[j] * yi)
                .sum();
            col >= self.objective[j]
        });
        primal_ok && dual_ok && dot(&self.objective, x) == *value && dot(&self.rhs, y) == *value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Objective value, present only when optimal.
    pub value: Option<Rational>,
    pub primal: Vec<Rational>,
    /// One price per row of the program that was solved.
    pub dual: Vec<Rational>,
}

impl LpOutcome {
    fn without_solution(status: LpStatus) -> Self {
        LpOutcome {
            status,
            value: None,
            primal: Vec::new(),
            dual: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn solve(lp: &StandardLp) -> Result<LpOutcome, LpError> {
    lp.check_dimensions()?;
    Ok(Tableau::build(lp).run(lp))
}

/// Among the optimal points of `lp` (whose optimum is `fixed_value`),
/// optimizes `secondary`. The returned value is `secondary·x`; the dual
/// vector belongs to the augmented maximization program (original rows
/// followed by the objective-level row).
pub fn solve_with_value_constraint(
    lp: &StandardLp,
    fixed_value: &Rational,
    secondary: &[Rational],
    direction: Direction,
) -> Result<LpOutcome, LpError> {
    lp.check_dimensions()?;
    if secondary.len() != lp.num_vars() {
        return Err(LpError::Dimension(format!(
            "secondary objective has {} entries, expected {}",
            secondary.len(),
            lp.num_vars()
        )));
    }
    let mut staged = lp.clone();
    staged.add_ge(lp.objective.clone(), fixed_value.clone());
    staged.objective = match direction {
        Direction::Maximize => secondary.to_vec(),
        Direction::Minimize => secondary.iter().map(|v| -v).collect(),
    };
    let mut outcome = solve(&staged)?;
    match outcome.status {
        LpStatus::Infeasible => Err(LpError::ValueNotAttainable),
        LpStatus::Unbounded => Ok(outcome),
        LpStatus::Optimal => {
            outcome.value = Some(dot(secondary, &outcome.primal));
            Ok(outcome)
        }
    }
}

/// Solves a square system exactly; `None` when singular.
pub(crate) fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    let delta = &f * &m[col][j];
                    m[r][j] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column holds the basic values.
    cells: Vec<Vec<Rational>>,
    /// Reduced costs `w_B B⁻¹ A_j - w_j`, last entry is the objective value.
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    structural: usize,
    rows: usize,
    artificial_start: usize,
    cols: usize,
}

impl Tableau {
    fn build(lp: &StandardLp) -> Self {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let negative: Vec<usize> = (0..m).filter(|&i| lp.rhs[i].is_negative()).collect();
        let artificial_start = n + m;
        let cols = artificial_start + negative.len();
        let mut cells = vec![vec![Rational::zero(); cols + 1]; m];
        let mut basis = vec![0; m];
        for i in 0..m {
            let flip = lp.rhs[i].is_negative();
            let sign = if flip { -Rational::one() } else { Rational::one() };
            for j in 0..n {
                cells[i][j] = &lp.matrix[i][j] * &sign;
            }
            cells[i][n + i] = sign.clone();
            cells[i][cols] = &lp.rhs[i] * &sign;
            basis[i] = n + i;
        }
        for (k, &i) in negative.iter().enumerate() {
            cells[i][artificial_start + k] = Rational::one();
            basis[i] = artificial_start + k;
        }
        Tableau {
            cells,
            reduced: Vec::new(),
            basis,
            structural: n,
            rows: m,
            artificial_start,
            cols,
        }
    }

    fn price(&mut self, weights: &[Rational]) {
        let mut reduced: Vec<Rational> = (0..=self.cols)
            .map(|j| if j < self.cols { -&weights[j] } else { Rational::zero() })
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let w = &weights[b];
            if w.is_zero() {
                continue;
            }
            for (j, r) in reduced.iter_mut().enumerate() {
                let cell = &self.cells[i][j];
                if !cell.is_zero() {
                    *r += w * cell;
                }
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.cells[row][col].recip();
        for v in self.cells[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.cells[row].clone();
        for (i, r) in self.cells.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.reduced[col].is_zero() {
            let f = self.reduced[col].clone();
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule iterations over columns `< allowed`. Returns false when
    /// the objective is unbounded.
    fn iterate(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows {
                let a = &self.cells[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.cells[i][self.cols] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &StandardLp) -> LpOutcome {
        if self.cols > self.artificial_start {
            let mut weights = vec![Rational::zero(); self.cols];
            for w in &mut weights[self.artificial_start..] {
                *w = -Rational::one();
            }
            self.price(&weights);
            self.iterate(self.cols);
            if self.reduced[self.cols].is_negative() {
                return LpOutcome::without_solution(LpStatus::Infeasible);
            }
            for i in 0..self.rows {
                if self.basis[i] >= self.artificial_start {
                    let col = (0..self.artificial_start)
                        .find(|&j| !self.cells[i][j].is_zero())
                        .expect("rows of [A I] are independent");
                    self.pivot(i, col);
                }
            }
        }
        let mut weights = vec![Rational::zero(); self.cols];
        weights[..self.structural].clone_from_slice(&lp.objective);
        self.price(&weights);
        if !self.iterate(self.artificial_start) {
            return LpOutcome::without_solution(LpStatus::Unbounded);
        }
        let mut primal = vec![Rational::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                primal[b] = self.cells[i][self.cols].clone();
            }
        }
        let dual = (0..self.rows)
            .map(|i| self.reduced[self.structural + i].clone())
            .collect();
        LpOutcome {
            status: LpStatus::Optimal,
            value: Some(self.reduced[self.cols].clone()),
            primal,
            dual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_bound() {
        let mut lp = StandardLp::new(ints(&[1]));
        lp.add_le(ints(&[1]), int(5));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(int(5)));
        assert_eq!(out.dual, ints(&[1]));
        assert!(lp.certifies(&out));
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = StandardLp::new(ints(&[1, 1]));
        lp.add_le(ints(&[1, -1]), int(0));
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_lower_bound() {
        let mut lp = StandardLp::new(ints(&[1]));
        lp.add_le(ints(&[1]), int(2)).add_ge(ints(&[1]), int(3));
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_rows_with_negative_rhs() {
        // max -x1 - x2 s.t. x1 + x2 = 3, x1 - x2 >= 1
        let mut lp = StandardLp::new(ints(&[-1, -1]));
        lp.add_eq(ints(&[1, 1]), int(3)).add_ge(ints(&[1, -1]), int(1));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value, Some(int(-3)));
        assert!(lp.certifies(&out));
    }

    #[test]
    fn fractional_optimum() {
        // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = StandardLp::new(ints(&[3, 2]));
        lp.add_le(ints(&[1, 1]), int(4))
            .add_le(ints(&[1, 3]), int(6))
            .add_le(ints(&[1, 0]), int(3));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value, Some(int(11)));
        assert_eq!(out.primal, ints(&[3, 1]));
        assert!(lp.certifies(&out));
        let mut lp = StandardLp::new(ints(&[1, 1]));
        lp.add_le(ints(&[3, 1]), int(2)).add_le(ints(&[1, 3]), int(2));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value, Some(int(1)));
        assert_eq!(out.primal, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn dimension_errors() {
        let mut lp = StandardLp::new(ints(&[1, 2]));
        lp.add_le(ints(&[1]), int(1));
        assert!(matches!(solve(&lp), Err(LpError::Dimension(_))));
        let mut lp = StandardLp::new(ints(&[1]));
        lp.add_le(ints(&[1]), int(1));
        assert!(matches!(
            solve_with_value_constraint(&lp, &int(1), &ints(&[1, 1]), Direction::Minimize),
            Err(LpError::Dimension(_))
        ));
    }

    #[test]
    fn value_constraint_idempotent_and_unattainable() {
        let mut lp = StandardLp::new(ints(&[1, 1]));
        lp.add_le(ints(&[1, 1]), int(4)).add_le(ints(&[1, 0]), int(3));
        let out = solve_with_value_constraint(&lp, &int(4), &ints(&[1, 1]), Direction::Maximize).unwrap();
        assert_eq!(out.value, Some(int(4)));
        let out = solve_with_value_constraint(&lp, &int(4), &ints(&[1, 0]), Direction::Minimize).unwrap();
        assert_eq!(out.value, Some(int(0)));
        assert_eq!(out.primal, ints(&[0, 4]));
        assert_eq!(
            solve_with_value_constraint(&lp, &int(5), &ints(&[1, 0]), Direction::Minimize),
            Err(LpError::ValueNotAttainable)
        );
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example for the largest-coefficient rule.
        let q = |n, d| ratio(n, d);
        let mut lp = StandardLp::new(vec![q(3, 4), int(-150), q(1, 50), int(-6)]);
        lp.add_le(vec![q(1, 4), int(-60), q(-1, 25), int(9)], int(0))
            .add_le(vec![q(1, 2), int(-90), q(-1, 50), int(3)], int(0))
            .add_le(ints(&[0, 0, 1, 0]), int(1));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value, Some(q(1, 20)));
        assert!(lp.certifies(&out));
    }

    #[test]
    fn square_solver() {
        let m = vec![ints(&[2, 1]), ints(&[1, 3])];
        assert_eq!(solve_square(m, ints(&[3, 5])), Some(vec![ratio(4, 5), ratio(7, 5)]));
        assert_eq!(solve_square(vec![ints(&[1, 2]), ints(&[2, 4])], ints(&[1, 1])), None);
    }
}
