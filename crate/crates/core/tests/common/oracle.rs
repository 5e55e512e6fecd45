//! Brute-force reference for `max c·x s.t. Ax ≤ b, x ≥ 0`: enumerate the
//! vertices of the feasible region and the extreme rays of its recession
//! cone. Written independently of the simplex under test.

use lpp_core::lp::{LpStatus, StandardLp};
use lpp_core::Rational;
use num_traits::{One, Zero};

pub struct Reference {
    pub status: LpStatus,
    pub value: Option<Rational>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Unique solution of a square system, if the matrix is non-singular.
pub fn gauss(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for k in col..n {
                    let sub = &f * &m[col][k];
                    m[r][k] -= sub;
                }
                let sub = &f * &b[col];
                b[r] -= sub;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn reference(lp: &StandardLp) -> Reference {
    let nv = lp.objective.len();
    // All constraints as (row, rhs) with row·x ≤ rhs, nonnegativity included.
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        lp.matrix.iter().cloned().zip(lp.rhs.iter().cloned()).collect();
    for j in 0..nv {
        let mut e = vec![Rational::zero(); nv];
        e[j] = -Rational::one();
        rows.push((e, Rational::zero()));
    }
    let feasible = |x: &[Rational]| rows.iter().all(|(a, b)| dot(a, x) <= *b);

    let mut best: Option<Rational> = None;
    for pick in subsets(rows.len(), nv) {
        let m = pick.iter().map(|&k| rows[k].0.clone()).collect();
        let b = pick.iter().map(|&k| rows[k].1.clone()).collect();
        if let Some(x) = gauss(m, b) {
            if feasible(&x) {
                let v = dot(&lp.objective, &x);
                if best.as_ref().is_none_or(|cur| v > *cur) {
                    best = Some(v);
                }
            }
        }
    }
    let Some(best) = best else {
        return Reference { status: LpStatus::Infeasible, value: None };
    };

    // Extreme rays of {d : A d ≤ 0, d ≥ 0}, normalized by Σ d = 1.
    let cone: Vec<Vec<Rational>> = rows.iter().map(|(a, _)| a.clone()).collect();
    let ones = vec![Rational::one(); nv];
    for pick in subsets(cone.len(), nv - 1) {
        let mut m: Vec<Vec<Rational>> = pick.iter().map(|&k| cone[k].clone()).collect();
        let mut b = vec![Rational::zero(); nv - 1];
        m.push(ones.clone());
        b.push(Rational::one());
        if let Some(d) = gauss(m, b) {
            let in_cone = cone.iter().all(|a| dot(a, &d) <= Rational::zero());
            if in_cone && dot(&lp.objective, &d) > Rational::zero() {
                return Reference { status: LpStatus::Unbounded, value: None };
            }
        }
    }
    Reference { status: LpStatus::Optimal, value: Some(best) }
}
