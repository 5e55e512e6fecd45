//! The production situation `(A, B, p, r, c)` and its validation.

use num_traits::{Signed, Zero};

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// A linear production situation with a managed common-pool resource.
///
/// * `a` is `(q+1) × g`: rows `0..q` are the private resources, row `q` is
///   the common-pool coefficient of every good.
/// * `b` is `q × n`: column `i` is producer `i`'s endowment.
/// * `p` are the good prices, `c` the unit cost of the common-pool
///   resource and `r` the stock the manager can hand out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LppInstance {
    a: Vec<Vec<Rational>>,
    b: Vec<Vec<Rational>>,
    p: Vec<Rational>,
    c: Rational,
    r: Rational,
}

impl LppInstance {
    /// Checks shapes only; use [`LppInstance::validate`] for the model
    /// assumptions.
    pub fn new(
        a: Vec<Vec<Rational>>,
        b: Vec<Vec<Rational>>,
        p: Vec<Rational>,
        c: Rational,
        r: Rational,
    ) -> Result<Self> {
        let q = b.len();
        if q == 0 {
            return Err(Error::Structure("B needs at least one resource row".into()));
        }
        let n = b[0].len();
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::Structure(format!(
                "number of producers must be in 1..={MAX_PLAYERS}, got {n}"
            )));
        }
        if let Some(t) = b.iter().position(|row| row.len() != n) {
            return Err(Error::Structure(format!(
                "B row {} has {} entries, expected {n}",
                t + 1,
                b[t].len()
            )));
        }
        if a.len() != q + 1 {
            return Err(Error::Structure(format!(
                "A must have q+1 = {} rows (one per resource plus the common pool), got {}",
                q + 1,
                a.len()
            )));
        }
        let g = p.len();
        if g == 0 {
            return Err(Error::Structure("at least one good is required".into()));
        }
        if let Some(t) = a.iter().position(|row| row.len() != g) {
            return Err(Error::Structure(format!(
                "A row {} has {} entries, expected g = {g}",
                t + 1,
                a[t].len()
            )));
        }
        Ok(LppInstance { a, b, p, c, r })
    }

    pub fn n(&self) -> usize {
        self.b[0].len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn g(&self) -> usize {
        self.p.len()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<Rational>] {
        &self.b
    }

    pub fn prices(&self) -> &[Rational] {
        &self.p
    }

    pub fn cost(&self) -> &Rational {
        &self.c
    }

    pub fn stock(&self) -> &Rational {
        &self.r
    }

    /// Common-pool coefficients `a_{(q+1)j}`.
    pub fn pool_row(&self) -> &[Rational] {
        &self.a[self.q()]
    }

    /// Same technology and endowments with a different stock.
    pub fn with_stock(&self, r: Rational) -> Self {
        LppInstance { r, ..self.clone() }
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n())
    }

    /// Endowment column `b^i`.
    pub fn endowment(&self, player: usize) -> Vec<Rational> {
        self.b.iter().map(|row| row[player].clone()).collect()
    }

    /// `b^S`, the pooled endowment of `coalition`.
    pub fn coalition_resources(&self, coalition: Coalition) -> Result<Vec<Rational>> {
        if coalition.is_empty() {
            return Err(Error::Structure("coalition must be non-empty".into()));
        }
        if !coalition.is_subset_of(self.grand()) {
            return Err(Error::Structure(format!(
                "{coalition} is not a coalition of {} producers",
                self.n()
            )));
        }
        Ok(self
            .b
            .iter()
            .map(|row| coalition.players().map(|i| &row[i]).sum())
            .collect())
    }

    /// Every violated model assumption. The profitability check at the end
    /// solves each producer's own program and only runs when the structural
    /// checks pass.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let (q, n) = (self.q(), self.n());
        for (t, row) in self.a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_negative() {
                    out.push(Violation::new(
                        ViolationKind::NegativeEntry,
                        format!("A[{}][{}] = {} is negative", t + 1, j + 1, format_rational(v)),
                    ));
                }
            }
        }
        for (t, row) in self.b.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if v.is_negative() {
                    out.push(Violation::new(
                        ViolationKind::NegativeEntry,
                        format!("B[{}][{}] = {} is negative", t + 1, i + 1, format_rational(v)),
                    ));
                }
            }
        }
        for (j, a) in self.pool_row().iter().enumerate() {
            if !a.is_positive() {
                out.push(Violation::new(
                    ViolationKind::PoolRowNotPositive,
                    format!(
                        "common-pool row must be strictly positive: A[{}][{}] = {}",
                        q + 1,
                        j + 1,
                        format_rational(a)
                    ),
                ));
            }
        }
        // Each good needs some private resource; a single all-positive row
        // is not required.
        for j in 0..self.g() {
            if !(0..q).any(|t| self.a[t][j].is_positive()) {
                out.push(Violation::new(
                    ViolationKind::OutputWithoutInput,
                    format!("good {} uses no private resource (output without input)", j + 1),
                ));
            }
        }
        for (j, p) in self.p.iter().enumerate() {
            if !p.is_positive() {
                out.push(Violation::new(
                    ViolationKind::NonPositivePrice,
                    format!("price p_{} = {} must be positive", j + 1, format_rational(p)),
                ));
            }
            let pool_cost = &self.pool_row()[j] * &self.c;
            if *p <= pool_cost {
                out.push(Violation::new(
                    ViolationKind::Unprofitable,
                    format!(
                        "profitability p_j > a_(q+1)j c fails for good {}: {} <= {}",
                        j + 1,
                        format_rational(p),
                        format_rational(&pool_cost)
                    ),
                ));
            }
        }
        for t in 0..q {
            if !self.b[t].iter().any(|v| v.is_positive()) {
                out.push(Violation::new(
                    ViolationKind::ResourceUnowned,
                    format!("resource {} is held by no producer", t + 1),
                ));
            }
        }
        if self.c.is_negative() {
            out.push(Violation::new(
                ViolationKind::NegativeCost,
                format!("cost c = {} is negative", format_rational(&self.c)),
            ));
        }
        if !self.r.is_positive() {
            out.push(Violation::new(
                ViolationKind::NonPositiveStock,
                format!("stock r = {} must be positive", format_rational(&self.r)),
            ));
        }
        if out.is_empty() {
            for i in 0..n {
                let single = Coalition::singleton(i);
                let profit = crate::demand::max_profit(self, single);
                match profit {
                    Ok(v) if v.is_positive() => {}
                    Ok(v) => out.push(Violation::new(
                        ViolationKind::SingletonUnprofitable,
                        format!(
                            "producer {} cannot produce at a profit (best value {})",
                            i + 1,
                            format_rational(&v)
                        ),
                    )),
                    Err(e) => out.push(Violation::new(
                        ViolationKind::SingletonUnprofitable,
                        format!("producer {}: {e}", i + 1),
                    )),
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ViolationKind {
    NegativeEntry,
    PoolRowNotPositive,
    OutputWithoutInput,
    NonPositivePrice,
    Unprofitable,
    ResourceUnowned,
    NegativeCost,
    NonPositiveStock,
    SingletonUnprofitable,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, message: String) -> Self {
        Violation { kind, message }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub(crate) fn require_nonnegative(z: &Rational, what: &str) -> Result<()> {
    if z.is_negative() {
        Err(Error::Domain(format!("{what} = {} is negative", format_rational(z))))
    } else {
        Ok(())
    }
}

pub(crate) fn zeros(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}
