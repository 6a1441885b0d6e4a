//! From-scratch determination of `f_{i/j}` by an exact linear solve.
//!
//! Ansatz at weight `(p^2 - 1) i`, with `E = (p^2 - 1) i / 12`:
//! `f = c_0 Delta^E + sum_{m=1}^{M} c_m Delta^(E-m) E4^(3m)`, where `M` is the
//! largest `m` with `12 m < (p - 1) j` (larger `m` lowers the q-order below
//! the bound). At `p = 5` the unknowns must make the `y`-expansion of
//! `L_2 f` vanish through `y^(j-1)`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::betafamily::is_order_p;
use crate::conditions::{check_all, ConditionReport, Stage};
use crate::error::{Error, Result};
use crate::exactnum::Multiplicity;
use crate::level1::Level1Form;
use crate::level2::{e4_div_order_p5, l2_y_coeffs_p5};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchProblem {
    pub p: u64,
    pub i: u64,
    pub j: u64,
    /// Number of free coefficients `c_1..c_M`.
    pub m_max: u64,
    /// `c_0`, a unit mod `p`.
    pub leading: u64,
}

impl SearchProblem {
    pub fn new(p: u64, i: u64, j: u64, allow_nonfamily: bool) -> Result<Self> {
        if i == 0 || j == 0 || (!allow_nonfamily && !is_order_p(p, i, j)) {
            return Err(Error::InvalidIndex { p, i, j });
        }
        crate::exactnum::PrimeField::new(p)?;
        if p < 5 {
            return Err(Error::NotAnOddPrime(p));
        }
        let m_max = ((p - 1) * j - 1) / 12;
        let e = i * (p * p - 1) / 12;
        Ok(SearchProblem { p, i, j, m_max: m_max.min(e), leading: 1 })
    }

    pub fn with_leading(mut self, c0: u64) -> Result<Self> {
        if c0.is_multiple_of(self.p) {
            return Err(Error::NotInvertible { value: c0.to_string(), ring: format!("GF({})", self.p) });
        }
        self.leading = c0 % self.p;
        Ok(self)
    }

    pub fn weight(&self) -> u64 {
        self.i * (self.p * self.p - 1)
    }

    /// `Delta` exponent of the leading term.
    pub fn top_delta_exp(&self) -> u64 {
        self.weight() / 12
    }

    /// `Delta^(E - m) E4^(3m)`.
    pub fn monomial(&self, m: u64) -> Level1Form {
        Level1Form::monomial(self.top_delta_exp() - m, 3 * m, 1)
    }

    pub fn form(&self, coeffs: &[u64]) -> Level1Form {
        let mut f = Level1Form::monomial(self.top_delta_exp(), 0, self.leading);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                f = f.add(&Level1Form::monomial(self.top_delta_exp() - (k as u64 + 1), 3 * (k as u64 + 1), BigInt::from(c))).expect("same weight");
            }
        }
        f
    }

    /// Columns `m = 1..M`: `y^0..y^(j-1)` coefficients of `L_2` of the `m`-th
    /// monomial, mod 5.
    pub fn columns(&self, exec: Execution) -> Vec<Vec<u64>> {
        let ms: Vec<u64> = (1..=self.m_max).collect();
        exec.map(&ms, |&m| l2_y_coeffs_p5(&self.monomial(m), self.j as usize))
    }

    pub fn rhs(&self) -> Vec<u64> {
        let lead = l2_y_coeffs_p5(&self.monomial(0), self.j as usize);
        let mut out: Vec<u64> = lead.iter().map(|c| (5 - c * self.leading % 5) % 5).collect();
        out.resize(self.j as usize, 0);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSolution {
    pub form: Level1Form,
    /// `c_1..c_M` in `0..p`.
    pub coeffs: Vec<u64>,
    pub rank: usize,
    /// Unknowns left free (and set to 0).
    pub free: Vec<u64>,
    /// Exact `E_{p-1}`-divisibility order of `L_2 f` (`p = 5`).
    pub order: Option<Multiplicity>,
    pub report: ConditionReport,
}

/// Row-reduce `[A | b]` over `Z/p`; `None` if inconsistent. Free variables
/// are 0 in the returned solution.
pub fn solve_mod(p: u64, columns: &[Vec<u64>], rhs: &[u64]) -> Option<(Vec<u64>, usize, Vec<u64>)> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = columns.iter().map(|c| c.get(r).copied().unwrap_or(0) % p).collect();
            row.push(rhs[r] % p);
            row
        })
        .collect();
    let inv = |x: u64| crate::exactnum::pow_mod(x, p - 2, p);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, pr);
        let s = inv(a[row][col]);
        for v in a[row].iter_mut() {
            *v = *v * s % p;
        }
        for r in 0..rows {
            if r != row && a[r][col] != 0 {
                let factor = a[r][col];
                for c in col..=cols {
                    a[r][c] = (a[r][c] + (p - factor) * a[row][c]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if a[row..].iter().any(|r| r[cols] != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][cols];
    }
    let free = (0..cols).filter(|c| !pivots.contains(c)).map(|c| c as u64 + 1).collect();
    Some((x, pivots.len(), free))
}

pub fn solve(problem: &SearchProblem, exec: Execution) -> Result<SearchSolution> {
    let (coeffs, rank, free) = if problem.m_max == 0 {
        (Vec::new(), 0, Vec::new())
    } else if problem.p == 5 {
        solve_mod(5, &problem.columns(exec), &problem.rhs()).ok_or(Error::NoSolution { i: problem.i, j: problem.j })?
    } else {
        return Err(Error::Unsupported(format!(
            "search at p = {} with {} unknowns (only the unknown-free case is supported away from p = 5)",
            problem.p, problem.m_max
        )));
    };
    let form = problem.form(&coeffs);
    let order = (problem.p == 5).then(|| e4_div_order_p5(&form));
    if let Some(o) = order {
        if !o.at_least(problem.j) {
            return Err(Error::PostconditionFailure { i: problem.i, j: problem.j, stage: "linear system".into() });
        }
    }
    let report = check_all(&form, problem.p, problem.i, problem.j)?;
    if let Some(stage @ (Stage::C1 | Stage::C2 | Stage::C3)) = report.failed_stage {
        return Err(Error::PostconditionFailure { i: problem.i, j: problem.j, stage: format!("{stage:?}") });
    }
    Ok(SearchSolution { form, coeffs, rank, free, order, report })
}

/// Exact `E4`-divisibility orders of `L_2(Delta^(2i-m) E4^(3m))` mod 5.
pub fn divisibility_table(i: u64, ms: impl IntoIterator<Item = u64>) -> Vec<(u64, Multiplicity)> {
    ms.into_iter().map(|m| (m, e4_div_order_p5(&Level1Form::monomial(2 * i - m, 3 * m, 1)))).collect()
}
