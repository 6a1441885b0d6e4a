//! Verification sweeps over many `(i, j)` at once.

use serde::Serialize;

use crate::betafamily::{enumerate, BetaIndex};
use crate::closedform::{section5_form, theorem_main_5, CaseTag};
use crate::conditions::{check_all, ConditionReport};
use crate::error::Result;
use crate::par::Execution;
use crate::search::{solve, SearchProblem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub i: u64,
    pub j: u64,
    pub case: Option<CaseTag>,
    pub report: ConditionReport,
    /// Search output congruent to the closed form mod `p`, when compared.
    pub search_agrees: Option<bool>,
}

impl SweepEntry {
    pub fn ok(&self) -> bool {
        self.report.fully_verified() && self.search_agrees != Some(false)
    }
}

/// `i = r * p^n` for `n <= max_n`, `1 <= r <= max_r`, `p` not dividing `r`.
pub fn indices(p: u64, max_n: u32, max_r: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for r in (1..=max_r).filter(|r| r % p != 0) {
            out.push(r * p.pow(n));
        }
    }
    out
}

/// Every `(i, j)` in the family for the given `i`.
pub fn pairs(p: u64, is: &[u64]) -> Vec<(u64, u64)> {
    is.iter().flat_map(|&i| enumerate(p, i).into_iter().map(move |j| (i, j))).collect()
}

/// Closed forms at `p = 5` through [`check_all`]; with `compare_search`
/// the linear-solve output is compared mod 5 as well.
pub fn theorem_sweep(pairs: &[(u64, u64)], compare_search: bool, exec: Execution) -> Result<Vec<SweepEntry>> {
    exec.map(pairs, |&(i, j)| {
        let (f, tag) = theorem_main_5(i, j, false)?;
        let report = check_all(&f, 5, i, j)?;
        let search_agrees = if compare_search {
            let sol = solve(&SearchProblem::new(5, i, j, false)?, Execution::Sequential)?;
            Some(sol.form.congruent_mod(&f, 5))
        } else {
            None
        };
        Ok(SweepEntry { i, j, case: Some(tag), report, search_agrees })
    })
    .into_iter()
    .collect()
}

/// Pure `Delta` powers at `p != 5` for `j <= p^n`.
pub fn delta_power_sweep(p: u64, is: &[u64], conjecture: bool, exec: Execution) -> Result<Vec<SweepEntry>> {
    let work: Vec<(u64, u64)> = is
        .iter()
        .flat_map(|&i| {
            let top = BetaIndex::new(p, i, 1).map(|b| b.p_pow_n()).unwrap_or(1);
            enumerate(p, i).into_iter().filter(move |&j| j <= top).map(move |j| (i, j))
        })
        .collect();
    exec.map(&work, |&(i, j)| {
        let idx = BetaIndex::new(p, i, j)?;
        let f = section5_form(p, idx.r, idx.n, conjecture)?;
        let report = check_all(&f, p, i, j)?;
        Ok(SweepEntry { i, j, case: None, report, search_agrees: None })
    })
    .into_iter()
    .collect()
}
