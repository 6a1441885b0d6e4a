//! Checkers for the four conditions on `f_{i/j}`, with (C4) reduced to the
//! single level `l = 2` whenever 2 topologically generates `Z_p^x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Multiplicity;
use crate::level1::{c3_divisible_by_epm1, Level1Form};
use crate::level2::epm1_div_order;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    C1,
    C2,
    C3,
    C4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum C2Branch {
    Inequality,
    Equality,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C2Report {
    pub holds: bool,
    /// `None` for the zero form.
    pub ord_q: Option<u64>,
    /// `(p^2 - 1) i - (p - 1) j`, compared against `12 ord_q`.
    pub threshold: i128,
    pub branch: C2Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum C4Status {
    Certified,
    NotCertified,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C4Report {
    pub status: C4Status,
    /// Divisibility order reached (capped at `required` away from `p = 5`).
    pub achieved: Option<Multiplicity>,
    pub required: u64,
    /// Whether `achieved` is the exact order rather than a certified bound.
    pub exact: bool,
}

/// Outcome of [`check_all`]. Stages after the first failure are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub p: u64,
    pub i: u64,
    pub j: u64,
    pub c1: bool,
    pub c2: Option<C2Report>,
    pub c3: Option<bool>,
    pub c4_at_2: Option<C4Report>,
    pub generator_check: bool,
    pub failed_stage: Option<Stage>,
}

impl ConditionReport {
    /// No stage failed. (C4 may still be inapplicable.)
    pub fn passed(&self) -> bool {
        self.failed_stage.is_none()
    }

    /// All four conditions established, (C4) by certificate.
    pub fn fully_verified(&self) -> bool {
        self.passed() && matches!(&self.c4_at_2, Some(r) if r.status == C4Status::Certified)
    }
}

pub fn check_c1(f: &Level1Form, p: u64) -> bool {
    !f.is_zero_mod(p)
}

pub fn check_c2(f: &Level1Form, p: u64, i: u64, j: u64) -> Result<C2Report> {
    let expected = i * (p * p - 1);
    if f.weight() != expected {
        return Err(Error::WeightMismatch { form: f.weight(), expected });
    }
    let threshold = (p as i128 * p as i128 - 1) * i as i128 - (p as i128 - 1) * j as i128;
    let ord = f.ord_q();
    let branch = match ord {
        None => C2Branch::Inequality,
        Some(o) if 12 * o as i128 > threshold => C2Branch::Inequality,
        Some(o) if 12 * o as i128 == threshold - 2 => C2Branch::Equality,
        Some(_) => C2Branch::Neither,
    };
    Ok(C2Report { holds: branch != C2Branch::Neither, ord_q: ord, threshold, branch })
}

/// `f` is not `E_{p-1}` times a form mod `p`.
pub fn check_c3(f: &Level1Form, p: u64) -> Result<bool> {
    Ok(!c3_divisible_by_epm1(f, p)?)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod_wide(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether the multiplicative order of 2 mod `p^2` is `p (p - 1)`.
pub fn is_topgen_2(p: u64) -> bool {
    let m = p * p;
    let order = p * (p - 1);
    let mut qs = prime_factors(p - 1);
    qs.push(p);
    qs.iter().all(|q| pow_mod_wide(2, order / q, m) != 1)
}

pub fn check_c4_at_2(f: &Level1Form, p: u64, j: u64) -> Result<C4Report> {
    if !is_topgen_2(p) {
        return Ok(C4Report { status: C4Status::Inapplicable, achieved: None, required: j, exact: false });
    }
    let exact = p == 5;
    let cap = if exact { u64::MAX } else { j };
    let achieved = epm1_div_order(f, p, cap)?;
    let status = if achieved.at_least(j) { C4Status::Certified } else { C4Status::NotCertified };
    Ok(C4Report { status, achieved: Some(achieved), required: j, exact })
}

/// C1 -> C2 -> C3 -> C4, stopping at the first failure.
pub fn check_all(f: &Level1Form, p: u64, i: u64, j: u64) -> Result<ConditionReport> {
    let mut report = ConditionReport {
        p,
        i,
        j,
        c1: check_c1(f, p),
        c2: None,
        c3: None,
        c4_at_2: None,
        generator_check: is_topgen_2(p),
        failed_stage: None,
    };
    if !report.c1 {
        report.failed_stage = Some(Stage::C1);
        return Ok(report);
    }
    let c2 = check_c2(f, p, i, j)?;
    let c2_ok = c2.holds;
    report.c2 = Some(c2);
    if !c2_ok {
        report.failed_stage = Some(Stage::C2);
        return Ok(report);
    }
    let c3 = check_c3(f, p)?;
    report.c3 = Some(c3);
    if !c3 {
        report.failed_stage = Some(Stage::C3);
        return Ok(report);
    }
    let c4 = check_c4_at_2(f, p, j)?;
    if c4.status == C4Status::NotCertified {
        report.failed_stage = Some(Stage::C4);
    }
    report.c4_at_2 = Some(c4);
    Ok(report)
}
