//! Explicit forms: the `C`/`D` correction monomials at `p = 5`, the main
//! dispatch on `(i, j)`, the recursive variant, and pure `Delta` powers at
//! other primes.

use num_bigint::BigInt;
use serde::Serialize;

use crate::betafamily::{a_seq, decompose, is_order_p};
use crate::error::{Error, Result};
use crate::level1::Level1Form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    PureDelta,
    FullSum,
    TrimmedSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseTag {
    pub u: Option<u32>,
    pub branch: Branch,
}

fn pow5(k: u32) -> u64 {
    5u64.pow(k)
}

fn check_cd_range(m: u32, n: u32, r: u64) -> Result<()> {
    let ok = r >= 1 && if m == 0 { n >= 2 } else { n >= 3 && m <= n - 2 };
    if ok {
        Ok(())
    } else {
        Err(Error::IndexRange(format!("C/D index (m, n, r) = ({m}, {n}, {r})")))
    }
}

/// `C_{m,n,r}`, a single monomial of weight `24 r 5^n`.
pub fn c_form(m: u32, n: u32, r: u64) -> Result<Level1Form> {
    check_cd_range(m, n, r)?;
    let shift = 2 * (r - 1) * pow5(n);
    Ok(if m == 0 {
        Level1Form::monomial(42 * pow5(n - 2) + shift, 24 * pow5(n - 2), BigInt::from(4 * r))
    } else {
        let s = pow5(n - m - 2);
        Level1Form::monomial(8 * pow5(n - 1) + 2 * s + shift, 6 * pow5(n - 1) - 6 * s, BigInt::from(3 * r))
    })
}

/// `D_{m,n,r}`, a single monomial of weight `24 r 5^n`.
pub fn d_form(m: u32, n: u32, r: u64) -> Result<Level1Form> {
    check_cd_range(m, n, r)?;
    let shift = 2 * (r - 1) * pow5(n);
    Ok(if m == 0 {
        Level1Form::monomial(41 * pow5(n - 2) + shift, 27 * pow5(n - 2), BigInt::from(3 * r))
    } else {
        let s = pow5(n - m - 2);
        Level1Form::monomial(8 * pow5(n - 1) + s + shift, 6 * pow5(n - 1) - 3 * s, BigInt::from(r))
    })
}

/// `f_{i/j}` at `p = 5`. With `allow_nonfamily`, indices outside the family
/// (such as `(25, 29)`) are accepted and the `r > 1` gate is dropped; `j`
/// must still lie in a `u`-window.
pub fn theorem_main_5(i: u64, j: u64, allow_nonfamily: bool) -> Result<(Level1Form, CaseTag)> {
    if i == 0 || j == 0 || (!allow_nonfamily && !is_order_p(5, i, j)) {
        return Err(Error::InvalidIndex { p: 5, i, j });
    }
    let (r, n) = decompose(5, i);
    let base = Level1Form::delta_power(2 * r * pow5(n));
    let pure = (base.clone(), CaseTag { u: None, branch: Branch::PureDelta });
    let gated = if allow_nonfamily { true } else { r > 1 };
    if !gated || n < 2 || j <= pow5(n) {
        return Ok(pure);
    }
    if j > a_seq(5, n) {
        return Err(Error::InvalidIndex { p: 5, i, j });
    }
    let top = pow5(n) + pow5(n - 1);
    let u = (1..n)
        .find(|&u| top - pow5(n - u) < j && j <= top - pow5(n - u - 1))
        .ok_or(Error::InvalidIndex { p: 5, i, j })?;
    let full = j > top - pow5(n - u) + 2 * pow5(n - u - 1);
    let mut f = base;
    for m in 0..u - 1 {
        f = f.add(&c_form(m, n, r)?)?.add(&d_form(m, n, r)?)?;
    }
    f = f.add(&c_form(u - 1, n, r)?)?;
    if full {
        f = f.add(&d_form(u - 1, n, r)?)?;
    }
    let branch = if full { Branch::FullSum } else { Branch::TrimmedSum };
    Ok((f, CaseTag { u: Some(u), branch }))
}

/// `f_{r 5^(n+1) / a_(n+1)}` by the recursion
/// `f <- f^5 + C_{k-1,k+1,r} + D_{k-1,k+1,r}` from `f_{5r/5} = Delta^(10r)`.
pub fn corollary_recursive(n: u32, r: u64) -> Result<Level1Form> {
    if n < 1 || r < 2 || r.is_multiple_of(5) {
        return Err(Error::IndexRange(format!("recursive form (n, r) = ({n}, {r}); need n >= 1, r >= 2, 5 not dividing r")));
    }
    let mut f = Level1Form::delta_power(10 * r);
    for k in 1..=n {
        f = f.pow(5).add(&c_form(k - 1, k + 1, r)?)?.add(&d_form(k - 1, k + 1, r)?)?;
    }
    Ok(f)
}

/// Primes with a proven pure `Delta`-power formula for `j <= p^n`.
pub const THEOREM_PRIMES: [u64; 4] = [7, 11, 13, 677];

/// `Delta^(i (p^2 - 1) / 12)` with `i = r p^n`. Without `conjecture`, `p`
/// must be one of [`THEOREM_PRIMES`].
pub fn section5_form(p: u64, r: u64, n: u32, conjecture: bool) -> Result<Level1Form> {
    if p == 5 {
        return Err(Error::Unsupported("p = 5 uses theorem_main_5".into()));
    }
    if p < 5 || !crate::exactnum::is_prime(p) {
        return Err(Error::NotAnOddPrime(p));
    }
    if !conjecture && !THEOREM_PRIMES.contains(&p) {
        return Err(Error::Unsupported(format!("no theorem at p = {p}; pass the conjecture flag")));
    }
    if r == 0 || r.is_multiple_of(p) {
        return Err(Error::IndexRange(format!("r = {r} must be positive and prime to {p}")));
    }
    let i = r * p.pow(n);
    Ok(Level1Form::delta_power(i * (p * p - 1) / 12))
}
