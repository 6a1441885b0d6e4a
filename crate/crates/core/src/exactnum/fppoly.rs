//! Dense univariate polynomials over `Z/p`.

use std::fmt;

use super::ring::{pow_mod, PrimeField};
use crate::error::{Error, Result};

/// Dense polynomial over `Z/p`; `coeffs[k]` multiplies `x^k`. The highest
/// stored coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

/// Outcome of a multiplicity count: the zero polynomial is divisible by
/// every power of every factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn at_least(self, j: u64) -> bool {
        match self {
            Multiplicity::Finite(m) => m >= j,
            Multiplicity::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => f.write_str("infinite"),
        }
    }
}

impl FpPoly {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let p = field.modulus();
        let mut poly = FpPoly { modulus: p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        poly.normalize();
        poly
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        FpPoly { modulus: field.modulus(), coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, 0, 1)
    }

    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: PrimeField, degree: usize, c: u64) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.modulus).expect("modulus validated at construction")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn check_same(&self, other: &FpPoly) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: format!("GF({})", self.modulus),
                right: format!("GF({})", other.modulus),
            })
        }
    }

    pub fn add(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same(other)?;
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| (self.coeff(k) + other.coeff(k)) % p).collect();
        let mut out = FpPoly { modulus: p, coeffs };
        out.normalize();
        Ok(out)
    }

    pub fn sub(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same(other)?;
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| (self.coeff(k) + p - other.coeff(k)) % p).collect();
        let mut out = FpPoly { modulus: p, coeffs };
        out.normalize();
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let p = self.modulus;
        let mut out = FpPoly { modulus: p, coeffs: self.coeffs.iter().map(|&a| a * (c % p) % p).collect() };
        out.normalize();
        out
    }

    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(FpPoly { modulus: self.modulus, coeffs: Vec::new() });
        }
        let p = self.modulus;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a * b) % p;
            }
        }
        let mut out = FpPoly { modulus: p, coeffs: acc };
        out.normalize();
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> FpPoly {
        let mut base = self.clone();
        let mut acc = FpPoly::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same modulus");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same modulus");
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r`, `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        self.check_same(divisor)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let p = self.modulus;
        if self.coeffs.len() <= db {
            return Ok((FpPoly { modulus: p, coeffs: Vec::new() }, self.clone()));
        }
        let inv_lead = pow_mod(divisor.leading(), p - 2, p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - db];
        let b = &divisor.coeffs;
        for k in (0..quot.len()).rev() {
            let c = rem[k + db] * inv_lead % p;
            if c == 0 {
                continue;
            }
            quot[k] = c;
            let neg = p - c;
            for (i, &bi) in b.iter().enumerate() {
                if bi != 0 {
                    rem[k + i] = (rem[k + i] + neg * bi) % p;
                }
            }
        }
        rem.truncate(db);
        let mut q = FpPoly { modulus: p, coeffs: quot };
        let mut r = FpPoly { modulus: p, coeffs: rem };
        q.normalize();
        r.normalize();
        Ok((q, r))
    }

    pub fn rem(&self, divisor: &FpPoly) -> Result<FpPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// `x^e mod modulus_poly` by square-and-multiply; `e` may be far larger
    /// than anything one would want to materialize.
    pub fn x_pow_mod(e: u64, modulus_poly: &FpPoly) -> Result<FpPoly> {
        let field = modulus_poly.field();
        if modulus_poly.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut acc = FpPoly::one(field).rem(modulus_poly)?;
        let mut base = FpPoly::x(field).rem(modulus_poly)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus_poly)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?.rem(modulus_poly)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * (x % p) + c) % p)
    }

    /// Exponent of the largest power of `x` dividing `self` (`None` for zero).
    pub fn x_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn shift_down(&self, k: usize) -> FpPoly {
        let coeffs = self.coeffs.get(k..).map(<[u64]>::to_vec).unwrap_or_default();
        FpPoly { modulus: self.modulus, coeffs }
    }

    /// Coefficients of `self` expanded around `x = c`, i.e. `b_k` with
    /// `self(x) = sum b_k (x - c)^k`, truncated to the first `count` terms.
    pub fn taylor_coeffs_at(&self, c: u64, count: usize) -> Vec<u64> {
        let p = self.modulus;
        let c = c % p;
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if work.is_empty() {
                out.push(0);
                continue;
            }
            // synthetic division by (x - c): remainder is work(c)
            let mut carry = 0u64;
            for k in (0..work.len()).rev() {
                let v = (work[k] + carry * c) % p;
                work[k] = carry;
                carry = v;
            }
            out.push(carry);
            while work.last() == Some(&0) {
                work.pop();
            }
        }
        out
    }

    /// `self(a*y + b)` as a polynomial in `y`.
    pub fn compose_linear(&self, a: u64, b: u64) -> FpPoly {
        let p = self.modulus;
        let len = self.coeffs.len();
        let shifted = self.taylor_coeffs_at(b, len);
        let mut scale = 1u64;
        let coeffs = shifted
            .into_iter()
            .map(|c| {
                let v = c * scale % p;
                scale = scale * (a % p) % p;
                v
            })
            .collect();
        let mut out = FpPoly { modulus: p, coeffs };
        out.normalize();
        out
    }
}

/// Largest `m` with `factor^m | a`.
pub fn factor_multiplicity(a: &FpPoly, factor: &FpPoly) -> Result<Multiplicity> {
    multiplicity_capped(a, factor, u64::MAX)
}

/// As [`factor_multiplicity`] but stops counting at `cap`.
pub fn multiplicity_capped(a: &FpPoly, factor: &FpPoly, cap: u64) -> Result<Multiplicity> {
    a.check_same(factor)?;
    match factor.degree() {
        None | Some(0) => return Err(Error::ConstantFactor),
        _ => {}
    }
    if a.is_zero() {
        return Ok(Multiplicity::Infinite);
    }
    let mut work = a.clone();
    let mut count = 0u64;
    // powers of x are coprime to a factor with nonzero constant term
    let xv = work.x_valuation().unwrap_or(0);
    if factor.coeff(0) != 0 && xv > 0 {
        work = work.shift_down(xv);
    }
    while count < cap {
        let (q, r) = work.divrem(factor)?;
        if !r.is_zero() {
            break;
        }
        count += 1;
        work = q;
    }
    Ok(Multiplicity::Finite(count))
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(mod {}: {})", self.modulus, self)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}
