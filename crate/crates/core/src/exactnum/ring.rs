//! Coefficient rings.
//!
//! A [`Ring`] is a context object: elements carry no ring information of
//! their own, so `ZZ`, `QQ` and `GF(p)` all share the same series and
//! polynomial code. Two rings compare equal iff they are the same ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn from_rational(&self, v: &BigRational) -> Result<Self::Elem>;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Short human-readable name, used in error messages and cache files.
    fn name(&self) -> String;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `C(n, 0), ..., C(n, n)` as ring elements.
    fn binomial_row(&self, n: u64) -> Vec<Self::Elem> {
        let mut row = Vec::with_capacity(n as usize + 1);
        let mut c = BigInt::one();
        for k in 0..=n {
            row.push(self.from_bigint(&c));
            c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        }
        row
    }

    fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.name(), right: other.name() })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntegerRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalField;

/// `Z/p` for an odd prime `p < 2^32`; elements are residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn from_rational(&self, v: &BigRational) -> Result<BigInt> {
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::NotIntegral { value: v.to_string(), ring: self.name() })
        }
    }
    fn inverse(&self, a: &BigInt) -> Result<BigInt> {
        if a.abs().is_one() {
            Ok(a.clone())
        } else {
            Err(Error::NotInvertible { value: a.to_string(), ring: self.name() })
        }
    }
    fn name(&self) -> String {
        "ZZ".into()
    }
    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl Ring for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(&self, v: &BigRational) -> Result<BigRational> {
        Ok(v.clone())
    }
    fn inverse(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::NotInvertible { value: "0".into(), ring: self.name() })
        } else {
            Ok(a.recip())
        }
    }
    fn name(&self) -> String {
        "QQ".into()
    }
    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 32).contains(&p) || !is_prime(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }

    pub fn inv_u64(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::NotInvertible { value: "0".into(), ring: self.name() });
        }
        Ok(pow_mod(a, self.p - 2, self.p))
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn centered(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        self.reduce_bigint(v)
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn from_rational(&self, v: &BigRational) -> Result<u64> {
        let den = self.reduce_bigint(v.denom());
        if den == 0 {
            return Err(Error::NotIntegral { value: v.to_string(), ring: self.name() });
        }
        Ok(self.reduce_bigint(v.numer()) * self.inv_u64(den)? % self.p)
    }
    fn inverse(&self, a: &u64) -> Result<u64> {
        self.inv_u64(*a)
    }
    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn binomial_row(&self, n: u64) -> Vec<u64> {
        binomial_row_mod(n, self.p)
    }
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Binomial coefficients `C(n, k) mod p` for `k = 0..=n`, by Lucas' theorem.
pub fn binomial_row_mod(n: u64, p: u64) -> Vec<u64> {
    let digits_n = base_digits(n, p);
    let pu = p as usize;
    let mut fact = vec![1u64; pu];
    for i in 1..pu {
        fact[i] = fact[i - 1] * i as u64 % p;
    }
    let mut inv_fact = vec![1u64; pu];
    inv_fact[pu - 1] = pow_mod(fact[pu - 1], p - 2, p);
    for i in (1..pu).rev() {
        inv_fact[i - 1] = inv_fact[i] * i as u64 % p;
    }
    let small = |a: u64, b: u64| -> u64 {
        if b > a {
            0
        } else {
            fact[a as usize] * inv_fact[b as usize] % p * inv_fact[(a - b) as usize] % p
        }
    };
    (0..=n)
        .map(|k| {
            let mut acc = 1u64;
            let mut kk = k;
            for &dn in &digits_n {
                let dk = kk % p;
                kk /= p;
                acc = acc * small(dn, dk) % p;
                if acc == 0 {
                    break;
                }
            }
            acc
        })
        .collect()
}

fn base_digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % p);
        n /= p;
    }
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites_and_two() {
        assert!(PrimeField::new(677).is_ok());
        assert_eq!(PrimeField::new(2), Err(Error::NotAnOddPrime(2)));
        assert_eq!(PrimeField::new(15), Err(Error::NotAnOddPrime(15)));
    }

    #[test]
    fn rational_reduction_mod_p() {
        let f = PrimeField::new(5).unwrap();
        let sixteenth = BigRational::new(1.into(), 16.into());
        assert_eq!(f.from_rational(&sixteenth).unwrap(), 1);
        let fifth = BigRational::new(1.into(), 5.into());
        assert!(f.from_rational(&fifth).is_err());
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [5u64, 7, 11] {
            for n in 0..60u64 {
                let row = binomial_row_mod(n, p);
                let exact = IntegerRing.binomial_row(n);
                for (k, c) in exact.iter().enumerate() {
                    assert_eq!(row[k], PrimeField::new(p).unwrap().reduce_bigint(c), "C({n},{k}) mod {p}");
                }
            }
        }
    }
}
