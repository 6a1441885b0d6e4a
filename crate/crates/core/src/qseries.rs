//! Truncated q-expansions and the classical series: Eisenstein series,
//! `Delta`, the `Gamma_0(2)` generators and the Verschiebung.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, IntegerRing, PrimeField, RationalField, Ring};

/// A power series known through `q^N` inclusive (`coeffs.len() == N + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> QSeries<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        QSeries { ring, coeffs }
    }

    pub fn zero(ring: R, prec: usize) -> Self {
        let coeffs = vec![ring.zero(); prec + 1];
        QSeries { ring, coeffs }
    }

    pub fn one(ring: R, prec: usize) -> Self {
        Self::monomial(ring, 0, prec)
    }

    /// `q^k` through `q^prec` (zero if `k > prec`).
    pub fn monomial(ring: R, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(ring, prec);
        if k <= prec {
            s.coeffs[k] = s.ring.one();
        }
        s
    }

    pub fn from_fn(ring: R, prec: usize, f: impl Fn(usize) -> R::Elem) -> Self {
        let coeffs = (0..=prec).map(f).collect();
        QSeries { ring, coeffs }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&R::Elem> {
        self.coeffs.get(k)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let n = prec.min(self.precision());
        QSeries { ring: self.ring.clone(), coeffs: self.coeffs[..=n].to_vec() }
    }

    /// Index of the first nonzero coefficient, or `None` if the series is
    /// zero through its known precision.
    pub fn ord_q(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn is_zero(&self) -> bool {
        self.ord_q().is_none()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        let n = self.precision().min(other.precision());
        let coeffs = (0..=n).map(|k| f(&self.ring, &self.coeffs[k], &other.coeffs[k])).collect();
        Ok(QSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        QSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn scalar_mul(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        QSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        let n = self.precision().min(other.precision());
        let r = &self.ring;
        let mut coeffs = vec![r.zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !r.is_zero(b) {
                    coeffs[i + j] = r.add(&coeffs[i + j], &r.mul(a, b));
                }
            }
        }
        Ok(QSeries { ring: r.clone(), coeffs })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let r = &self.ring;
        let inv0 = r.inverse(&self.coeffs[0])?;
        let n = self.precision();
        let mut out: Vec<R::Elem> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut s = r.zero();
            for i in 1..=k {
                if !r.is_zero(&self.coeffs[i]) {
                    s = r.add(&s, &r.mul(&self.coeffs[i], &out[k - i]));
                }
            }
            out.push(r.neg(&r.mul(&s, &inv0)));
        }
        Ok(QSeries { ring: r.clone(), coeffs: out })
    }

    /// `f(q) -> f(q^n)`. Known precision is unchanged: coefficient `k` of the
    /// result is determined by coefficient `k / n` of the input.
    pub fn verschiebung(&self, n: usize) -> Self {
        assert!(n >= 1, "verschiebung index must be positive");
        let prec = self.precision();
        let coeffs = (0..=prec)
            .map(|k| if k % n == 0 { self.coeffs[k / n].clone() } else { self.ring.zero() })
            .collect();
        QSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn change_ring<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<QSeries<S>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(QSeries { ring: target.clone(), coeffs })
    }
}

impl QSeries<IntegerRing> {
    pub fn into_ring<S: Ring>(&self, target: &S) -> QSeries<S> {
        self.change_ring(target, |c| Ok(target.from_bigint(c))).expect("integers map into every ring")
    }
}

impl QSeries<RationalField> {
    /// Coefficientwise reduction; fails if a denominator is divisible by `p`.
    pub fn reduce(&self, field: &PrimeField) -> Result<QSeries<PrimeField>> {
        self.change_ring(field, |c| field.from_rational(c))
    }
}

/// `sigma_k(n)`, the sum of the `k`-th powers of the divisors of `n`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Weight-`t` Eisenstein series `1 - (2t/B_t) sum sigma_{t-1}(n) q^n` through
/// `q^prec`, with coefficients in `ring`.
pub fn eisenstein_q<R: Ring>(t: u64, prec: usize, ring: &R) -> Result<QSeries<R>> {
    if t < 4 || t % 2 == 1 {
        return Err(Error::IndexRange(format!("Eisenstein weight {t} (need even t >= 4)")));
    }
    let factor = -BigRational::from_integer(BigInt::from(2 * t)) / bernoulli(t);
    let factor = ring.from_rational(&factor)?;
    let mut coeffs = Vec::with_capacity(prec + 1);
    coeffs.push(ring.one());
    for n in 1..=prec as u64 {
        if ring.is_zero(&factor) {
            coeffs.push(ring.zero());
        } else {
            coeffs.push(ring.mul(&factor, &ring.from_bigint(&sigma((t - 1) as u32, n))));
        }
    }
    Ok(QSeries::new(ring.clone(), coeffs))
}

/// The quasi-modular `E_2 = 1 - 24 sum sigma_1(n) q^n`, used only to build
/// the level-2 generator `delta`.
pub fn e2_q(prec: usize) -> QSeries<IntegerRing> {
    QSeries::from_fn(IntegerRing, prec, |n| {
        if n == 0 {
            BigInt::one()
        } else {
            BigInt::from(-24) * sigma(1, n as u64)
        }
    })
}

/// `Delta = (E_4^3 - E_6^2) / 1728` through `q^prec`.
pub fn delta_q<R: Ring>(prec: usize, ring: &R) -> QSeries<R> {
    delta_integer(prec).into_ring(ring)
}

fn delta_integer(prec: usize) -> QSeries<IntegerRing> {
    let e4 = eisenstein_q(4, prec, &IntegerRing).expect("E4 is integral");
    let e6 = eisenstein_q(6, prec, &IntegerRing).expect("E6 is integral");
    let num = e4.pow(3).sub(&e6.pow(2)).expect("same ring");
    let d = BigInt::from(1728);
    let coeffs = num
        .coeffs()
        .iter()
        .map(|c| {
            debug_assert!((c % &d).is_zero());
            c / &d
        })
        .collect();
    QSeries::new(IntegerRing, coeffs)
}

/// Generators of level-2 modular forms (with 2 inverted) as rational series.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamma0TwoGenerators {
    pub delta: QSeries<RationalField>,
    pub eps: QSeries<RationalField>,
    pub mu: QSeries<RationalField>,
}

impl Gamma0TwoGenerators {
    pub fn reduce(&self, field: &PrimeField) -> Result<ReducedGenerators> {
        Ok(ReducedGenerators { delta: self.delta.reduce(field)?, eps: self.eps.reduce(field)?, mu: self.mu.reduce(field)? })
    }
}

/// [`Gamma0TwoGenerators`] reduced mod an odd prime.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGenerators {
    pub delta: QSeries<PrimeField>,
    pub eps: QSeries<PrimeField>,
    pub mu: QSeries<PrimeField>,
}

/// `delta = (2 V_2 E_2 - E_2) / 4`, `eps = (64 delta^2 - E_4) / 48`,
/// `mu = delta^2 - eps`, all through `q^prec`.
pub fn gamma0_2_generators(prec: usize) -> Gamma0TwoGenerators {
    let qq = RationalField;
    let e2 = e2_q(prec).into_ring(&qq);
    let quarter = BigRational::new(1.into(), 4.into());
    let delta = e2
        .verschiebung(2)
        .scalar_mul(&qq.from_i64(2))
        .sub(&e2)
        .expect("same ring")
        .scalar_mul(&quarter);
    let delta_sq = delta.mul(&delta).expect("same ring");
    let e4 = eisenstein_q(4, prec, &qq).expect("E4 is rational");
    let eps = delta_sq
        .scalar_mul(&qq.from_i64(64))
        .sub(&e4)
        .expect("same ring")
        .scalar_mul(&BigRational::new(1.into(), 48.into()));
    let mu = delta_sq.sub(&eps).expect("same ring");
    Gamma0TwoGenerators { delta, eps, mu }
}

/// Level-2 generators reduced mod `p` through `q^prec`.
pub fn gamma0_2_generators_mod(prec: usize, field: &PrimeField) -> ReducedGenerators {
    gamma0_2_generators(prec).reduce(field).expect("denominators are powers of 2 and 3")
}
