//! Level-one modular forms in the `Delta^a E_4^b` basis.
//!
//! Forms are stored as basis coordinates; q-expansions are derived views.
//! Since `ord_q(Delta^a E_4^b) = a` and the leading coefficient is 1, every
//! coordinate recovery is a unit-diagonal triangular solve.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{PrimeField, Ring};
use crate::qseries::{delta_q, eisenstein_q, QSeries};

/// A weight-`t` form (`t ≡ 0 mod 4`), `coords[a]` multiplying
/// `Delta^a E_4^{(t - 12a)/4}` for `a = 0..=t/12`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Level1Form {
    weight: u64,
    coords: Vec<BigInt>,
}

/// One nonzero basis term of a [`Level1Form`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BasisTerm {
    pub delta_exp: u64,
    pub e4_exp: u64,
    #[serde(serialize_with = "bigint_as_number")]
    pub coeff: BigInt,
}

/// Integer when it fits in `i64`, decimal string otherwise.
fn bigint_as_number<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) => s.serialize_i64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

impl Level1Form {
    pub fn new(weight: u64, coords: Vec<BigInt>) -> Result<Self> {
        if !weight.is_multiple_of(4) {
            return Err(Error::BadWeight(weight));
        }
        let expected = (weight / 12) as usize + 1;
        if coords.len() != expected {
            return Err(Error::CoordinateCount { weight, expected, got: coords.len() });
        }
        Ok(Level1Form { weight, coords })
    }

    pub fn zero(weight: u64) -> Result<Self> {
        Self::new(weight, vec![BigInt::zero(); (weight / 12) as usize + 1])
    }

    /// `coeff * Delta^delta_exp * E_4^e4_exp`.
    pub fn monomial(delta_exp: u64, e4_exp: u64, coeff: impl Into<BigInt>) -> Self {
        let weight = 12 * delta_exp + 4 * e4_exp;
        let mut f = Self::zero(weight).expect("weight is a multiple of 4");
        f.coords[delta_exp as usize] = coeff.into();
        f
    }

    pub fn delta_power(k: u64) -> Self {
        Self::monomial(k, 0, 1)
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn max_delta_exp(&self) -> u64 {
        self.weight / 12
    }

    pub fn e4_exp(&self, delta_exp: u64) -> u64 {
        (self.weight - 12 * delta_exp) / 4
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coefficient(&self, delta_exp: u64) -> &BigInt {
        &self.coords[delta_exp as usize]
    }

    /// Nonzero terms, by descending `Delta` exponent.
    pub fn terms(&self) -> Vec<BasisTerm> {
        self.coords
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| BasisTerm { delta_exp: a as u64, e4_exp: self.e4_exp(a as u64), coeff: c.clone() })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `ord_q`, read off the coordinates: the smallest `Delta` exponent with
    /// a nonzero coefficient.
    pub fn ord_q(&self) -> Option<u64> {
        self.coords.iter().position(|c| !c.is_zero()).map(|a| a as u64)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch { form: other.weight, expected: self.weight });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Level1Form { weight: self.weight, coords })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Level1Form { weight: self.weight, coords: self.coords.iter().map(|a| a * c).collect() }
    }

    /// Product in the basis: `Delta^a E_4^b * Delta^c E_4^d = Delta^{a+c} E_4^{b+d}`,
    /// so multiplication is convolution on the `Delta` index.
    pub fn mul(&self, other: &Self) -> Self {
        let weight = self.weight + other.weight;
        let mut coords = vec![BigInt::zero(); (weight / 12) as usize + 1];
        for (a, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (c, y) in other.coords.iter().enumerate() {
                if !y.is_zero() {
                    coords[a + c] += x * y;
                }
            }
        }
        Level1Form { weight, coords }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Level1Form { weight: 0, coords: vec![BigInt::one()] };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coordinates reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Self {
        let m = BigInt::from(p);
        Level1Form { weight: self.weight, coords: self.coords.iter().map(|c| c.mod_floor(&m)).collect() }
    }

    pub fn is_zero_mod(&self, p: u64) -> bool {
        let m = BigInt::from(p);
        self.coords.iter().all(|c| c.is_multiple_of(&m))
    }

    pub fn congruent_mod(&self, other: &Self, p: u64) -> bool {
        self.weight == other.weight && self.reduce_mod(p) == other.reduce_mod(p)
    }
}

impl fmt::Display for Level1Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in terms.iter().enumerate() {
            let c = &t.coeff;
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            match t.delta_exp {
                0 => {}
                1 => factors.push("D".to_string()),
                a => factors.push(format!("D^{a}")),
            }
            match t.e4_exp {
                0 => {}
                1 => factors.push("E4".to_string()),
                b => factors.push(format!("E4^{b}")),
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A form of even weight: `E_6^{e6_parity} * inner`, with `inner` of weight
/// `weight - 6 * e6_parity ≡ 0 mod 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EE6Form {
    pub weight: u64,
    pub e6_parity: u8,
    pub inner: Level1Form,
}

impl EE6Form {
    pub fn new(weight: u64, inner: Level1Form) -> Result<Self> {
        let e6_parity = ((weight / 2) % 2) as u8;
        if weight % 2 == 1 || inner.weight() + 6 * e6_parity as u64 != weight {
            return Err(Error::WeightMismatch { form: inner.weight(), expected: weight - 6 * e6_parity as u64 });
        }
        Ok(EE6Form { weight, e6_parity, inner })
    }
}

/// Precision large enough to pin down a weight-`t` form, with guard terms.
pub fn default_precision(t: u64) -> usize {
    (t / 12) as usize + 8
}

/// `Delta^a E_4^{(t-12a)/4}` for `a = 0..=t/12`, through `q^prec`.
fn basis_series<R: Ring>(t: u64, prec: usize, ring: &R) -> Result<Vec<QSeries<R>>> {
    let top = (t / 12) as usize;
    let delta = delta_q(prec, ring);
    let e4 = eisenstein_q(4, prec, ring)?;
    let e4_cube = e4.pow(3);
    let low = e4.pow(t / 4 - 3 * top as u64);
    // Delta^a * (E4^3)^(top - a) * E4^s
    let mut delta_pows = Vec::with_capacity(top + 1);
    let mut acc = QSeries::one(ring.clone(), prec);
    for _ in 0..=top {
        delta_pows.push(acc.clone());
        acc = acc.mul(&delta)?;
    }
    let mut out = vec![QSeries::zero(ring.clone(), prec); top + 1];
    let mut e4_part = low;
    for a in (0..=top).rev() {
        out[a] = delta_pows[a].mul(&e4_part)?;
        e4_part = e4_part.mul(&e4_cube)?;
    }
    Ok(out)
}

/// q-expansion of `f` through `q^prec`, coefficients in `ring`.
pub fn form_to_q<R: Ring>(f: &Level1Form, prec: usize, ring: &R) -> Result<QSeries<R>> {
    let basis = basis_series(f.weight(), prec, ring)?;
    let mut acc = QSeries::zero(ring.clone(), prec);
    for (a, c) in f.coords().iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&basis[a].scalar_mul(&ring.from_bigint(c)))?;
        }
    }
    Ok(acc)
}

/// Coordinates of `g` in the weight-`t` basis, by elimination in ascending
/// q-order. Fails if `g` is known through fewer than `t/12 + 1` terms, or if
/// a nonzero residual survives (not a weight-`t` form).
pub fn basis_coords_in<R: Ring>(g: &QSeries<R>, t: u64) -> Result<Vec<R::Elem>> {
    if !t.is_multiple_of(4) {
        return Err(Error::BadWeight(t));
    }
    let top = (t / 12) as usize;
    if g.precision() < top {
        return Err(Error::InsufficientPrecision { have: g.precision(), need: top });
    }
    let ring = g.ring().clone();
    let basis = basis_series(t, g.precision(), &ring)?;
    let mut residual = g.clone();
    let mut coords = Vec::with_capacity(top + 1);
    for (a, b) in basis.iter().enumerate() {
        let c = residual.coeffs()[a].clone();
        if !ring.is_zero(&c) {
            residual = residual.sub(&b.scalar_mul(&c))?;
        }
        coords.push(c);
    }
    if !residual.is_zero() {
        return Err(Error::NotInSpan { weight: t });
    }
    Ok(coords)
}

/// Integer coordinates of an integral q-expansion.
pub fn basis_coords(g: &QSeries<crate::exactnum::IntegerRing>, t: u64) -> Result<Level1Form> {
    Level1Form::new(t, basis_coords_in(g, t)?)
}

/// Coordinates mod `p`, lifted to `[0, p)`.
pub fn basis_coords_mod(g: &QSeries<PrimeField>, t: u64) -> Result<Level1Form> {
    Level1Form::new(t, basis_coords_in(g, t)?.into_iter().map(BigInt::from).collect())
}

/// `E_{p-1} mod p` in the level-one ring. Its q-expansion is the constant
/// series 1; when `(p-1)/2` is odd the `E_6` factor is divided out first.
pub fn eisenstein_rep_mod_p(p: u64) -> Result<EE6Form> {
    if p < 5 {
        return Err(Error::IndexRange(format!("prime {p} (need p >= 5)")));
    }
    let field = PrimeField::new(p)?;
    let t = p - 1;
    let parity = (t / 2) % 2;
    let inner_weight = t - 6 * parity;
    let prec = default_precision(t);
    let mut g = QSeries::one(field, prec);
    if parity == 1 {
        g = g.mul(&eisenstein_q(6, prec, &field)?.inverse()?)?;
    }
    let inner = basis_coords_mod(&g, inner_weight)?;
    EE6Form::new(t, inner)
}

/// A weighted-homogeneous polynomial in `E_4, E_6` over `Z/p`. Because the
/// weight is fixed, a monomial is determined by its `E_6` exponent `k`
/// (the `E_4` exponent is `(weight - 6k)/4`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E4E6Poly {
    field: PrimeField,
    weight: u64,
    by_e6: Vec<u64>,
}

impl E4E6Poly {
    fn empty(field: PrimeField, weight: u64) -> Self {
        E4E6Poly { field, weight, by_e6: vec![0; (weight / 6) as usize + 1] }
    }

    /// Expand `Delta = 1728^{-1} (E_4^3 - E_6^2)` in every basis term.
    pub fn from_level1(f: &Level1Form, field: PrimeField) -> Result<Self> {
        let p = field.modulus();
        let inv1728 = field.inv_u64(1728 % p)?;
        let mut out = Self::empty(field, f.weight());
        for (a, c) in f.coords().iter().enumerate() {
            let c = field.reduce_bigint(c);
            if c == 0 {
                continue;
            }
            let a = a as u64;
            let scale = c * field.pow(&inv1728, a) % p;
            for (l, binom) in field.binomial_row(a).into_iter().enumerate() {
                if binom == 0 {
                    continue;
                }
                let mut v = scale * binom % p;
                if l % 2 == 1 {
                    v = field.neg(&v);
                }
                let k = 2 * l;
                out.by_e6[k] = (out.by_e6[k] + v) % p;
            }
        }
        Ok(out)
    }

    pub fn from_ee6(f: &EE6Form, field: PrimeField) -> Result<Self> {
        let inner = Self::from_level1(&f.inner, field)?;
        if f.e6_parity == 0 {
            return Ok(inner);
        }
        let mut out = Self::empty(field, f.weight);
        for (k, &c) in inner.by_e6.iter().enumerate() {
            out.by_e6[k + 1] = c;
        }
        Ok(out)
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// `(e4_exp, e6_exp, coeff)` with nonzero coefficient, descending `E_4` exponent.
    pub fn terms(&self) -> Vec<(u64, u64, u64)> {
        self.by_e6
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| ((self.weight - 6 * k as u64) / 4, k as u64, c))
            .collect()
    }

    pub fn coeff(&self, e4_exp: u64, e6_exp: u64) -> u64 {
        if 4 * e4_exp + 6 * e6_exp != self.weight {
            return 0;
        }
        self.by_e6.get(e6_exp as usize).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.by_e6.iter().all(|&c| c == 0)
    }

    /// Division with remainder by a single divisor, lex order `E_4 > E_6`.
    /// With one divisor the remainder vanishes iff `divisor | self`.
    pub fn divrem(&self, divisor: &E4E6Poly) -> Result<(E4E6Poly, E4E6Poly)> {
        if self.field != divisor.field {
            return Err(Error::RingMismatch { left: self.field.name(), right: divisor.field.name() });
        }
        let field = self.field;
        let p = field.modulus();
        let lead_k = divisor.by_e6.iter().position(|&c| c != 0).ok_or(Error::DivisionByZero)?;
        let lead_i = (divisor.weight - 6 * lead_k as u64) / 4;
        let inv_lead = field.inv_u64(divisor.by_e6[lead_k])?;
        let q_weight = self.weight.checked_sub(divisor.weight);
        let mut quot = q_weight.map(|w| Self::empty(field, w));
        let mut rem = Self::empty(field, self.weight);
        let mut work = self.by_e6.clone();
        for k in 0..work.len() {
            let c = work[k];
            if c == 0 {
                continue;
            }
            let i = (self.weight - 6 * k as u64) / 4;
            match quot.as_mut() {
                Some(q) if k >= lead_k && i >= lead_i => {
                    let factor = c * inv_lead % p;
                    let shift = k - lead_k;
                    q.by_e6[shift] = (q.by_e6[shift] + factor) % p;
                    for (kd, &d) in divisor.by_e6.iter().enumerate() {
                        if d != 0 {
                            let idx = kd + shift;
                            work[idx] = (work[idx] + (p - factor) * d) % p;
                        }
                    }
                }
                _ => {
                    rem.by_e6[k] = c;
                    work[k] = 0;
                }
            }
        }
        let quot = quot.unwrap_or_else(|| Self::empty(field, 0));
        Ok((quot, rem))
    }
}

impl fmt::Display for E4E6Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|&(i, k, c)| {
                let mut s = if c == 1 && (i, k) != (0, 0) { String::new() } else { c.to_string() };
                for (name, e) in [("E4", i), ("E6", k)] {
                    match e {
                        0 => {}
                        1 => s.push_str(name),
                        _ => s.push_str(&format!("{name}^{e}")),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Whether `f ≡ E_{p-1} h mod p` for some `h` in `Z/p[E_4, E_6]`.
pub fn c3_divisible_by_epm1(f: &Level1Form, p: u64) -> Result<bool> {
    let field = PrimeField::new(p)?;
    if f.is_zero_mod(p) {
        return Err(Error::ZeroModP(p));
    }
    if f.weight() < p - 1 {
        return Ok(false);
    }
    let eis = E4E6Poly::from_ee6(&eisenstein_rep_mod_p(p)?, field)?;
    let poly = E4E6Poly::from_level1(f, field)?;
    let (_, rem) = poly.divrem(&eis)?;
    Ok(rem.is_zero())
}
