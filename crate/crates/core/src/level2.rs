//! Level-two forms as homogeneous polynomials in `mu`, `eps` (with an
//! optional `delta` factor), and the `E_{p-1}`-divisibility oracles.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cache::EisensteinCache;
use crate::error::{Error, Result};
use crate::exactnum::{multiplicity_capped, FpPoly, Multiplicity, PrimeField, Ring};
use crate::level1::Level1Form;
use crate::qseries::{gamma0_2_generators_mod, QSeries};

/// `delta^parity * sum_a coeffs[a] mu^a eps^(D - a)` with
/// `weight = 2 * parity + 4 * D`.
#[derive(Clone, PartialEq)]
pub struct Level2Poly<R: Ring> {
    ring: R,
    weight: u64,
    delta_parity: u8,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Level2Poly<R> {
    pub fn new(ring: R, weight: u64, delta_parity: u8, coeffs: Vec<R::Elem>) -> Result<Self> {
        if weight % 2 == 1 || delta_parity as u64 != (weight / 2) % 2 {
            return Err(Error::BadParity { weight, parity: delta_parity });
        }
        let expected = ((weight - 2 * delta_parity as u64) / 4) as usize + 1;
        if coeffs.len() != expected {
            return Err(Error::CoordinateCount { weight, expected, got: coeffs.len() });
        }
        Ok(Level2Poly { ring, weight, delta_parity, coeffs })
    }

    pub fn zero(ring: R, weight: u64) -> Result<Self> {
        let parity = ((weight / 2) % 2) as u8;
        let len = ((weight.saturating_sub(2 * parity as u64)) / 4) as usize + 1;
        let zero = ring.zero();
        Self::new(ring, weight, parity, vec![zero; len])
    }

    /// `a * mu + b * eps`.
    pub fn linear(ring: R, a: i64, b: i64) -> Self {
        let coeffs = vec![ring.from_i64(b), ring.from_i64(a)];
        Level2Poly { ring, weight: 4, delta_parity: 0, coeffs }
    }

    pub fn delta(ring: R) -> Self {
        let one = ring.one();
        Level2Poly { ring, weight: 2, delta_parity: 1, coeffs: vec![one] }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn delta_parity(&self) -> u8 {
        self.delta_parity
    }

    /// Total degree in `mu, eps`.
    pub fn degree(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    /// `coeffs()[a]` multiplies `mu^a eps^(D - a)`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, mu_exp: u64) -> R::Elem {
        self.coeffs.get(mu_exp as usize).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// `(mu_exp, eps_exp, coeff)` for nonzero terms, descending `mu` exponent.
    pub fn terms(&self) -> Vec<(u64, u64, R::Elem)> {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(a, c)| (a as u64, d - a as u64, c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Largest `k` with `eps^k` dividing the polynomial part.
    pub fn eps_valuation(&self) -> Option<u64> {
        let top = self.coeffs.iter().rposition(|c| !self.ring.is_zero(c))?;
        Some(self.degree() - top as u64)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.ring.ensure_same(&other.ring)?;
        if self.weight != other.weight {
            return Err(Error::WeightMismatch { form: other.weight, expected: self.weight });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(Level2Poly { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.sub(a, b)).collect();
        Ok(Level2Poly { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        Level2Poly { coeffs, ..self.clone() }
    }

    /// Product, rewriting `delta^2 = mu + eps`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        let ring = &self.ring;
        let mut coeffs = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                coeffs[a + b] = ring.add(&coeffs[a + b], &ring.mul(x, y));
            }
        }
        let weight = self.weight + other.weight;
        let mut parity = self.delta_parity + other.delta_parity;
        if parity == 2 {
            let mut lifted = vec![ring.zero(); coeffs.len() + 1];
            for (a, c) in coeffs.iter().enumerate() {
                lifted[a] = ring.add(&lifted[a], c);
                lifted[a + 1] = ring.add(&lifted[a + 1], c);
            }
            coeffs = lifted;
            parity = 0;
        }
        Level2Poly::new(self.ring.clone(), weight, parity, coeffs)
    }

    /// q-expansion from the generator series (all over the same ring).
    pub fn to_q(&self, delta: &QSeries<R>, eps: &QSeries<R>, mu: &QSeries<R>) -> Result<QSeries<R>> {
        let prec = delta.precision().min(eps.precision()).min(mu.precision());
        let d = self.degree() as usize;
        let mut eps_pows = vec![QSeries::one(self.ring.clone(), prec)];
        for _ in 0..d {
            eps_pows.push(eps_pows.last().expect("nonempty").mul(eps)?);
        }
        let mut acc = QSeries::zero(self.ring.clone(), prec);
        let mut mu_pow = QSeries::one(self.ring.clone(), prec);
        for a in 0..=d {
            if !self.ring.is_zero(&self.coeffs[a]) {
                acc = acc.add(&mu_pow.mul(&eps_pows[d - a])?.scalar_mul(&self.coeffs[a]))?;
            }
            if a < d {
                mu_pow = mu_pow.mul(mu)?;
            }
        }
        if self.delta_parity == 1 {
            acc = acc.mul(delta)?;
        }
        Ok(acc)
    }
}

impl<R: Ring> fmt::Debug for Level2Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level2Poly[{}; weight {}] {}", self.ring.name(), self.weight, self)
    }
}

impl<R: Ring> fmt::Display for Level2Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (a, b, c)) in terms.iter().enumerate() {
            let mut factors = Vec::new();
            if self.delta_parity == 1 {
                factors.push("delta".to_string());
            }
            for (name, e) in [("mu", *a), ("eps", *b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let cs = self.ring.format_elem(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, cs),
            };
            out.push_str(match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            });
            if factors.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{mag}*{}", factors.join("*")));
            }
        }
        f.write_str(&out)
    }
}

// Image of sum_a c_a Delta^a E4^b under Delta -> k * mu^dm eps^de, E4 -> alpha mu + beta eps.
fn substitute<R: Ring>(f: &Level1Form, ring: &R, k: i64, dm: u64, alpha: i64, beta: i64) -> Level2Poly<R> {
    let d = f.weight() / 4;
    let mut coeffs = vec![ring.zero(); d as usize + 1];
    let max_b = f.weight() / 4;
    let (alpha, beta, k) = (ring.from_i64(alpha), ring.from_i64(beta), ring.from_i64(k));
    let mut alpha_pows = vec![ring.one()];
    let mut beta_pows = vec![ring.one()];
    for _ in 0..max_b {
        alpha_pows.push(ring.mul(alpha_pows.last().expect("nonempty"), &alpha));
        beta_pows.push(ring.mul(beta_pows.last().expect("nonempty"), &beta));
    }
    for (a, c) in f.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = a as u64;
        let b = f.e4_exp(a);
        let lead = ring.mul(&ring.from_bigint(c), &ring.pow(&k, a));
        if ring.is_zero(&lead) {
            continue;
        }
        let shift = (a * dm) as usize;
        for (s, binom) in ring.binomial_row(b).into_iter().enumerate() {
            if ring.is_zero(&binom) {
                continue;
            }
            let term = ring.mul(&ring.mul(&lead, &binom), &ring.mul(&alpha_pows[s], &beta_pows[b as usize - s]));
            coeffs[shift + s] = ring.add(&coeffs[shift + s], &term);
        }
    }
    Level2Poly { ring: ring.clone(), weight: f.weight(), delta_parity: 0, coeffs }
}

/// `iota_2`: `Delta -> 64 mu eps^2`, `E4 -> 64 mu + 16 eps`.
pub fn iota2<R: Ring>(f: &Level1Form, ring: &R) -> Level2Poly<R> {
    substitute(f, ring, 64, 1, 64, 16)
}

/// `V_2`: `Delta -> mu^2 eps`, `E4 -> 4 mu + 16 eps`.
pub fn v2<R: Ring>(f: &Level1Form, ring: &R) -> Level2Poly<R> {
    substitute(f, ring, 1, 2, 4, 16)
}

/// `L_2 = V_2 - iota_2`.
pub fn l2<R: Ring>(f: &Level1Form, ring: &R) -> Level2Poly<R> {
    v2(f, ring).sub(&iota2(f, ring)).expect("same ring and weight")
}

/// Variable convention of a [`DehomogPoly`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Variable {
    /// `x = mu / eps`
    X,
    /// `y = 4x + 1`, only at `p = 5`
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehomogPoly {
    pub poly: FpPoly,
    pub var: Variable,
}

/// `mu^a eps^b -> x^a`.
pub fn dehomogenize(p: &Level2Poly<PrimeField>) -> Result<DehomogPoly> {
    if p.delta_parity() != 0 {
        return Err(Error::DeltaParity);
    }
    Ok(DehomogPoly { poly: FpPoly::new(*p.ring(), p.coeffs().to_vec()), var: Variable::X })
}

/// Substitute `x = 4y + 1` (mod 5).
pub fn to_y_variable(p: &DehomogPoly) -> Result<DehomogPoly> {
    if p.poly.modulus() != 5 {
        return Err(Error::WrongPrime { expected: 5, got: p.poly.modulus() });
    }
    match p.var {
        Variable::Y => Ok(p.clone()),
        Variable::X => Ok(DehomogPoly { poly: p.poly.compose_linear(4, 1), var: Variable::Y }),
    }
}

// (4y + 1)^n mod 5, coefficients of y^0..y^min(n, len - 1).
fn four_y_plus_one_pow(n: u64, len: usize) -> Vec<u64> {
    let top = (n as usize).min(len.saturating_sub(1));
    let mut four = 1u64;
    (0..=top as u64)
        .map(|k| {
            let v = binomial_mod5(n, k) * four % 5;
            four = four * 4 % 5;
            v
        })
        .collect()
}

fn binomial_mod5(mut n: u64, mut k: u64) -> u64 {
    const SMALL: [[u64; 5]; 5] = [[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 2, 1, 0, 0], [1, 3, 3, 1, 0], [1, 4, 1, 4, 1]];
    let mut acc = 1;
    while k > 0 || n > 0 {
        acc = acc * SMALL[(n % 5) as usize][(k % 5) as usize] % 5;
        if acc == 0 {
            return 0;
        }
        n /= 5;
        k /= 5;
    }
    acc
}

/// `y`-coefficients `y^0..y^(len-1)` of the dehomogenized `L_2 f` mod 5,
/// via `L_2(Delta^a E4^b) = y^b ((4y+1)^(2a) - (-1)^a (4y+1)^a)` (after
/// `eps^(3a+b)`). Pass `usize::MAX` for the full polynomial.
pub fn l2_y_coeffs_p5(f: &Level1Form, len: usize) -> Vec<u64> {
    let full = (f.weight() / 4) as usize + 1;
    let len = len.min(full);
    let mut out = vec![0u64; len];
    for (a, c) in f.coords().iter().enumerate() {
        let c = PrimeField::new(5).expect("5 is prime").reduce_bigint(c);
        if c == 0 {
            continue;
        }
        let a = a as u64;
        let b = f.e4_exp(a) as usize;
        if b >= len {
            continue;
        }
        let room = len - b;
        let sq = four_y_plus_one_pow(2 * a, room);
        let lin = four_y_plus_one_pow(a, room);
        let sign = if a.is_multiple_of(2) { 4 } else { 1 }; // -(-1)^a mod 5
        for (k, v) in sq.iter().enumerate() {
            out[b + k] = (out[b + k] + c * v) % 5;
        }
        for (k, v) in lin.iter().enumerate() {
            out[b + k] = (out[b + k] + c * sign * v) % 5;
        }
    }
    out
}

/// Exact `E4`-divisibility order of `L_2 f` in level-2 forms mod 5: the
/// multiplicity of `y` in `P(y)`.
pub fn e4_div_order_p5(f: &Level1Form) -> Multiplicity {
    let coeffs = l2_y_coeffs_p5(f, usize::MAX);
    match coeffs.iter().position(|&c| c != 0) {
        Some(k) => Multiplicity::Finite(k as u64),
        None => Multiplicity::Infinite,
    }
}

/// Coefficients on `delta^parity mu^a eps^(D-a)` reproducing `g`, solved in
/// ascending q-order (`ord_q(mu^a eps^b) = a`).
pub fn fit_level2_from_q(g: &QSeries<PrimeField>, weight: u64, parity: u8) -> Result<Level2Poly<PrimeField>> {
    if weight % 2 == 1 || parity as u64 != (weight / 2) % 2 {
        return Err(Error::BadParity { weight, parity });
    }
    let field = *g.ring();
    let d = ((weight - 2 * parity as u64) / 4) as usize;
    if g.precision() < d + 1 {
        return Err(Error::InsufficientPrecision { have: g.precision(), need: d + 1 });
    }
    let prec = g.precision();
    let gens = gamma0_2_generators_mod(prec, &field);
    let mut eps_pows = vec![QSeries::one(field, prec)];
    for _ in 0..d {
        eps_pows.push(eps_pows.last().expect("nonempty").mul(&gens.eps)?);
    }
    let delta_part = if parity == 1 { gens.delta.clone() } else { QSeries::one(field, prec) };
    let mut residual = g.clone();
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut mu_pow = delta_part;
    for a in 0..=d {
        let basis = mu_pow.mul(&eps_pows[d - a])?;
        let lead = basis.coeffs()[a];
        let c = field.mul(&residual.coeffs()[a], &field.inverse(&lead)?);
        if c != 0 {
            residual = residual.sub(&basis.scalar_mul(&c))?;
        }
        coeffs.push(c);
        if a < d {
            mu_pow = mu_pow.mul(&gens.mu)?;
        }
    }
    if !residual.is_zero() {
        return Err(Error::NotInSpan { weight });
    }
    Level2Poly::new(field, weight, parity, coeffs)
}

/// Guard terms beyond the unknowns in the level-2 fit.
pub const FIT_GUARD: usize = 8;

fn fit_eisenstein(p: u64) -> Result<Level2Poly<PrimeField>> {
    let field = PrimeField::new(p)?;
    if p < 5 {
        return Err(Error::IndexRange(format!("prime {p} (need p >= 5)")));
    }
    let w = p - 1;
    let parity = ((w / 2) % 2) as u8;
    let d = ((w - 2 * parity as u64) / 4) as usize;
    fit_level2_from_q(&QSeries::one(field, d + FIT_GUARD), w, parity)
}

fn memo() -> &'static Mutex<HashMap<u64, Arc<Level2Poly<PrimeField>>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<Level2Poly<PrimeField>>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `E_{p-1}` mod `p` on `Gamma_0(2)`, fitted from its q-expansion (the
/// constant series 1). Memoized per process; consults and fills the on-disk
/// cache when one is configured.
pub fn eisenstein_level2(p: u64) -> Result<Arc<Level2Poly<PrimeField>>> {
    if let Some(hit) = memo().lock().expect("memo lock").get(&p) {
        return Ok(hit.clone());
    }
    let cache = EisensteinCache::configured();
    let poly = match cache.as_ref().map(|c| c.load(p)).transpose()?.flatten() {
        Some(poly) => poly,
        None => {
            let poly = fit_eisenstein(p)?;
            if let Some(c) = &cache {
                c.store(&poly)?;
            }
            poly
        }
    };
    let poly = Arc::new(poly);
    memo().lock().expect("memo lock").insert(p, poly.clone());
    Ok(poly)
}

/// The univariate certificate divisor for `E_{p-1}`: its dehomogenization,
/// times `x + 1` when it carries a `delta` factor (`delta^2 = mu + eps`).
pub fn epm1_certificate_divisor(p: u64) -> Result<(FpPoly, u64)> {
    let eis = eisenstein_level2(p)?;
    let field = *eis.ring();
    let e = FpPoly::new(field, eis.coeffs().to_vec());
    let eps_val = eis.eps_valuation().ok_or(Error::DivisionByZero)?;
    if eis.delta_parity() == 1 {
        Ok((e.mul(&FpPoly::from_i64(field, &[1, 1]))?, eps_val))
    } else {
        Ok((e, eps_val))
    }
}

/// Certified `E_{p-1}`-divisibility order of `L_2 f` mod `p`, capped at
/// `cap`. At `p = 5` this is exact; elsewhere it is a lower bound.
pub fn epm1_div_order(f: &Level1Form, p: u64, cap: u64) -> Result<Multiplicity> {
    let field = PrimeField::new(p)?;
    if p == 5 {
        return Ok(match e4_div_order_p5(f) {
            Multiplicity::Finite(k) => Multiplicity::Finite(k.min(cap)),
            m => m,
        });
    }
    let lf = l2(f, &field);
    let eps_val = match lf.eps_valuation() {
        Some(v) => v,
        None => return Ok(Multiplicity::Infinite),
    };
    let (e, e_eps) = epm1_certificate_divisor(p)?;
    let cap = if e_eps > 0 { cap.min(eps_val / e_eps) } else { cap };
    let poly = dehomogenize(&lf)?.poly;
    multiplicity_capped(&poly, &e, cap)
}

/// Whether `L_2 f` is certified divisible by `E_{p-1}^j` mod `p`.
pub fn epm1_div_check(f: &Level1Form, j: u64, p: u64) -> Result<bool> {
    Ok(epm1_div_order(f, p, j)?.at_least(j))
}

/// The level-2 images of `Delta` and `E4` mod `p`, for display.
pub fn generator_images(p: u64) -> Result<[(String, Level2Poly<PrimeField>); 4]> {
    let field = PrimeField::new(p)?;
    let delta = Level1Form::delta_power(1);
    let e4 = Level1Form::monomial(0, 1, BigInt::from(1));
    Ok([
        ("Delta".into(), iota2(&delta, &field)),
        ("V2 Delta".into(), v2(&delta, &field)),
        ("E4".into(), iota2(&e4, &field)),
        ("V2 E4".into(), v2(&e4, &field)),
    ])
}
