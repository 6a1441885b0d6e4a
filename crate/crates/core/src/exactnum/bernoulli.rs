use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Bernoulli number `B_t` with `B_1 = -1/2`, so that `-2t/B_t` is the
/// coefficient of `sum sigma_{t-1}(n) q^n` in the weight-`t` Eisenstein series.
///
/// Even indices come from the tangent numbers (integer recurrence); no
/// rational arithmetic happens until the final division.
pub fn bernoulli(t: u64) -> BigRational {
    match t {
        0 => BigRational::one(),
        1 => BigRational::new(BigInt::from(-1), BigInt::from(2)),
        _ if t % 2 == 1 => BigRational::zero(),
        _ => {
            let k = (t / 2) as usize;
            let tan = tangent_numbers(k);
            even_from_tangent(k, &tan[k - 1])
        }
    }
}

/// `B_0, B_2, ..., B_{2m}`.
pub fn bernoulli_even_table(m: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    if m == 0 {
        return out;
    }
    let tan = tangent_numbers(m);
    for k in 1..=m {
        out.push(even_from_tangent(k, &tan[k - 1]));
    }
    out
}

// B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1)), T_k the k-th tangent number.
fn even_from_tangent(k: usize, tangent: &BigInt) -> BigRational {
    let four_k = BigInt::one() << (2 * k);
    let num = tangent * BigInt::from(2 * k as u64);
    let den = &four_k * (&four_k - BigInt::one());
    let b = BigRational::new(num, den);
    if k % 2 == 1 {
        b
    } else {
        -b
    }
}

// Brent–Harvey in-place recurrence; entry k-1 ends as T_k (= tan^{(2k-1)}(0)).
fn tangent_numbers(m: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); m];
    t[0] = BigInt::one();
    for k in 1..m {
        t[k] = &t[k - 1] * BigInt::from(k as u64);
    }
    for k in 1..m {
        for j in k..m {
            t[j] = &t[j - 1] * BigInt::from((j - k) as u64) + &t[j] * BigInt::from((j - k + 2) as u64);
        }
    }
    t
}
