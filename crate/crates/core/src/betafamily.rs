//! Order-`p` divided beta family indices `(i, j)`.

use crate::error::{Error, Result};
use crate::exactnum::is_prime;

/// `i = r * p^n` with `p` not dividing `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct BetaIndex {
    pub p: u64,
    pub i: u64,
    pub j: u64,
    pub r: u64,
    pub n: u32,
}

impl BetaIndex {
    pub fn new(p: u64, i: u64, j: u64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        if i == 0 || j == 0 {
            return Err(Error::InvalidIndex { p, i, j });
        }
        let (r, n) = decompose(p, i);
        Ok(BetaIndex { p, i, j, r, n })
    }

    /// Like [`BetaIndex::new`] but also requires membership in the family.
    pub fn checked(p: u64, i: u64, j: u64) -> Result<Self> {
        let idx = Self::new(p, i, j)?;
        if !idx.is_order_p() {
            return Err(Error::InvalidIndex { p, i, j });
        }
        Ok(idx)
    }

    pub fn is_order_p(&self) -> bool {
        is_order_p(self.p, self.i, self.j)
    }

    /// `p^n`.
    pub fn p_pow_n(&self) -> u64 {
        self.p.pow(self.n)
    }
}

/// `(r, n)` with `i = r * p^n`, `p` not dividing `r`. `i` must be positive.
pub fn decompose(p: u64, i: u64) -> (u64, u32) {
    let (mut r, mut n) = (i, 0);
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r, n)
}

/// `a_0 = 0`, `a_n = p^n + p^(n-1) - 1`.
pub fn a_seq(p: u64, n: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    let hi = p.checked_pow(n).expect("a_n overflows u64");
    hi + hi / p - 1
}

/// Upper bound on `j` from the second rule. At `n = 0` the bound is 1, so
/// that `beta_i = beta_{i/1}` is always present.
fn j_bound(p: u64, n: u32) -> u64 {
    a_seq(p, n).max(1)
}

/// Membership of `beta_{i/j}` among the order-`p` elements.
pub fn is_order_p(p: u64, i: u64, j: u64) -> bool {
    if i == 0 || j == 0 {
        return false;
    }
    let (r, n) = decompose(p, i);
    if r == 1 && j > p.pow(n) {
        return false;
    }
    if j > j_bound(p, n) {
        return false;
    }
    !(j.is_multiple_of(p) && n >= 1 && j <= a_seq(p, n - 1))
}

/// All `j` with `beta_{i/j}` of order `p`, ascending.
pub fn enumerate(p: u64, i: u64) -> Vec<u64> {
    if i == 0 {
        return Vec::new();
    }
    let (r, n) = decompose(p, i);
    let top = if r == 1 { p.pow(n) } else { j_bound(p, n) };
    (1..=top).filter(|&j| is_order_p(p, i, j)).collect()
}

/// The closed-form exclusion list `p, 2p, ..., a_{n-2} p`.
pub fn closed_form_exclusions(p: u64, n: u32) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    (1..=a_seq(p, n - 2)).map(|k| k * p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn a_sequence() {
        assert_eq!(a_seq(5, 0), 0);
        assert_eq!(a_seq(5, 1), 5);
        assert_eq!(a_seq(5, 2), 29);
        assert_eq!(a_seq(5, 4), 749);
    }

    #[test]
    fn membership_examples() {
        assert!(!is_order_p(5, 25, 5));
        assert!(is_order_p(5, 50, 29));
        assert!(!is_order_p(5, 25, 29));
        assert!(is_order_p(5, 25, 25));
    }

    #[test]
    fn small_lists() {
        for r in [1, 2, 3, 4, 6, 7] {
            assert_eq!(enumerate(5, 5 * r), vec![1, 2, 3, 4, 5]);
        }
        let mut want: Vec<u64> = (1..=25).collect();
        want.retain(|&j| j != 5);
        assert_eq!(enumerate(5, 25), want);
        let mut want: Vec<u64> = (1..=29).collect();
        want.retain(|&j| j != 5);
        assert_eq!(enumerate(5, 50), want);
        assert_eq!(enumerate(7, 3), vec![1]);
        for i in 1..=100 {
            assert!(enumerate(7, i).contains(&1), "i = {i}");
        }
    }

    #[test]
    fn large_list_excludes_through_145() {
        let js = enumerate(5, 1250);
        assert_eq!(js.len(), 720);
        assert_eq!(*js.last().unwrap(), 749);
        for k in 1..=29 {
            assert!(!js.contains(&(5 * k)));
        }
        assert!(js.contains(&150));
        assert!(!js.contains(&145));
    }

    #[test]
    fn closed_form_agrees_from_n_3() {
        for p in [5u64, 7, 11] {
            for n in 3..=4u32 {
                let top = p.pow(n);
                let excluded: Vec<u64> = (1..=top).filter(|&j| !is_order_p(p, top, j)).collect();
                assert_eq!(excluded, closed_form_exclusions(p, n), "p={p} n={n}");
            }
        }
        assert!(closed_form_exclusions(5, 2).is_empty());
        assert!(!is_order_p(5, 25, 5));
    }

    proptest! {
        #[test]
        fn max_and_multiples(r in 1u64..40, n in 0u32..4, p in prop::sample::select(vec![5u64, 7, 11, 13])) {
            prop_assume!(r % p != 0);
            let i = r * p.pow(n);
            let js = enumerate(p, i);
            let max = *js.last().unwrap();
            if r == 1 {
                prop_assert_eq!(max, p.pow(n));
            } else {
                prop_assert_eq!(max, a_seq(p, n).max(1));
            }
            for &j in &js {
                if j % p == 0 {
                    prop_assert!(n >= 1 && j > a_seq(p, n - 1));
                }
            }
        }
    }
}
