//! Named reproduction items with embedded expected values.
//!
//! Item ids are stable strings (`eq-1.1`, `example-1.2`, ...). Each item
//! returns a one-line summary on success or a description of the first
//! mismatch.

use std::time::Instant;

use serde::Serialize;

use crate::betafamily::{a_seq, decompose, enumerate};
use crate::closedform::{corollary_recursive, section5_form, theorem_main_5};
use crate::conditions::{check_all, C4Status};
use crate::exactnum::{factor_multiplicity, FpPoly, Multiplicity, PrimeField, RationalField, Ring};
use crate::level1::Level1Form;
use crate::level2::{dehomogenize, eisenstein_level2, epm1_certificate_divisor, l2, Level2Poly};
use crate::par::Execution;
use crate::qseries::{delta_q, eisenstein_q, gamma0_2_generators};
use crate::search::{divisibility_table, solve, SearchProblem};
use crate::sweep::{indices, pairs, theorem_sweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Default,
    Long,
}

pub struct Item {
    pub id: &'static str,
    pub tier: Tier,
    pub title: &'static str,
    run: fn() -> std::result::Result<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub id: &'static str,
    pub tier: Tier,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: Option<u128>,
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sum(parts: &[Level1Form]) -> Level1Form {
    parts.iter().skip(1).fold(parts[0].clone(), |a, b| a.add(b).expect("same weight"))
}

fn mono(a: u64, b: u64, c: i64) -> Level1Form {
    Level1Form::monomial(a, b, c)
}

fn searched(i: u64, j: u64, nonfamily: bool) -> std::result::Result<crate::search::SearchSolution, String> {
    solve(&SearchProblem::new(5, i, j, nonfamily).map_err(err)?, Execution::Sequential).map_err(err)
}

fn small_powers() -> Outcome {
    for (i, j, e) in [(1, 1, 2), (2, 1, 4), (3, 1, 6), (4, 1, 8), (5, 5, 10)] {
        let f = searched(i, j, false)?.form;
        ensure(f == Level1Form::delta_power(e), || format!("f_{i}/{j} = {f}"))?;
    }
    Ok("D^2 D^4 D^6 D^8 D^10".into())
}

fn twenty_five() -> Outcome {
    let sol = searched(25, 29, true)?;
    ensure(sol.coeffs == [0, 0, 0, 0, 0, 0, 0, 4, 3], || format!("{:?}", sol.coeffs))?;
    ensure(sol.report.fully_verified(), || format!("{:?}", sol.report))?;
    Ok(sol.form.to_string())
}

fn orders_table() -> Outcome {
    let got: Vec<Multiplicity> = divisibility_table(25, 0..=9).into_iter().map(|(_, o)| o).collect();
    let want: Vec<Multiplicity> = [25, 3, 7, 9, 13, 15, 19, 21, 25, 27].into_iter().map(Multiplicity::Finite).collect();
    ensure(got == want, || format!("{got:?}"))?;
    Ok("25 | 3 7 9 13 15 19 21 25 27".into())
}

fn rows_1250() -> Outcome {
    let corr = [
        mono(2300, 600, 3),
        mono(2275, 675, 1),
        mono(2260, 720, 1),
        mono(2255, 735, 2),
        mono(2252, 744, 1),
        mono(2251, 747, 2),
    ];
    let bounds = [675u64, 725, 735, 745, 747, 749];
    let js: Vec<u64> = (626..=749).collect();
    let bad: Vec<String> = Execution::default()
        .map(&js, |&j| -> std::result::Result<(), String> {
            let k = bounds.iter().position(|&b| j <= b).expect("j <= 749") + 1;
            let mut parts = vec![Level1Form::delta_power(2500)];
            parts.extend_from_slice(&corr[..k]);
            let (f, _) = theorem_main_5(1250, j, false).map_err(err)?;
            ensure(f.congruent_mod(&sum(&parts), 5), || format!("j={j}"))?;
            let rep = check_all(&f, 5, 1250, j).map_err(err)?;
            ensure(rep.fully_verified(), || format!("j={j} fails {:?}", rep.failed_stage))
        })
        .into_iter()
        .filter_map(|r| r.err())
        .collect();
    ensure(bad.is_empty(), || bad.join(", "))?;
    Ok(format!("{} values of j in six rows", js.len()))
}

fn sweep(max_n: u32, max_r: u64, search_n: u32) -> Outcome {
    let all = pairs(5, &indices(5, max_n, max_r));
    let entries = theorem_sweep(&all, false, Execution::default()).map_err(err)?;
    let bad: Vec<String> =
        entries.iter().filter(|e| !e.report.fully_verified()).map(|e| format!("({}, {})", e.i, e.j)).collect();
    ensure(bad.is_empty(), || format!("conditions fail at {}", bad.join(" ")))?;
    let small: Vec<(u64, u64)> = all.iter().copied().filter(|&(i, _)| decompose(5, i).1 <= search_n).collect();
    let cmp = theorem_sweep(&small, true, Execution::default()).map_err(err)?;
    let bad: Vec<String> = cmp.iter().filter(|e| !e.ok()).map(|e| format!("({}, {})", e.i, e.j)).collect();
    ensure(bad.is_empty(), || format!("search differs at {}", bad.join(" ")))?;
    Ok(format!("{} pairs, {} compared with search", entries.len(), cmp.len()))
}

fn theorem_sweep_small() -> Outcome {
    sweep(2, 3, 1)
}

fn theorem_sweep_full() -> Outcome {
    sweep(3, 3, 2)
}

fn recursion() -> Outcome {
    for (n, r) in [(1u32, 2u64), (1, 3), (2, 2)] {
        let rec = corollary_recursive(n, r).map_err(err)?;
        let (thm, _) = theorem_main_5(r * 5u64.pow(n + 1), a_seq(5, n + 1), false).map_err(err)?;
        ensure(rec.congruent_mod(&thm, 5), || format!("(n, r) = ({n}, {r})"))?;
    }
    Ok("(1,2) (1,3) (2,2)".into())
}

fn anchors() -> Outcome {
    let g = gamma0_2_generators(8);
    let r = |n: i64, d: i64| num_rational::BigRational::new(n.into(), d.into());
    let delta = [r(1, 4), r(6, 1), r(6, 1), r(24, 1), r(6, 1), r(36, 1), r(24, 1)];
    let eps = [r(1, 16), r(-1, 1), r(7, 1), r(-28, 1), r(71, 1), r(-126, 1), r(196, 1)];
    ensure(g.delta.coeffs()[..7] == delta, || "delta".into())?;
    ensure(g.eps.coeffs()[..7] == eps, || "eps".into())?;
    Ok("14 coefficients".into())
}

fn identities() -> Outcome {
    let n = 100;
    let q = RationalField;
    let g = gamma0_2_generators(n);
    let e4 = eisenstein_q(4, n, &q).map_err(err)?;
    let e6 = eisenstein_q(6, n, &q).map_err(err)?;
    let delta = delta_q(n, &q);
    let c = |k: i64| q.from_i64(k);
    let mu_eps = g.mu.mul(&g.eps).map_err(err)?;
    ensure(e4 == g.mu.scalar_mul(&c(64)).add(&g.eps.scalar_mul(&c(16))).map_err(err)?, || "E4".into())?;
    ensure(e4.verschiebung(2) == g.mu.scalar_mul(&c(4)).add(&g.eps.scalar_mul(&c(16))).map_err(err)?, || "V2 E4".into())?;
    ensure(delta == mu_eps.mul(&g.eps).map_err(err)?.scalar_mul(&c(64)), || "Delta".into())?;
    ensure(delta.verschiebung(2) == mu_eps.mul(&g.mu).map_err(err)?, || "V2 Delta".into())?;
    ensure(delta.scalar_mul(&c(1728)) == e4.pow(3).sub(&e6.pow(2)).map_err(err)?, || "1728 Delta".into())?;
    Ok(format!("through q^{n}"))
}

fn fitted(p: u64, weight: u64, parity: u8, coeffs: &[u64]) -> Outcome {
    let e = eisenstein_level2(p).map_err(err)?;
    let want = Level2Poly::new(PrimeField::new(p).map_err(err)?, weight, parity, coeffs.to_vec()).map_err(err)?;
    ensure(*e == want, || format!("got {e}"))?;
    Ok(e.to_string())
}

fn eleven_fit() -> Outcome {
    let s = fitted(11, 10, 1, &[1, 7, 1])?;
    let f = PrimeField::new(11).map_err(err)?;
    let prod = Level2Poly::delta(f).mul(&Level2Poly::linear(f, 1, 3)).and_then(|x| x.mul(&Level2Poly::linear(f, 1, 4)));
    ensure(prod.map_err(err)? == *eisenstein_level2(11).map_err(err)?, || "factorization".into())?;
    Ok(s)
}

fn thirteen_fit() -> Outcome {
    let s = fitted(13, 12, 0, &[1, 4, 9, 12])?;
    let f = PrimeField::new(13).map_err(err)?;
    let quad = Level2Poly::new(f, 8, 0, vec![1, 5, 1]).map_err(err)?;
    let prod = Level2Poly::linear(f, 1, 12).mul(&quad).map_err(err)?.scale(&12);
    ensure(prod == *eisenstein_level2(13).map_err(err)?, || "factorization".into())?;
    Ok(s)
}

/// Coefficients of `mu^a eps^(169-a)`, indexed by `a`.
pub fn golden_e676() -> Vec<u64> {
    let mut coeffs = vec![0u64; 170];
    for line in include_str!("../golden/e676_mod677.txt").lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let v: Vec<u64> = line.split_whitespace().map(|t| t.parse().expect("golden table")).collect();
        coeffs[v[0] as usize] = v[2];
    }
    coeffs
}

fn six_seven_seven_fit() -> Outcome {
    let e = eisenstein_level2(677).map_err(err)?;
    let want = golden_e676();
    let first = (0..170).find(|&a| e.coeffs()[a] != want[a]);
    ensure(first.is_none(), || format!("first mismatch at mu^{}", first.unwrap_or(0)))?;
    Ok("170 coefficients".into())
}

fn seven() -> Outcome {
    for i in 1..=20u64 {
        let pr = SearchProblem::new(7, i, 1, false).map_err(err)?;
        ensure(pr.m_max == 0, || format!("i={i}"))?;
        let sol = solve(&pr, Execution::Sequential).map_err(err)?;
        ensure(sol.form == Level1Form::delta_power(4 * i), || format!("i={i}: {}", sol.form))?;
        let st = sol.report.c4_at_2.as_ref().map(|r| r.status);
        ensure(sol.report.passed() && st == Some(C4Status::Inapplicable), || format!("i={i}"))?;
    }
    Ok("D^(4i), i <= 20; C4 inapplicable".into())
}

fn delta_powers(p: u64) -> Outcome {
    let mut count = 0;
    for n in 0..=1u32 {
        for r in 1..=2u64 {
            let f = section5_form(p, r, n, false).map_err(err)?;
            for j in 1..=p.pow(n) {
                let rep = check_all(&f, p, r * p.pow(n), j).map_err(err)?;
                ensure(rep.fully_verified(), || format!("i={} j={j}", r * p.pow(n)))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (i, j) certified"))
}

fn eleven_powers() -> Outcome {
    let f = PrimeField::new(11).map_err(err)?;
    let mut prod = FpPoly::one(f);
    for c in 1..=10u64 {
        prod = prod.mul(&FpPoly::new(f, vec![11 - c, 1])).map_err(err)?;
    }
    ensure(prod == FpPoly::from_i64(f, &[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]), || "x^10 - 1".into())?;
    delta_powers(11)
}

fn thirteen_powers() -> Outcome {
    delta_powers(13)
}

fn six_seven_seven_power() -> Outcome {
    let f = PrimeField::new(677).map_err(err)?;
    let e = FpPoly::new(f, golden_e676());
    ensure(FpPoly::x_pow_mod(38194, &e).map_err(err)? == FpPoly::one(f), || "x^38194 - 1".into())?;
    let (div, _) = epm1_certificate_divisor(677).map_err(err)?;
    ensure(div == e, || "certificate divisor".into())?;
    let g = section5_form(677, 1, 0, false).map_err(err)?;
    let rep = check_all(&g, 677, 1, 1).map_err(err)?;
    ensure(rep.fully_verified(), || format!("{:?}", rep.failed_stage))?;
    let m = factor_multiplicity(&dehomogenize(&l2(&g, &f)).map_err(err)?.poly, &e).map_err(err)?;
    ensure(m == Multiplicity::Finite(1), || format!("multiplicity {m}"))?;
    Ok("D^38194 certified, multiplicity 1".into())
}

fn listing() -> Outcome {
    let five: Vec<u64> = (1..=5).collect();
    for i in [5u64, 10, 15, 20, 30] {
        ensure(enumerate(5, i) == five, || format!("i={i}"))?;
    }
    let skip5 = |hi: u64| (1..=hi).filter(|j| *j != 5).collect::<Vec<u64>>();
    ensure(enumerate(5, 25) == skip5(25), || "i=25".into())?;
    for i in [50u64, 75, 100, 150] {
        ensure(enumerate(5, i) == skip5(29), || format!("i={i}"))?;
    }
    let js = enumerate(5, 1250);
    let excluded: Vec<u64> = (1..=749).filter(|j| !js.contains(j)).collect();
    ensure(excluded == (1..=29).map(|k| 5 * k).collect::<Vec<_>>(), || format!("{excluded:?}"))?;
    Ok("exclusions for i = 1250 end at 145".into())
}

pub const ITEMS: &[Item] = &[
    Item { id: "eq-1.1", tier: Tier::Default, title: "f_1..f_4 and f_5/5 by search", run: small_powers },
    Item { id: "eq-1.2", tier: Tier::Default, title: "f_25/29 by search", run: twenty_five },
    Item { id: "example-1.3", tier: Tier::Default, title: "E4-divisibility orders at i = 25", run: orders_table },
    Item { id: "example-1.2", tier: Tier::Long, title: "closed forms at i = 1250", run: rows_1250 },
    Item { id: "theorem-1.1", tier: Tier::Default, title: "p = 5 sweep, n <= 2", run: theorem_sweep_small },
    Item { id: "theorem-1.1-sweep", tier: Tier::Long, title: "p = 5 sweep, n <= 3", run: theorem_sweep_full },
    Item { id: "corollary-1.2", tier: Tier::Default, title: "recursive forms", run: recursion },
    Item { id: "prop-3.2", tier: Tier::Default, title: "delta and eps coefficients", run: anchors },
    Item { id: "identities", tier: Tier::Default, title: "level-2 identities", run: identities },
    Item { id: "eq-5.1", tier: Tier::Default, title: "E10 mod 11 on Gamma0(2)", run: eleven_fit },
    Item { id: "eq-5.8", tier: Tier::Default, title: "E12 mod 13 on Gamma0(2)", run: thirteen_fit },
    Item { id: "eq-5.10", tier: Tier::Long, title: "E676 mod 677 on Gamma0(2)", run: six_seven_seven_fit },
    Item { id: "theorem-5.1", tier: Tier::Default, title: "p = 7, j = 1", run: seven },
    Item { id: "theorem-5.3", tier: Tier::Default, title: "Delta powers at 11", run: eleven_powers },
    Item { id: "theorem-5.5", tier: Tier::Default, title: "Delta powers at 13", run: thirteen_powers },
    Item { id: "theorem-5.6", tier: Tier::Long, title: "Delta^38194 at 677", run: six_seven_seven_power },
    Item { id: "lemma-2.1", tier: Tier::Default, title: "family listings", run: listing },
];

pub fn find(id: &str) -> Option<&'static Item> {
    ITEMS.iter().find(|it| it.id == id)
}

/// Items at or below `tier`.
pub fn select(tier: Tier) -> Vec<&'static Item> {
    ITEMS.iter().filter(|it| it.tier <= tier).collect()
}

pub fn run_item(item: &Item, timing: bool) -> ItemReport {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(item.run).unwrap_or_else(|_| Err("panicked".into()));
    let elapsed_ms = timing.then(|| start.elapsed().as_millis());
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    ItemReport { id: item.id, tier: item.tier, title: item.title, passed, detail, elapsed_ms }
}

/// Runs `items` (in parallel unless `exec` is sequential); reports come back
/// in input order.
pub fn run(items: &[&'static Item], exec: Execution, timing: bool) -> Vec<ItemReport> {
    exec.map(items, |it| run_item(it, timing))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = ITEMS.iter().map(|i| i.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), ITEMS.len());
        assert!(find("eq-5.10").is_some());
        assert!(find("eq-9.9").is_none());
        assert!(select(Tier::Default).len() < select(Tier::Long).len());
    }

    #[test]
    fn golden_table_shape() {
        let g = golden_e676();
        assert_eq!(&g[165..], &[522, 375, 236, 127, 676]);
        assert_eq!(&g[..3], &[1, 550, 441]);
    }

    #[test]
    fn default_tier_passes() {
        for r in run(&select(Tier::Default), Execution::default(), false) {
            assert!(r.passed, "{}: {}", r.id, r.detail);
        }
    }
}
