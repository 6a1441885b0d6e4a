//! Acceptance gate: one line per criterion, exit status nonzero on any failure.
//!
//! All comparisons are exact (integers, rationals, or residues); the only
//! numeric knobs are the precisions and sample sizes pinned below.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use divbeta_core::betafamily::{a_seq, enumerate};
use divbeta_core::closedform::{corollary_recursive, section5_form, theorem_main_5};
use divbeta_core::conditions::{check_all, C4Status};
use divbeta_core::exactnum::{FpPoly, IntegerRing, Multiplicity, PrimeField, RationalField, Ring};
use divbeta_core::level1::{form_to_q, Level1Form};
use divbeta_core::level2::{
    dehomogenize, e4_div_order_p5, eisenstein_level2, epm1_certificate_divisor, epm1_div_order, l2, Level2Poly,
};
use divbeta_core::qseries::{delta_q, eisenstein_q, gamma0_2_generators, gamma0_2_generators_mod, QSeries};
use divbeta_core::search::{divisibility_table, solve, SearchProblem};
use divbeta_core::sweep::{indices, pairs, theorem_sweep};
use divbeta_core::Execution;

const IDENTITY_PRECISION: usize = 100;
const ORACLE_PRECISION: usize = 60;
const ORACLE_SAMPLES: usize = 50;
const ORACLE_MAX_WEIGHT: u64 = 600;
const ORACLE_SEED: u64 = 0x5eed_0002;
const SWEEP_MAX_N: u32 = 3;
const SWEEP_MAX_R: u64 = 3;
const SEARCH_MAX_N: u32 = 2;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sum(parts: &[Level1Form]) -> Level1Form {
    parts.iter().skip(1).fold(parts[0].clone(), |a, b| a.add(b).unwrap())
}

fn mono(a: u64, b: u64, c: i64) -> Level1Form {
    Level1Form::monomial(a, b, c)
}

fn c01_small_powers() -> Outcome {
    for i in 1..=4u64 {
        let sol = solve(&SearchProblem::new(5, i, 1, false).map_err(|e| e.to_string())?, Execution::default())
            .map_err(|e| e.to_string())?;
        ensure(sol.form == Level1Form::delta_power(2 * i), || format!("f_{i} = {}", sol.form))?;
    }
    let sol = solve(&SearchProblem::new(5, 5, 5, false).unwrap(), Execution::default()).map_err(|e| e.to_string())?;
    ensure(sol.form == Level1Form::delta_power(10), || format!("f_5/5 = {}", sol.form))?;
    Ok("D^2, D^4, D^6, D^8, D^10".into())
}

fn c02_twenty_five_twenty_nine() -> Outcome {
    let sol = solve(&SearchProblem::new(5, 25, 29, true).unwrap(), Execution::default()).map_err(|e| e.to_string())?;
    let want = vec![0, 0, 0, 0, 0, 0, 0, 4, 3];
    ensure(sol.coeffs == want, || format!("coefficients {:?}", sol.coeffs))?;
    ensure(sol.form == sum(&[Level1Form::delta_power(50), mono(42, 24, 4), mono(41, 27, 3)]), || sol.form.to_string())?;
    Ok(format!("{}", sol.form))
}

fn c03_divisibility_table() -> Outcome {
    let got: Vec<Multiplicity> = divisibility_table(25, 1..=9).into_iter().map(|(_, o)| o).collect();
    let want: Vec<Multiplicity> = [3, 7, 9, 13, 15, 19, 21, 25, 27].into_iter().map(Multiplicity::Finite).collect();
    ensure(got == want, || format!("{got:?}"))?;
    let lead = e4_div_order_p5(&Level1Form::delta_power(50));
    ensure(lead == Multiplicity::Finite(25), || format!("L2 D^50 order {lead}"))?;
    Ok("3 7 9 13 15 19 21 25 27; D^50 -> 25".into())
}

fn c04_example_rows() -> Outcome {
    let corr = [
        mono(2300, 600, 3),
        mono(2275, 675, 1),
        mono(2260, 720, 1),
        mono(2255, 735, 2),
        mono(2252, 744, 1),
        mono(2251, 747, 2),
    ];
    let rows: [(u64, u64, usize); 6] = [(626, 675, 1), (676, 725, 2), (726, 735, 3), (736, 745, 4), (746, 747, 5), (748, 749, 6)];
    let js: Vec<u64> = (626..=749).collect();
    let results = Execution::default().map(&js, |&j| -> Result<(), String> {
        let (_, _, k) = *rows.iter().find(|(lo, hi, _)| (*lo..=*hi).contains(&j)).expect("row");
        let mut parts = vec![Level1Form::delta_power(2500)];
        parts.extend_from_slice(&corr[..k]);
        let want = sum(&parts);
        let (f, _) = theorem_main_5(1250, j, false).map_err(|e| format!("j={j}: {e}"))?;
        ensure(f.congruent_mod(&want, 5), || format!("j={j}: {f}"))?;
        let rep = check_all(&f, 5, 1250, j).map_err(|e| e.to_string())?;
        ensure(rep.fully_verified(), || format!("j={j}: {rep:?}"))
    });
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    let below = theorem_main_5(1250, 625, false).map_err(|e| e.to_string())?.0;
    ensure(below == Level1Form::delta_power(2500), || "j=625 not a pure power".into())?;
    Ok(format!("{} values of j, six rows, all C1-C4", js.len()))
}

fn c05_theorem_sweep() -> Outcome {
    let is = indices(5, SWEEP_MAX_N, SWEEP_MAX_R);
    let all = pairs(5, &is);
    let entries = theorem_sweep(&all, false, Execution::default()).map_err(|e| e.to_string())?;
    let bad: Vec<String> = entries.iter().filter(|e| !e.report.fully_verified()).map(|e| format!("({}, {})", e.i, e.j)).collect();
    ensure(bad.is_empty(), || format!("condition failures at {}", bad.join(" ")))?;
    let small: Vec<(u64, u64)> =
        all.iter().copied().filter(|&(i, _)| divbeta_core::betafamily::decompose(5, i).1 <= SEARCH_MAX_N).collect();
    let compared = theorem_sweep(&small, true, Execution::default()).map_err(|e| e.to_string())?;
    let diverged: Vec<String> =
        compared.iter().filter(|e| e.search_agrees != Some(true)).map(|e| format!("({}, {})", e.i, e.j)).collect();
    ensure(diverged.is_empty(), || format!("search diverges at {}", diverged.join(" ")))?;
    Ok(format!("{} pairs verified; search agrees on {}", entries.len(), compared.len()))
}

fn c06_recursion() -> Outcome {
    for (n, r) in [(1u32, 2u64), (1, 3), (2, 2)] {
        let rec = corollary_recursive(n, r).map_err(|e| e.to_string())?;
        let i = r * 5u64.pow(n + 1);
        let (thm, _) = theorem_main_5(i, a_seq(5, n + 1), false).map_err(|e| e.to_string())?;
        ensure(rec.congruent_mod(&thm, 5), || format!("(n, r) = ({n}, {r}): {rec} vs {thm}"))?;
    }
    Ok("(1,2) (1,3) (2,2)".into())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c07_generator_anchors() -> Outcome {
    let g = gamma0_2_generators(8);
    let delta = [rat(1, 4), rat(6, 1), rat(6, 1), rat(24, 1), rat(6, 1), rat(36, 1), rat(24, 1)];
    let eps = [rat(1, 16), rat(-1, 1), rat(7, 1), rat(-28, 1), rat(71, 1), rat(-126, 1), rat(196, 1)];
    ensure(g.delta.coeffs()[..7] == delta, || format!("delta {:?}", &g.delta.coeffs()[..7]))?;
    ensure(g.eps.coeffs()[..7] == eps, || format!("eps {:?}", &g.eps.coeffs()[..7]))?;
    Ok("7 + 7 coefficients".into())
}

fn product_delta(prec: usize) -> QSeries<IntegerRing> {
    // q * prod (1 - q^n)^24
    let mut acc = QSeries::monomial(IntegerRing, 1, prec);
    for n in 1..=prec {
        let factor = QSeries::from_fn(IntegerRing, prec, |k| {
            if k == 0 {
                BigInt::one()
            } else if k == n {
                BigInt::from(-1)
            } else {
                BigInt::zero()
            }
        });
        acc = acc.mul(&factor.pow(24)).unwrap();
    }
    acc
}

fn c08_identities() -> Outcome {
    let n = IDENTITY_PRECISION;
    let qq = RationalField;
    let g = gamma0_2_generators(n);
    let e4 = eisenstein_q(4, n, &qq).unwrap();
    let e6 = eisenstein_q(6, n, &qq).unwrap();
    let delta = product_delta(n).into_ring(&qq);
    let lin = |a: i64, x: &QSeries<RationalField>, b: i64, y: &QSeries<RationalField>| {
        x.scalar_mul(&qq.from_i64(a)).add(&y.scalar_mul(&qq.from_i64(b))).unwrap()
    };
    ensure(e4 == lin(64, &g.mu, 16, &g.eps), || "E4 = 64 mu + 16 eps".into())?;
    ensure(e4.verschiebung(2) == lin(4, &g.mu, 16, &g.eps), || "V2 E4 = 4 mu + 16 eps".into())?;
    let mu_eps2 = g.mu.mul(&g.eps).unwrap().mul(&g.eps).unwrap();
    ensure(delta == mu_eps2.scalar_mul(&qq.from_i64(64)), || "Delta = 64 mu eps^2".into())?;
    let mu2_eps = g.mu.mul(&g.mu).unwrap().mul(&g.eps).unwrap();
    ensure(delta.verschiebung(2) == mu2_eps, || "V2 Delta = mu^2 eps".into())?;
    let lhs = delta.scalar_mul(&qq.from_i64(1728));
    ensure(lhs == e4.pow(3).sub(&e6.pow(2)).unwrap(), || "1728 Delta = E4^3 - E6^2".into())?;
    ensure(delta_q(n, &IntegerRing) == product_delta(n), || "delta_q vs product".into())?;
    Ok(format!("five identities through q^{n}"))
}

fn c09_series_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(ORACLE_SEED);
    let mut checked = 0;
    for p in [5u64, 11, 13] {
        let field = PrimeField::new(p).unwrap();
        let gens = gamma0_2_generators_mod(ORACLE_PRECISION, &field);
        for _ in 0..ORACLE_SAMPLES {
            let a = rng.gen_range(0..=ORACLE_MAX_WEIGHT / 12);
            let b = rng.gen_range(0..=(ORACLE_MAX_WEIGHT - 12 * a) / 4);
            if a == 0 && b == 0 {
                continue;
            }
            let f = mono(a, b, 1);
            let sym = l2(&f, &field).to_q(&gens.delta, &gens.eps, &gens.mu).unwrap();
            let s = form_to_q(&f, ORACLE_PRECISION, &field).unwrap();
            let series = s.verschiebung(2).sub(&s).unwrap();
            ensure(sym == series, || format!("p={p} a={a} b={b}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} monomials through q^{ORACLE_PRECISION}"))
}

fn gf_poly(p: u64, weight: u64, parity: u8, coeffs: &[u64]) -> Level2Poly<PrimeField> {
    Level2Poly::new(PrimeField::new(p).unwrap(), weight, parity, coeffs.to_vec()).unwrap()
}

fn c10_eleven() -> Outcome {
    let e = eisenstein_level2(11).map_err(|e| e.to_string())?;
    let want = gf_poly(11, 10, 1, &[1, 7, 1]);
    ensure(*e == want, || format!("{e}"))?;
    let f = PrimeField::new(11).unwrap();
    let prod = Level2Poly::delta(f).mul(&Level2Poly::linear(f, 1, 3)).unwrap().mul(&Level2Poly::linear(f, 1, 4)).unwrap();
    ensure(prod == want, || format!("product {prod}"))?;
    Ok(format!("{e}"))
}

fn c11_thirteen() -> Outcome {
    let e = eisenstein_level2(13).map_err(|e| e.to_string())?;
    let want = gf_poly(13, 12, 0, &[1, 4, 9, 12]);
    ensure(*e == want, || format!("{e}"))?;
    let f = PrimeField::new(13).unwrap();
    let quad = gf_poly(13, 8, 0, &[1, 5, 1]);
    let prod = Level2Poly::linear(f, 1, 12).mul(&quad).unwrap().scale(&12);
    ensure(prod == want, || format!("product {prod}"))?;
    Ok(format!("{e}"))
}

fn golden_677() -> Vec<u64> {
    let text = include_str!("../golden/e676_mod677.txt");
    let mut coeffs = vec![0u64; 170];
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let v: Vec<u64> = line.split_whitespace().map(|t| t.parse().unwrap()).collect();
        coeffs[v[0] as usize] = v[2];
    }
    coeffs
}

fn c12_six_seven_seven() -> Outcome {
    let e = eisenstein_level2(677).map_err(|e| e.to_string())?;
    let want = golden_677();
    ensure(e.delta_parity() == 0 && e.weight() == 676, || "shape".into())?;
    let diffs: Vec<usize> = (0..170).filter(|&a| e.coeffs()[a] != want[a]).collect();
    ensure(diffs.is_empty(), || format!("{} mismatches, first at mu^{}", diffs.len(), diffs[0]))?;
    Ok("170 coefficients".into())
}

fn c13_eleven_thirteen_677() -> Outcome {
    let mut checked = 0;
    for p in [11u64, 13] {
        for n in 0..=1u32 {
            for r in 1..=2u64 {
                let f = section5_form(p, r, n, false).map_err(|e| e.to_string())?;
                let i = r * p.pow(n);
                let order = epm1_div_order(&f, p, u64::MAX).map_err(|e| e.to_string())?;
                ensure(order.at_least(p.pow(n)), || format!("p={p} i={i}: order {order}"))?;
                for j in 1..=p.pow(n) {
                    let rep = check_all(&f, p, i, j).map_err(|e| e.to_string())?;
                    ensure(rep.fully_verified(), || format!("p={p} i={i} j={j}: {rep:?}"))?;
                    checked += 1;
                }
            }
        }
    }
    let f11 = PrimeField::new(11).unwrap();
    let mut prod = FpPoly::one(f11);
    for c in 1..=10u64 {
        prod = prod.mul(&FpPoly::new(f11, vec![11 - c, 1])).unwrap();
    }
    ensure(prod == FpPoly::from_i64(f11, &[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]), || "x^10 - 1 split".into())?;
    let f677 = PrimeField::new(677).unwrap();
    let e = FpPoly::new(f677, golden_677());
    let xn = FpPoly::x_pow_mod(38194, &e).map_err(|e| e.to_string())?;
    ensure(xn == FpPoly::one(f677), || "x^38194 != 1 mod e(x)".into())?;
    let (div, _) = epm1_certificate_divisor(677).map_err(|e| e.to_string())?;
    ensure(div == e, || "fitted certificate divisor differs from printed table".into())?;
    let big = section5_form(677, 1, 0, false).map_err(|e| e.to_string())?;
    let rep = check_all(&big, 677, 1, 1).map_err(|e| e.to_string())?;
    ensure(rep.fully_verified(), || format!("D^38194: {rep:?}"))?;
    let exact = dehomogenize(&l2(&big, &f677)).map_err(|e| e.to_string())?;
    let m = divbeta_core::exactnum::factor_multiplicity(&exact.poly, &e).map_err(|e| e.to_string())?;
    ensure(m == Multiplicity::Finite(1), || format!("multiplicity {m}"))?;
    Ok(format!("{checked} (p, i, j) certified; x^10-1 splits; e | x^38194 - 1; D^38194 certified"))
}

fn c14_seven() -> Outcome {
    for i in 1..=20u64 {
        let pr = SearchProblem::new(7, i, 1, false).map_err(|e| e.to_string())?;
        ensure(pr.m_max == 0, || format!("i={i}: {} unknowns", pr.m_max))?;
        let sol = solve(&pr, Execution::Sequential).map_err(|e| e.to_string())?;
        ensure(sol.form == Level1Form::delta_power(4 * i), || format!("i={i}: {}", sol.form))?;
        let c4 = sol.report.c4_at_2.as_ref().map(|r| r.status);
        ensure(sol.report.passed() && c4 == Some(C4Status::Inapplicable), || format!("i={i}: {:?}", sol.report))?;
    }
    Ok("D^(4i) for i <= 20, C4 inapplicable".into())
}

fn without(range: std::ops::RangeInclusive<u64>, drop: &[u64]) -> Vec<u64> {
    range.filter(|j| !drop.contains(j)).collect()
}

fn c15_enumeration() -> Outcome {
    for r in [1u64, 2, 3, 4, 6] {
        ensure(enumerate(5, 5 * r) == vec![1, 2, 3, 4, 5], || format!("5r, r={r}"))?;
    }
    ensure(enumerate(5, 25) == without(1..=25, &[5]), || "i = 25".into())?;
    for r in [2u64, 3, 4, 6] {
        ensure(enumerate(5, 25 * r) == without(1..=29, &[5]), || format!("25r, r={r}"))?;
    }
    for i in 1..=100 {
        ensure(enumerate(7, i).first() == Some(&1), || format!("beta_{i} at 7"))?;
    }
    let js = enumerate(5, 1250);
    let excluded: Vec<u64> = (1..=749).filter(|j| !js.contains(j)).collect();
    let rule_iii: Vec<u64> = (1..=29).map(|k| 5 * k).collect();
    ensure(excluded == rule_iii, || format!("excluded {excluded:?}"))?;
    ensure(js.len() == 720, || format!("{} values", js.len()))?;
    // Rule (iii) excludes multiples of 5 up to a_3 = 145, not just up to 125.
    ensure(!js.contains(&130) && !js.contains(&145) && js.contains(&150), || "bound".into())?;
    Ok("lists match; exclusions for i = 1250 run through 145 (not 125)".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "small powers of Delta by search", budget: secs(1), run: c01_small_powers },
        Criterion { id: 2, name: "f_25/29 by search", budget: secs(5), run: c02_twenty_five_twenty_nine },
        Criterion { id: 3, name: "E4-divisibility table at i = 25", budget: secs(5), run: c03_divisibility_table },
        Criterion { id: 4, name: "closed forms for i = 1250, j = 626..749", budget: secs(600), run: c04_example_rows },
        Criterion { id: 5, name: "p = 5 sweep n <= 3, r <= 3 (+ search n <= 2)", budget: secs(600), run: c05_theorem_sweep },
        Criterion { id: 6, name: "recursive form agrees mod 5", budget: secs(60), run: c06_recursion },
        Criterion { id: 7, name: "delta / eps anchor coefficients", budget: secs(1), run: c07_generator_anchors },
        Criterion { id: 8, name: "level-2 identities as Q-series", budget: secs(5), run: c08_identities },
        Criterion { id: 9, name: "symbolic L2 vs series oracle", budget: secs(30), run: c09_series_oracle },
        Criterion { id: 10, name: "E10 on Gamma0(2) mod 11", budget: secs(1), run: c10_eleven },
        Criterion { id: 11, name: "E12 on Gamma0(2) mod 13", budget: secs(1), run: c11_thirteen },
        Criterion { id: 12, name: "E676 on Gamma0(2) mod 677", budget: secs(60), run: c12_six_seven_seven },
        Criterion { id: 13, name: "Delta powers at 11, 13, 677", budget: secs(60), run: c13_eleven_thirteen_677 },
        Criterion { id: 14, name: "p = 7 forced ansatz", budget: secs(1), run: c14_seven },
        Criterion { id: 15, name: "beta family enumeration", budget: secs(1), run: c15_enumeration },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let timing = if elapsed > c.budget {
            format!("{:.2?} over budget {:?}", elapsed, c.budget)
        } else {
            format!("{elapsed:.2?}")
        };
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {}  [{timing}]  {detail}", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}  {}  [{timing}]  {detail}", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
