use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use divbeta_core::betafamily::{enumerate, BetaIndex};
use divbeta_core::cache::{set_cache_dir, CACHE_ENV};
use divbeta_core::closedform::{section5_form, theorem_main_5, CaseTag, THEOREM_PRIMES};
use divbeta_core::conditions::{check_all, ConditionReport};
use divbeta_core::exactnum::{Multiplicity, PrimeField};
use divbeta_core::level1::{eisenstein_rep_mod_p, form_to_q, BasisTerm, E4E6Poly, Level1Form};
use divbeta_core::level2::{eisenstein_level2, l2};
use divbeta_core::qseries::gamma0_2_generators_mod;
use divbeta_core::reproduce::{self, Tier};
use divbeta_core::search::{solve, SearchProblem};
use divbeta_core::Execution;

const SCHEMA: u32 = 1;

// A closed stdout (e.g. piped into `head`) ends output quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "divbeta", version, about = "Modular forms f_{i/j} for order-p divided beta elements")]
struct Cli {
    /// Directory for cached level-2 Eisenstein representations.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Leave wall-clock timings out of the output.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Theorem,
    Search,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Default,
    Long,
}

#[derive(Subcommand)]
enum Command {
    /// List the j for which beta_{i/j} is in the order-p family.
    Enumerate {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        i: u64,
    },
    /// Compute f_{i/j} and check its conditions.
    Compute(ComputeArgs),
    /// E_{p-1} mod p in E4, E6 and, with --level2, in delta, mu, eps.
    Eisenstein {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        level2: bool,
    },
    /// Re-run reproduction items against their embedded expected values.
    Reproduce {
        /// Item ids; all items of the tier when empty.
        ids: Vec<String>,
        #[arg(long, value_enum, default_value_t = TierArg::Default)]
        tier: TierArg,
        /// Print the known ids and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(clap::Args)]
struct ComputeArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    i: u64,
    #[arg(long)]
    j: u64,
    #[arg(long, value_enum, default_value_t = Method::Theorem)]
    method: Method,
    /// Also compare L_2 f against V_2 f - f as q-series mod p to this precision.
    #[arg(long)]
    precision: Option<usize>,
    /// Accept (i, j) outside the order-p family.
    #[arg(long)]
    allow_nonfamily: bool,
    /// Use the pure Delta-power form at primes without a proof.
    #[arg(long)]
    conjecture: bool,
}

#[derive(Serialize)]
struct SearchInfo {
    coeffs: Vec<u64>,
    rank: usize,
    free: Vec<u64>,
    order: Option<Multiplicity>,
}

#[derive(Serialize)]
struct ComputeRecord {
    schema: u32,
    prime: u64,
    i: u64,
    j: u64,
    weight: u64,
    method: Method,
    form: String,
    basis_terms: Vec<BasisTerm>,
    case: Option<CaseTag>,
    conditions: ConditionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<SearchInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree_mod_p: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

impl ComputeRecord {
    fn ok(&self) -> bool {
        self.conditions.passed() && self.agree_mod_p != Some(false) && self.series_check != Some(false)
    }
}

fn exec(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn print_json(v: &impl Serialize) -> Result<()> {
    out!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn cmd_enumerate(cli: &Cli, p: u64, i: u64) -> Result<bool> {
    BetaIndex::new(p, i, 1).context("invalid index")?;
    let js = enumerate(p, i);
    match cli.format {
        Format::Json => print_json(&json!({ "schema": SCHEMA, "prime": p, "i": i, "count": js.len(), "j": js }))?,
        Format::Table => {
            for j in &js {
                out!("{j}");
            }
        }
    }
    Ok(true)
}

fn theorem_form(a: &ComputeArgs) -> Result<(Level1Form, Option<CaseTag>)> {
    if a.prime == 5 {
        let (f, tag) = theorem_main_5(a.i, a.j, a.allow_nonfamily)?;
        return Ok((f, Some(tag)));
    }
    if !a.conjecture && !THEOREM_PRIMES.contains(&a.prime) {
        bail!("no closed form at p = {}; pass --conjecture or use --method search", a.prime);
    }
    let idx = BetaIndex::new(a.prime, a.i, a.j)?;
    if !a.allow_nonfamily && !idx.is_order_p() {
        bail!("beta_{}/{} is not in the order-{} family", a.i, a.j, a.prime);
    }
    if a.j > idx.p_pow_n() {
        bail!("the Delta-power form at p = {} covers j <= {} only", a.prime, idx.p_pow_n());
    }
    Ok((section5_form(a.prime, idx.r, idx.n, a.conjecture)?, None))
}

fn series_check(f: &Level1Form, p: u64, prec: usize) -> Result<bool> {
    let field = PrimeField::new(p)?;
    let gens = gamma0_2_generators_mod(prec, &field);
    let symbolic = l2(f, &field).to_q(&gens.delta, &gens.eps, &gens.mu)?;
    let s = form_to_q(f, prec, &field)?;
    Ok(symbolic == s.verschiebung(2).sub(&s)?)
}

fn cmd_compute(cli: &Cli, a: &ComputeArgs) -> Result<bool> {
    let start = Instant::now();
    let theorem = match a.method {
        Method::Theorem | Method::Both => Some(theorem_form(a)?),
        Method::Search => None,
    };
    let search = match a.method {
        Method::Search | Method::Both => {
            let problem = SearchProblem::new(a.prime, a.i, a.j, a.allow_nonfamily)?;
            Some(solve(&problem, exec(cli))?)
        }
        Method::Theorem => None,
    };
    let agree_mod_p = match (&theorem, &search) {
        (Some((f, _)), Some(s)) => Some(f.congruent_mod(&s.form, a.prime)),
        _ => None,
    };
    let (form, case) = match (&theorem, &search) {
        (Some((f, tag)), _) => (f.clone(), *tag),
        (None, Some(s)) => (s.form.clone(), None),
        (None, None) => unreachable!(),
    };
    let conditions = match &search {
        Some(s) if theorem.is_none() => s.report.clone(),
        _ => check_all(&form, a.prime, a.i, a.j)?,
    };
    let series_check = a.precision.map(|n| series_check(&form, a.prime, n)).transpose()?;
    let record = ComputeRecord {
        schema: SCHEMA,
        prime: a.prime,
        i: a.i,
        j: a.j,
        weight: form.weight(),
        method: a.method,
        form: form.to_string(),
        basis_terms: form.terms(),
        case,
        conditions,
        search: search.map(|s| SearchInfo { coeffs: s.coeffs, rank: s.rank, free: s.free, order: s.order }),
        agree_mod_p,
        series_check,
        timing_ms: (!cli.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    match cli.format {
        Format::Json => print_json(&record)?,
        Format::Table => print_compute_table(&record),
    }
    Ok(record.ok())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_compute_table(r: &ComputeRecord) {
    out!("f_{{{}/{}}} at p = {}, weight {}", r.i, r.j, r.prime, r.weight);
    out!("  form      {}", r.form);
    if let Some(tag) = &r.case {
        let u = tag.u.map_or("-".to_string(), |u| u.to_string());
        out!("  case      u = {u}, {:?}", tag.branch);
    }
    let c = &r.conditions;
    out!("  C1        {}", yes_no(c.c1));
    if let Some(c2) = &c.c2 {
        let ord = c2.ord_q.map_or("inf".to_string(), |o| o.to_string());
        out!("  C2        {} (ord_q {ord}, {:?})", yes_no(c2.holds), c2.branch);
    }
    if let Some(c3) = c.c3 {
        out!("  C3        {}", yes_no(c3));
    }
    if let Some(c4) = &c.c4_at_2 {
        let got = c4.achieved.map_or("-".to_string(), |m| m.to_string());
        out!("  C4 (l=2)  {:?} (order {got}, need {})", c4.status, c4.required);
    }
    if let Some(s) = &r.search {
        out!("  search    c = {:?}, rank {}, free {:?}", s.coeffs, s.rank, s.free);
    }
    if let Some(agree) = r.agree_mod_p {
        out!("  agree     {}", yes_no(agree));
    }
    if let Some(ok) = r.series_check {
        out!("  series    {}", yes_no(ok));
    }
    if let Some(ms) = r.timing_ms {
        out!("  time      {ms:.1} ms");
    }
}

fn cmd_eisenstein(cli: &Cli, p: u64, level2: bool) -> Result<bool> {
    let field = PrimeField::new(p)?;
    let level1 = E4E6Poly::from_ee6(&eisenstein_rep_mod_p(p)?, field)?;
    let two = if level2 { Some(eisenstein_level2(p)?) } else { None };
    match cli.format {
        Format::Json => {
            let terms: Vec<_> =
                level1.terms().into_iter().map(|(a, b, c)| json!({ "e4_exp": a, "e6_exp": b, "coeff": c })).collect();
            let mut out = json!({
                "schema": SCHEMA,
                "prime": p,
                "weight": p - 1,
                "level1": { "form": level1.to_string(), "terms": terms },
            });
            if let Some(e) = &two {
                let terms: Vec<_> =
                    e.terms().into_iter().map(|(m, n, c)| json!({ "mu_exp": m, "eps_exp": n, "coeff": c })).collect();
                out["level2"] = json!({
                    "delta_parity": e.delta_parity(),
                    "form": e.to_string(),
                    "terms": terms,
                });
            }
            print_json(&out)?;
        }
        Format::Table => {
            out!("E_{} mod {p} = {level1}", p - 1);
            if let Some(e) = &two {
                out!("level 2: delta^{} times", e.delta_parity());
                out!("{:>6} {:>6} {:>6}", "mu", "eps", "coeff");
                for (m, n, c) in e.terms() {
                    out!("{m:>6} {n:>6} {c:>6}");
                }
            }
        }
    }
    Ok(true)
}

fn cmd_reproduce(cli: &Cli, ids: &[String], tier: TierArg, list: bool) -> Result<bool> {
    if list {
        for it in reproduce::ITEMS {
            out!("{:<18} {:<8} {}", it.id, format!("{:?}", it.tier).to_lowercase(), it.title);
        }
        return Ok(true);
    }
    let items = if ids.is_empty() {
        reproduce::select(match tier {
            TierArg::Default => Tier::Default,
            TierArg::Long => Tier::Long,
        })
    } else {
        ids.iter()
            .map(|id| reproduce::find(id).with_context(|| format!("unknown item `{id}` (try --list)")))
            .collect::<Result<Vec<_>>>()?
    };
    let reports = reproduce::run(&items, exec(cli), !cli.no_timing);
    let ok = reports.iter().all(|r| r.passed);
    match cli.format {
        Format::Json => print_json(&json!({ "schema": SCHEMA, "passed": ok, "items": reports }))?,
        Format::Table => {
            for r in &reports {
                let t = r.elapsed_ms.map_or(String::new(), |ms| format!(" [{ms} ms]"));
                out!("{} {:<18}{t} {}", if r.passed { "pass" } else { "FAIL" }, r.id, r.detail);
            }
        }
    }
    Ok(ok)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(dir) = &cli.cache_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        set_cache_dir(Some(dir.clone()));
    }
    match &cli.command {
        Command::Enumerate { prime, i } => cmd_enumerate(cli, *prime, *i),
        Command::Compute(a) => cmd_compute(cli, a),
        Command::Eisenstein { prime, level2 } => cmd_eisenstein(cli, *prime, *level2),
        Command::Reproduce { ids, tier, list } => cmd_reproduce(cli, ids, *tier, *list),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
