//! `nilcalc`: exact functional calculus at nilpotent matrices and
//! exceptional points, from the command line.
//!
//! Exit status: 0 on success, 1 when `verify` finds a mismatch (or an
//! internal consistency check fails), 2 on bad input.

mod input;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use nilcalc::scan::{sharpness_scan, summarize, BlockStructure, ScanConfig};
use nilcalc::verify::{run_suite, CaseOutcome};
use nilcalc::{
    analyze_depth, apply_function_at_ep, ep_decompose, evolution_at, modified_resolvent, resolvent_expansion,
    time_evolution, DepthReport, EpReport, Error, ExactMatrix, FunctionSpec, GaussianRational, Mechanism,
};
use serde::Serialize;

use input::Config;
use table::{fields, Table};

type G = GaussianRational;

#[derive(Parser)]
#[command(name = "nilcalc", version, about = "Exact functional calculus at nilpotent matrices and exceptional points")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    /// RNG seed for `scan`
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file with flag values (`json`, `seed`, `n`, `r`, `trials`, `t`, `function`)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in worked examples against their expected values
    Verify,
    /// Depth report for F(N) (nilpotent input) or F(H) (exceptional point)
    Analyze {
        /// Matrix JSON file, or `-` for stdin
        matrix: PathBuf,
        /// Function spec as inline JSON or `@file`
        #[arg(long)]
        function: Option<String>,
    },
    /// Sharpness scan of the depth bound over random series
    Scan {
        /// Jordan block sizes, e.g. `2..5`
        #[arg(long)]
        n: Option<String>,
        /// Contact orders, e.g. `1..3`
        #[arg(long)]
        r: Option<String>,
        /// Trials per (n, r)
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Propagator exp(tH) at an exceptional point
    Evolve {
        matrix: PathBuf,
        /// Evaluate the polynomial part at this time
        #[arg(long)]
        t: Option<String>,
    },
    /// Resolvent expansion, or the modified resolvent of F when given
    Resolvent {
        matrix: PathBuf,
        #[arg(long)]
        function: Option<String>,
    },
}

struct Ctx {
    json: bool,
    config: Config,
}

impl Ctx {
    fn function(&self, flag: Option<&str>) -> Result<Option<FunctionSpec>> {
        match flag {
            Some(arg) => input::parse_function(arg).map(Some),
            None => self.config.function(),
        }
    }

    fn print<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value)?);
        } else {
            print!("{}", text());
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::InvariantViolation(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = Config::load(cli.config.as_ref())?;
    let ctx = Ctx {
        json: cli.json || config.json.unwrap_or(false),
        config,
    };
    match cli.command {
        Command::Verify => verify(&ctx),
        Command::Analyze { matrix, function } => {
            let h = input::read_matrix(&matrix)?;
            let spec = ctx
                .function(function.as_deref())?
                .ok_or_else(|| anyhow!("analyze needs --function"))?;
            analyze(&ctx, &h, &spec)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { n, r, trials } => {
            let scan = ScanConfig {
                n_range: input::parse_range(n.or(ctx.config.n.clone()).as_deref().unwrap_or("2..5"))?,
                r_range: input::parse_range(r.or(ctx.config.r.clone()).as_deref().unwrap_or("1..3"))?,
                trials: trials.or(ctx.config.trials).unwrap_or(50),
                seed: cli.seed.or(ctx.config.seed).unwrap_or(0),
            };
            scan_cmd(&ctx, &scan)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve { matrix, t } => {
            let h = input::read_matrix(&matrix)?;
            let t = match t {
                Some(text) => Some(input::parse_scalar(&text)?),
                None => ctx.config.t()?,
            };
            evolve(&ctx, &h, t)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolvent { matrix, function } => {
            let h = input::read_matrix(&matrix)?;
            let spec = ctx.function(function.as_deref())?;
            resolvent(&ctx, &h, spec.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    passed: bool,
    cases: &'a [CaseOutcome],
}

fn verify(ctx: &Ctx) -> Result<ExitCode> {
    let cases = run_suite()?;
    let passed = cases.iter().all(CaseOutcome::passed);
    ctx.print(&VerifyOutput { passed, cases: &cases }, || {
        let mut t = Table::new(["case", "function", "r", "bound", "effective", "mechanism", "status"]);
        for c in &cases {
            t.row([
                c.case.clone(),
                c.function.clone(),
                c.observed.contact_order.to_string(),
                c.observed.bound.to_string(),
                c.observed.effective_index.to_string(),
                c.observed.mechanism.to_string(),
                if c.passed() { "ok".into() } else { "MISMATCH".into() },
            ]);
        }
        let mut out = t.render();
        for c in cases.iter().filter(|c| !c.passed()) {
            if c.observed != c.expected {
                out.push_str(&format!(
                    "{}: expected (r, bound, effective, mechanism) = ({}, {}, {}, {}), observed ({}, {}, {}, {})\n",
                    c.case,
                    c.expected.contact_order,
                    c.expected.bound,
                    c.expected.effective_index,
                    c.expected.mechanism,
                    c.observed.contact_order,
                    c.observed.bound,
                    c.observed.effective_index,
                    c.observed.mechanism,
                ));
            }
            for check in c.checks.iter().filter(|k| !k.ok) {
                out.push_str(&format!("{}: check failed: {}\n", c.case, check.what));
            }
        }
        let ok = cases.iter().filter(|c| c.passed()).count();
        out.push_str(&format!("{ok}/{} cases match\n", cases.len()));
        out
    })?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
#[serde(tag = "input", rename_all = "snake_case")]
enum Analysis {
    Nilpotent {
        function: String,
        mechanism: Mechanism,
        report: DepthReport,
    },
    ExceptionalPoint {
        function: String,
        mechanism: Mechanism,
        report: EpReport<G>,
    },
}

fn analyze(ctx: &Ctx, h: &ExactMatrix, spec: &FunctionSpec) -> Result<()> {
    let analysis = match h.nilpotency_index() {
        Ok(cert) => {
            let m = cert.index - 1;
            let series = spec.series_at(&G::default(), m)?;
            Analysis::Nilpotent {
                function: spec.to_string(),
                mechanism: spec.mechanism(m),
                report: analyze_depth(&series, h)?,
            }
        }
        Err(Error::NotNilpotent { .. }) => {
            let ep = ep_decompose(h)?;
            let series = spec.series_at(&ep.lambda, ep.m())?;
            Analysis::ExceptionalPoint {
                function: spec.to_string(),
                mechanism: spec.mechanism(ep.m()),
                report: apply_function_at_ep(&ep, &series)?,
            }
        }
        Err(e) => return Err(e.into()),
    };
    ctx.print(&analysis, || match &analysis {
        Analysis::Nilpotent {
            function,
            mechanism,
            report,
        } => fields([
            ("input", format!("nilpotent, {}x{}", h.dim(), h.dim())),
            ("function", function.clone()),
            ("index m+1", report.m_plus_1.to_string()),
            ("contact order r", report.contact_order.to_string()),
            ("bound", report.bound.to_string()),
            ("effective index", report.effective_index.to_string()),
            ("sharp", report.sharp.to_string()),
            ("mechanism", mechanism.to_string()),
        ]),
        Analysis::ExceptionalPoint {
            function,
            mechanism,
            report,
        } => fields([
            (
                "input",
                format!("exceptional point, {}x{}", report.ep.dimension, report.ep.dimension),
            ),
            ("lambda", report.ep.lambda.to_string()),
            ("order", report.ep.order.to_string()),
            ("function", function.clone()),
            ("contact order r", report.contact_order.to_string()),
            ("depth before", report.depth_before.to_string()),
            ("depth bound after", report.depth_bound_after.to_string()),
            ("depth effective after", report.depth_effective_after.to_string()),
            ("annihilated", report.annihilated.to_string()),
            ("traced pole order", report.traced_pole_order.to_string()),
            ("matrix pole order", report.matrix_pole_order.to_string()),
            ("pole bound m+1-r", report.pole_bound.to_string()),
            ("mechanism", mechanism.to_string()),
        ]),
    })
}

#[derive(Serialize)]
struct StructureSummary {
    structure: BlockStructure,
    trials: usize,
    sharp: usize,
    frequency: f64,
}

fn scan_cmd(ctx: &Ctx, config: &ScanConfig) -> Result<()> {
    let records = sharpness_scan(config)?;
    let per_cell = summarize(&records);
    let per_structure: Vec<StructureSummary> = [BlockStructure::Single, BlockStructure::Mixed]
        .into_iter()
        .filter_map(|structure| {
            let rows: Vec<_> = records.iter().filter(|r| r.structure == structure).collect();
            (!rows.is_empty()).then(|| {
                let sharp = rows.iter().filter(|r| r.sharp).count();
                StructureSummary {
                    structure,
                    trials: rows.len(),
                    sharp,
                    frequency: sharp as f64 / rows.len() as f64,
                }
            })
        })
        .collect();

    if ctx.json {
        for rec in &records {
            println!("{}", serde_json::to_string(rec)?);
        }
        let summary = serde_json::json!({
            "summary": { "seed": config.seed, "by_cell": per_cell, "by_structure": per_structure }
        });
        println!("{summary}");
        return Ok(());
    }

    let mut t = Table::new(["n", "r", "trial", "structure", "blocks", "hash", "bound", "effective", "sharp"]);
    for rec in &records {
        let blocks: Vec<String> = rec.blocks.iter().map(usize::to_string).collect();
        t.row([
            rec.n.to_string(),
            rec.r.to_string(),
            rec.trial.to_string(),
            format!("{:?}", rec.structure).to_lowercase(),
            blocks.join("+"),
            rec.coeffs_hash.clone(),
            rec.bound.to_string(),
            rec.effective.to_string(),
            rec.sharp.to_string(),
        ]);
    }
    print!("{}", t.render());
    println!();
    let mut s = Table::new(["n", "r", "structure", "trials", "sharp", "frequency"]);
    for c in &per_cell {
        s.row([
            c.n.to_string(),
            c.r.to_string(),
            format!("{:?}", c.structure).to_lowercase(),
            c.trials.to_string(),
            c.sharp.to_string(),
            c.frequency.to_string(),
        ]);
    }
    for c in &per_structure {
        s.row([
            "all".into(),
            "all".into(),
            format!("{:?}", c.structure).to_lowercase(),
            c.trials.to_string(),
            c.sharp.to_string(),
            c.frequency.to_string(),
        ]);
    }
    print!("{}", s.render());
    Ok(())
}

fn numbered_matrices<'a>(label: &str, ms: impl IntoIterator<Item = &'a ExactMatrix>) -> String {
    ms.into_iter()
        .enumerate()
        .map(|(j, m)| format!("{label}_{j} =\n{m}\n"))
        .collect()
}

fn evolve(ctx: &Ctx, h: &ExactMatrix, t: Option<G>) -> Result<()> {
    let ep = ep_decompose(h).context("evolve needs an exceptional point")?;
    match t {
        None => {
            let poly = time_evolution(&ep);
            ctx.print(&poly, || {
                let mut out = fields([("lambda", ep.lambda.to_string()), ("order", ep.order.to_string())]);
                out.push_str(&format!(
                    "U(t) = exp(({}) t) * sum_j t^j M_j\n",
                    ep.lambda
                ));
                out.push_str(&numbered_matrices("M", &poly.matrix_coeffs));
                out
            })
        }
        Some(t) => {
            let at = evolution_at(&ep, &t);
            ctx.print(&at, || {
                let mut out = fields([
                    ("t", t.to_string()),
                    ("prefactor exponent lambda*t", at.scalar_prefactor_exponent.to_string()),
                ]);
                out.push_str(&format!("polynomial part =\n{}\n", at.polynomial_part));
                out
            })
        }
    }
}

fn resolvent(ctx: &Ctx, h: &ExactMatrix, spec: Option<&FunctionSpec>) -> Result<()> {
    let ep = ep_decompose(h).context("resolvent needs an exceptional point")?;
    match spec {
        None => {
            let exp = resolvent_expansion(&ep);
            ctx.print(&exp, || {
                let mut out = fields([("lambda", ep.lambda.to_string()), ("pole order", exp.pole_order.to_string())]);
                out.push_str("(zI - H)^-1 = sum_j C_j / (z - lambda)^(j+1)\n");
                out.push_str(&numbered_matrices("C", &exp.coeffs));
                out
            })
        }
        Some(spec) => {
            let series = spec.series_at(&ep.lambda, ep.m())?;
            let res = modified_resolvent(&ep, &series)?;
            ctx.print(&res, || {
                let traced: Vec<String> = res.traced.coeffs.iter().map(G::to_string).collect();
                let mut out = fields([
                    ("lambda", ep.lambda.to_string()),
                    ("function", spec.to_string()),
                    ("traced coefficients", format!("[{}]", traced.join(", "))),
                    ("traced pole order", res.traced_pole_order.to_string()),
                    ("matrix pole order", res.matrix_pole_order.to_string()),
                ]);
                out.push_str("F(H)(zI - H)^-1 = sum_j C_j / (z - lambda)^(j+1)\n");
                out.push_str(&numbered_matrices("C", &res.matrix_valued.coeffs));
                out
            })
        }
    }
}
