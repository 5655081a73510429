mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use sigma_race::codec::format_ratio;
use sigma_race::numerics::{Exponent, ScalarValue};
use sigma_race::params::{
    always_less_check, always_less_check_sumform, bounds_ad_eq_bc, dominance_s0, eventual_dominance,
    global_bounds_large_s, one_change_min_d, one_change_params,
};
use sigma_race::race::{first_crossing, race_rows, race_stats, scan_constancy, Direction, RaceSpec};
use sigma_race::repro::{reference, run_table, ReproReport, TableId};
use sigma_race::sigma::{factorize, sigma_restricted, sigma_s, small_functions};
use sigma_race::witness::{
    certify_omega, certify_ratio, construct_newman_witness, crt_witness, martin_number, prime_triple_witness,
    verify_document, Artifact, Document,
};
use sigma_race::{Error, OutputFormat, Result, RunConfig};

#[derive(Parser)]
#[command(name = "sigma-race", version, about = "Divisor-sum races on arithmetic progressions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML config file; flags override its values.
    #[arg(long, env = "SIGMA_RACE_CONFIG", global = true)]
    config: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Highest precision a comparison may escalate to.
    #[arg(long = "prec-cap", global = true)]
    prec_cap: Option<u32>,
    /// Progression members per sieve segment.
    #[arg(long, global = true)]
    segment: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// Candidate budget for prime searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// σ_s(n), optionally restricted to divisors d ≡ residue (mod q), and
    /// the small arithmetic functions of n.
    Eval {
        n: BigUint,
        #[arg(long, allow_hyphen_values = true)]
        s: Exponent,
        #[arg(long = "mod", requires = "residue")]
        modulus: Option<u64>,
        #[arg(long, requires = "modulus")]
        residue: Option<u64>,
    },
    /// Races σ_s(an+b) against σ_s(cn+d).
    #[command(subcommand)]
    Race(RaceCmd),
    /// Explicit witnesses and their verification.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Bound and threshold calculators.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Recompute reference tables and diff them against the stored values.
    Repro {
        /// g-table, h-table, m-sigma-half, scan-30n, example-2n5,
        /// martin-digits or all.
        table: String,
    },
}

#[derive(Args, Clone)]
struct SpecArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    c: u64,
    #[arg(long)]
    d: u64,
    #[arg(long, allow_hyphen_values = true)]
    s: Exponent,
    /// gt looks for σ_s(an+b) > σ_s(cn+d), lt for <.
    #[arg(long, default_value = "gt")]
    dir: Direction,
}

impl SpecArgs {
    fn spec(&self) -> Result<RaceSpec> {
        RaceSpec::new(self.a, self.b, self.c, self.d, self.s.clone(), self.dir)
    }
}

#[derive(Subcommand)]
enum RaceCmd {
    /// First n where the chosen strict inequality holds.
    Cross {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        limit: u64,
    },
    /// Checks that the inequality holds for every n up to the limit; CSV
    /// output lists every row.
    Scan {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        limit: u64,
    },
    /// Sign counts, sums and harmonic sums up to the limit.
    Stats {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        limit: u64,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// n with an+b = δ·q and m_k | cn+d, with optional ratio certificate.
    Newman {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: usize,
        /// Certify σ_s(an+b) < σ_s(cn+d) for this 0 <= s <= 1.
        #[arg(long)]
        s: Option<Exponent>,
    },
    /// Primes p with σ_s(p-1) > σ_s(p) < σ_s(p+1).
    Triple {
        #[arg(long)]
        s: Exponent,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// n on both sides of σ_s(an+b) against σ_s(an+d).
    Crt {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        s: Exponent,
        #[arg(long)]
        q: Option<u64>,
    },
    /// The explicit product-of-primes index.
    Martin,
    /// Re-derives every check of a witness document from scratch.
    Verify { file: PathBuf },
}

#[derive(Args)]
struct Abcd {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    c: u64,
    #[arg(long)]
    d: u64,
}

#[derive(Subcommand)]
enum ParamsCmd {
    /// Ratio bounds when ad = bc.
    Bounds {
        #[command(flatten)]
        abcd: Abcd,
        #[arg(long, allow_hyphen_values = true)]
        s: Exponent,
    },
    /// Ratio bounds for |s| > 1.
    Global {
        #[command(flatten)]
        abcd: Abcd,
        #[arg(long, allow_hyphen_values = true)]
        s: Exponent,
    },
    /// s0 beyond which a > c, b >= d wins for every n >= 1.
    Dominance {
        #[command(flatten)]
        abcd: Abcd,
        /// Also bisect for a real s0.
        #[arg(long)]
        real: bool,
    },
    /// N and s0 beyond which the larger leading coefficient wins.
    NFinder {
        #[command(flatten)]
        abcd: Abcd,
        #[arg(long)]
        real: bool,
    },
    /// σ_s(an+b) < σ_s(cn+d) for all n and s >= s0, when ad > bc.
    AlwaysLess {
        #[command(flatten)]
        abcd: Abcd,
        #[arg(long)]
        s0: Exponent,
    },
    /// Same conclusion when ad < bc and a+b < c+d.
    AlwaysLessSum {
        #[command(flatten)]
        abcd: Abcd,
        #[arg(long)]
        s0: Exponent,
    },
    /// Least d giving '<' for n <= M and '>' eventually, for all s >= s0.
    ThmaMinD {
        #[arg(long)]
        s0: Exponent,
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        /// Validate this d as well.
        #[arg(long = "check-d")]
        check_d: Option<u64>,
    },
    /// d = (M+q)(a-c)+b and the s0 beyond which the crossing is at M+1.
    Thma2 {
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        /// q1/q2 with 0 < q1 < q2.
        #[arg(long)]
        q: String,
        #[arg(long)]
        real: bool,
    },
}

fn load_config(g: &Global) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::from_toml_str(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.prec {
        cfg.precision = v;
        cfg.precision_cap = cfg.precision_cap.max(v);
    }
    if let Some(v) = g.prec_cap {
        cfg.precision_cap = v;
    }
    if let Some(v) = g.segment {
        cfg.segment_size = v;
    }
    if let Some(v) = g.parallel {
        cfg.parallelism = v;
    }
    if let Some(v) = g.budget {
        cfg.prime_budget = v;
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(f) = g.format {
        cfg.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
            Format::Human => OutputFormat::Human,
        };
    }
    if let Some(p) = &g.out {
        cfg.output = Some(p.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Command output plus the exit code to finish with.
struct Outcome {
    text: String,
    code: u8,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn show(v: &ScalarValue) -> String {
    v.display(30)
}

#[derive(Serialize)]
struct EvalOut {
    #[serde(with = "sigma_race::codec::biguint")]
    n: BigUint,
    s: Exponent,
    sigma_s: ScalarValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    restricted: Option<ScalarValue>,
    #[serde(with = "sigma_race::codec::biguint")]
    tau: BigUint,
    #[serde(with = "sigma_race::codec::biguint")]
    sigma: BigUint,
    #[serde(with = "sigma_race::codec::biguint")]
    phi: BigUint,
    omega: u32,
    big_omega: u32,
}

fn eval(n: BigUint, s: Exponent, restrict: Option<(u64, u64)>, cfg: &RunConfig) -> Result<String> {
    if n == BigUint::from(0u32) {
        return Err(Error::Domain("n must be positive".into()));
    }
    let f = factorize(&n, None, cfg.rho_budget, cfg.seed)?;
    let value = sigma_s(&f, &s, cfg.precision)?;
    let restricted = match restrict {
        Some((q, r)) => Some(sigma_restricted(&f, q, r, &s, cfg.precision, cfg.divisor_cap)?),
        None => None,
    };
    let small = small_functions(&f);
    let out = EvalOut {
        n,
        s,
        sigma_s: value,
        restricted,
        tau: small.tau,
        sigma: small.sigma,
        phi: small.phi,
        omega: small.omega,
        big_omega: small.big_omega,
    };
    match cfg.format {
        OutputFormat::Human => {
            let mut text = format!("{}\n", show(&out.sigma_s));
            if let Some(r) = &out.restricted {
                text += &format!("restricted: {}\n", show(r));
            }
            text += &format!(
                "tau: {}\nsigma: {}\nphi: {}\nomega: {}\nbig_omega: {}\n",
                out.tau, out.sigma, out.phi, out.omega, out.big_omega
            );
            Ok(text)
        }
        f => render::record(&out, f),
    }
}

fn race(cmd: RaceCmd, cfg: &RunConfig) -> Result<String> {
    let row = |n: u64, l: &ScalarValue, r: &ScalarValue, sign: String| vec![n.to_string(), show(l), show(r), sign];
    match cmd {
        RaceCmd::Cross { spec, limit } => {
            let spec = spec.spec()?;
            let found = first_crossing(&spec, limit, cfg)?;
            match cfg.format {
                OutputFormat::Csv => {
                    let rows = found
                        .iter()
                        .map(|x| row(x.n, &x.left, &x.right, spec.direction.to_string()));
                    let mut text = render::csv_table(&["n", "left", "right", "sign"], rows)?;
                    text += &match &found {
                        Some(x) => format!("# crossing={} precision_used={}\n", x.n, x.precision_used),
                        None => format!("# crossing=none limit={limit}\n"),
                    };
                    Ok(text)
                }
                OutputFormat::Json => render::json(&found),
                OutputFormat::Human => Ok(match &found {
                    Some(x) => format!("crossing: {}\n", x.n) + &render::human(x)?,
                    None => format!("crossing: none up to {limit}\n"),
                }),
            }
        }
        RaceCmd::Scan { spec, limit } => {
            let spec = spec.spec()?;
            let report = scan_constancy(&spec, limit, cfg)?;
            match cfg.format {
                OutputFormat::Csv => {
                    let rows = race_rows(&spec, 1, limit, cfg)?;
                    let mut text = render::csv_table(
                        &["n", "left", "right", "sign"],
                        rows.iter().map(|r| row(r.n, &r.left, &r.right, r.sign.to_string())),
                    )?;
                    text += &format!(
                        "# holds={} first_violation={} checked={}\n",
                        report.holds,
                        report.first_violation.map_or("none".into(), |n| n.to_string()),
                        report.checked
                    );
                    Ok(text)
                }
                OutputFormat::Json => render::json(&report),
                OutputFormat::Human => Ok(if report.holds { "holds\n" } else { "violated\n" }.to_string()
                    + &render::human(&report)?),
            }
        }
        RaceCmd::Stats { spec, limit } => render::record(&race_stats(&spec.spec()?, limit, cfg)?, cfg.format),
    }
}

fn witness(cmd: WitnessCmd, cfg: &RunConfig) -> Result<Outcome> {
    let ladder = cfg.precision_ladder();
    let artifact = match cmd {
        WitnessCmd::Newman { a, b, c, d, k, s } => {
            let w = construct_newman_witness(a, b, c, d, k, cfg.prime_budget)?;
            let certificate = match s {
                Some(s) => Some(certify_ratio(&w, &s, cfg.precision)?),
                None => None,
            };
            let omega = certify_omega(&w)?;
            Artifact::Newman {
                witness: w,
                certificate,
                omega,
            }
        }
        WitnessCmd::Triple { s, count } => Artifact::Triple {
            witnesses: prime_triple_witness(&s, count, cfg.prime_budget, &ladder)?,
        },
        WitnessCmd::Crt { a, b, d, s, q } => Artifact::Crt {
            witness: crt_witness(a, b, d, &s, q, cfg.prime_budget, &ladder)?,
        },
        WitnessCmd::Martin => Artifact::Martin { record: martin_number() },
        WitnessCmd::Verify { file } => {
            let doc = Document::from_json(&std::fs::read_to_string(file)?)?;
            let report = verify_document(&doc, &ladder)?;
            return Ok(render::record(&report, cfg.format)?.into());
        }
    };
    // Artifacts are always JSON so that `witness verify` can read them back.
    Ok((Document::new(artifact).to_json()? + "\n").into())
}

fn parse_q(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::Parse(format!("q must look like q1/q2, got {text:?}"));
    let (n, d) = text.split_once('/').ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?))
}

fn params(cmd: ParamsCmd, cfg: &RunConfig) -> Result<String> {
    let cap = cfg.zeta_terms_cap;
    let fmt = cfg.format;
    match cmd {
        ParamsCmd::Bounds { abcd: Abcd { a, b, c, d }, s } => {
            let p = bounds_ad_eq_bc(a, b, c, d, &s, cfg.precision)?;
            let (lo, hi) = p.bounds.outer();
            match fmt {
                OutputFormat::Human => Ok(format!(
                    "({}, {})\n{}",
                    ratio_text(&lo),
                    ratio_text(&hi),
                    render::human(&p)?
                )),
                f => render::record(&p, f),
            }
        }
        ParamsCmd::Global { abcd: Abcd { a, b, c, d }, s } => {
            render::record(&global_bounds_large_s(a, b, c, d, &s, cfg.precision, cap)?, fmt)
        }
        ParamsCmd::Dominance { abcd: Abcd { a, b, c, d }, real } => {
            render::record(&dominance_s0(a, b, c, d, real, cap)?, fmt)
        }
        ParamsCmd::NFinder { abcd: Abcd { a, b, c, d }, real } => {
            render::record(&eventual_dominance(a, b, c, d, real, cap)?, fmt)
        }
        ParamsCmd::AlwaysLess { abcd: Abcd { a, b, c, d }, s0 } => {
            render::record(&always_less_check(a, b, c, d, &s0, cap)?, fmt)
        }
        ParamsCmd::AlwaysLessSum { abcd: Abcd { a, b, c, d }, s0 } => {
            render::record(&always_less_check_sumform(a, b, c, d, &s0, cap)?, fmt)
        }
        ParamsCmd::ThmaMinD { s0, m, a, b, c, check_d } => {
            let r = one_change_min_d(&s0, m, a, b, c, check_d, cap)?;
            match fmt {
                OutputFormat::Human => {
                    let verdict = match r.check.map(|c| c.truth) {
                        Some(sigma_race::params::Truth::Holds) => "valid\n",
                        Some(sigma_race::params::Truth::Fails) => "invalid\n",
                        Some(sigma_race::params::Truth::Undecided) => "indeterminate\n",
                        None => "",
                    };
                    Ok(verdict.to_string() + &render::human(&r)?)
                }
                f => render::record(&r, f),
            }
        }
        ParamsCmd::Thma2 { m, a, b, c, q, real } => {
            let (q1, q2) = parse_q(&q)?;
            render::record(&one_change_params(m, a, b, c, q1, q2, real, cap)?, fmt)
        }
    }
}

fn ratio_text(r: &BigRational) -> String {
    format_ratio(r)
}

fn repro(table: &str, cfg: &RunConfig) -> Result<Outcome> {
    let ids: Vec<TableId> = if table == "all" {
        TableId::ALL.to_vec()
    } else {
        vec![table.parse()?]
    };
    let r = reference()?;
    let reports: Vec<ReproReport> = ids
        .into_iter()
        .map(|id| run_table(id, &r, cfg))
        .collect::<Result<_>>()?;
    let pass = reports.iter().all(ReproReport::pass);
    let text = match cfg.format {
        OutputFormat::Json => render::json(&reports)?,
        OutputFormat::Csv => render::csv_table(
            &["table", "cell", "expected", "actual", "pass"],
            reports.iter().flat_map(|rep| {
                rep.cells.iter().map(move |c| {
                    vec![
                        rep.table.to_string(),
                        c.label.clone(),
                        c.expected.clone(),
                        c.actual.clone(),
                        c.pass.to_string(),
                    ]
                })
            }),
        )?,
        OutputFormat::Human => {
            let mut text = String::new();
            for rep in &reports {
                for c in &rep.cells {
                    text += &format!(
                        "{} {} {}: expected {}, got {}\n",
                        if c.pass { "PASS" } else { "FAIL" },
                        rep.table,
                        c.label,
                        c.expected,
                        c.actual
                    );
                }
            }
            text + if pass { "all cells pass\n" } else { "some cells FAILED\n" }
        }
    };
    Ok(Outcome {
        text,
        code: if pass { 0 } else { 5 },
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = load_config(&cli.global)?;
    let outcome = match cli.command {
        Command::Eval { n, s, modulus, residue } => eval(n, s, modulus.zip(residue), &cfg)?.into(),
        Command::Race(cmd) => race(cmd, &cfg)?.into(),
        Command::Witness(cmd) => witness(cmd, &cfg)?,
        Command::Params(cmd) => params(cmd, &cfg)?.into(),
        Command::Repro { table } => repro(&table, &cfg)?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => ExitCode::from(o.code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
