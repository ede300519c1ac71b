//! Command-line front end of the fragmentation laboratory.

use std::path::PathBuf;
use std::process::ExitCode;

use frag_lab::moments::{mc_moment, MomentTarget};
use frag_lab::parallel::{replica_map, substream, tag};
use frag_lab::report::{MomentReport, OutputFormat, Report, RunConfig, TestVerdict};
use frag_lab::{run_acceptance_suite, HarnessError};
use rrt_sim::{clusters_at, gen_clocks, gen_tree, sorted_weights, weights_at};

const USAGE: &str = "\
frag-lab: simulation and verification of recursive-tree fragmentation laws

USAGE:
  frag-lab <COMMAND> [FLAGS]

COMMANDS:
  simulate   Tree block weights over a t-grid (top-ranked weights per replica)
  rates      Exact rational jump-rate table of the restricted chain (JSON/CSV)
  moments    Monte Carlo moments vs closed forms, as a MomentReport table
  ou         Jump-driven OU moment generating function vs the exact MGF
  theta      Exact subtree-size law tables (general formula or brute force)
  verify     Full acceptance suite; exit code reflects overall pass

COMMON FLAGS:
  --seed <u64>        Master seed (default 42)
  --threads <k>       Worker threads (default: available parallelism)
  --n <size>          Tree size / restriction level (default 1000000)
  --replicas <m>      Monte Carlo replicas (default 2000)
  --t <list>          Comma-separated times, e.g. 0.5,1.0
  --q <list>          Comma-separated moment orders, e.g. 1,2
  --format json|csv   Report format (default json)
  --out <path>        Write the report to a file (default: stdout summary)

COMMAND FLAGS:
  simulate: --top <k>       ranked weights kept per (replica, t) (default 3)
  moments:  --target mellin|rho:<i>|total|joint:<q2>|c3:<block>
  ou:       --delta <d>     small-jump truncation (default 1e-3)
            --no-gaussian   compensation only, no Gaussian surrogate
  theta:    --j <parts> --k <size> [--brute]

EXAMPLES:
  frag-lab rates --n 5
  frag-lab moments --n 1000000 --replicas 2000 --t 0.5,0.693 --q 1,2
  frag-lab ou --delta 0.001 --replicas 20000 --t 1.0 --q 1
  frag-lab theta --j 3 --k 7
  frag-lab verify --seed 42 --out report.json
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    match run(&args[0], &args[1..]) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}\n\n{USAGE}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug, Clone)]
struct Flags {
    cfg: RunConfig,
    target: String,
    delta: f64,
    gaussian: bool,
    j: usize,
    k: u64,
    brute: bool,
    top: usize,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            cfg: RunConfig::default(),
            target: "mellin".into(),
            delta: 1e-3,
            gaussian: true,
            j: 2,
            k: 6,
            brute: false,
            top: 3,
        }
    }
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut f = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut value = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("missing value for {name}"))
        };
        match arg.as_str() {
            "--seed" => f.cfg.seed = parse(&value("--seed")?, "seed")?,
            "--threads" => f.cfg.threads = parse(&value("--threads")?, "threads")?,
            "--n" => f.cfg.n = parse(&value("--n")?, "n")?,
            "--replicas" => f.cfg.replicas = parse(&value("--replicas")?, "replicas")?,
            "--t" => f.cfg.t_list = parse_list(&value("--t")?)?,
            "--q" => f.cfg.q_list = parse_list(&value("--q")?)?,
            "--format" => f.cfg.format = value("--format")?.parse()?,
            "--out" => f.cfg.out = Some(PathBuf::from(value("--out")?)),
            "--target" => f.target = value("--target")?,
            "--delta" => f.delta = parse(&value("--delta")?, "delta")?,
            "--no-gaussian" => f.gaussian = false,
            "--j" => f.j = parse(&value("--j")?, "j")?,
            "--k" => f.k = parse(&value("--k")?, "k")?,
            "--brute" => f.brute = true,
            "--top" => f.top = parse(&value("--top")?, "top")?,
            other => return Err(format!("unknown flag '{other}'")),
        }
    }
    if f.cfg.threads == 0 || f.cfg.replicas == 0 {
        return Err("threads and replicas must be >= 1".into());
    }
    Ok(f)
}

fn parse<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("invalid value '{s}' for {name}"))
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| parse::<f64>(p.trim(), "list entry"))
        .collect()
}

fn run(command: &str, rest: &[String]) -> Result<bool, String> {
    let flags = parse_flags(rest)?;
    let result = match command {
        "simulate" => cmd_simulate(&flags),
        "rates" => cmd_rates(&flags),
        "moments" => cmd_moments(&flags),
        "ou" => cmd_ou(&flags),
        "theta" => cmd_theta(&flags),
        "verify" => return cmd_verify(&flags).map_err(|e| e.to_string()),
        other => return Err(format!("unknown command '{other}'")),
    };
    result.map(|_| true).map_err(|e| e.to_string())
}

fn emit(report: &Report, cfg: &RunConfig) -> Result<(), HarnessError> {
    if let Some(path) = &cfg.out {
        report.write(path, cfg.format)?;
        println!("report written to {}", path.display());
    } else {
        match cfg.format {
            OutputFormat::Json => println!("{}", report.to_json()?),
            OutputFormat::Csv => print!("{}", report.to_csv()),
        }
    }
    Ok(())
}

/// Per-replica ranked block weights over the grid, as MomentReport-free CSV
/// rows through the report envelope's verdict-less moment list.
fn cmd_simulate(flags: &Flags) -> Result<(), HarnessError> {
    let cfg = &flags.cfg;
    let n = cfg.n as u32;
    let ts = {
        let mut ts = cfg.t_list.clone();
        ts.sort_by(f64::total_cmp);
        ts
    };
    let top = flags.top.max(1);
    let rows: Vec<Vec<(f64, usize, f64)>> = replica_map(
        cfg.threads,
        cfg.replicas,
        || (),
        |_, r| {
            let mut rng = substream(cfg.seed, tag::CLI_SIMULATE, r);
            let tree = gen_tree(n, &mut rng).expect("n >= 1");
            let clocks = gen_clocks(n, &mut rng).expect("n >= 2");
            let mut out = Vec::new();
            for &t in &ts {
                let w = weights_at(&clusters_at(&tree, &clocks, t));
                let ranked = sorted_weights(&w);
                for (rank, &value) in ranked.iter().take(top).enumerate() {
                    out.push((t, rank + 1, value));
                }
            }
            out
        },
    );
    let mut report = Report::new(cfg.seed);
    for (replica, row) in rows.iter().enumerate() {
        for &(t, rank, value) in row {
            report.moments.push(MomentReport {
                label: format!("replica{replica}.rank{rank}"),
                estimate: value,
                stderr: 0.0,
                exact: f64::NAN,
                z: f64::NAN,
                n: cfg.n,
                replicas: cfg.replicas,
                t,
                q: rank as f64,
            });
        }
    }
    emit(&report, cfg)
}

fn cmd_rates(flags: &Flags) -> Result<(), HarnessError> {
    let cfg = &flags.cfg;
    let table = urn_rates::RateTable::build(cfg.n as u32)?;
    match (&cfg.out, cfg.format) {
        (Some(path), OutputFormat::Json) => {
            std::fs::write(path, serde_json::to_string_pretty(&table)?)?;
            println!("rate table written to {}", path.display());
        }
        (Some(path), OutputFormat::Csv) => {
            std::fs::write(path, rates_csv(&table))?;
            println!("rate table written to {}", path.display());
        }
        (None, OutputFormat::Json) => println!("{}", serde_json::to_string_pretty(&table)?),
        (None, OutputFormat::Csv) => print!("{}", rates_csv(&table)),
    }
    Ok(())
}

fn rates_csv(table: &urn_rates::RateTable) -> String {
    let mut out = String::from("pi2,num,den\n");
    for e in &table.entries {
        let pi2 = e
            .pi2
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("|");
        out.push_str(&format!("{pi2},{},{}\n", e.num, e.den));
    }
    out.push_str(&format!("total,{},{}\n", table.total_num, table.total_den));
    out
}

fn parse_target(s: &str) -> Result<MomentTarget, HarnessError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["mellin"] => Ok(MomentTarget::MellinX1),
        ["total"] => Ok(MomentTarget::Total),
        ["rho", i] => Ok(MomentTarget::Rho {
            i: i.parse()
                .map_err(|_| HarnessError::Config(format!("bad rho index '{i}'")))?,
        }),
        ["joint", q2] => Ok(MomentTarget::JointX1X2 {
            q2: q2
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad joint q2 '{q2}'")))?,
            k_max: 400,
        }),
        ["c3", block] => Ok(MomentTarget::C3Limit {
            block: block
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad c3 block '{block}'")))?,
        }),
        _ => Err(HarnessError::Config(format!(
            "unknown target '{s}' (expected mellin|rho:<i>|total|joint:<q2>|c3:<block>)"
        ))),
    }
}

fn cmd_moments(flags: &Flags) -> Result<(), HarnessError> {
    let cfg = &flags.cfg;
    let target = parse_target(&flags.target)?;
    let reports = mc_moment(
        cfg.seed,
        cfg.threads,
        tag::CLI_MOMENTS,
        cfg.n,
        cfg.replicas,
        &cfg.t_list,
        &cfg.q_list,
        target,
    )?;
    let mut report = Report::new(cfg.seed);
    for r in &reports {
        println!("{r}");
    }
    report.moments = reports;
    emit(&report, cfg)
}

fn cmd_ou(flags: &Flags) -> Result<(), HarnessError> {
    let cfg = &flags.cfg;
    let mut ts = cfg.t_list.clone();
    ts.sort_by(f64::total_cmp);
    let horizon = *ts.last().ok_or_else(|| HarnessError::Config("empty t grid".into()))?;
    let ou_cfg = ou_sim::build_config(flags.delta, horizon, flags.gaussian)?;
    let rows: Vec<Vec<f64>> = replica_map(cfg.threads, cfg.replicas, || (), |_, r| {
        let mut rng = substream(cfg.seed, tag::CLI_OU, r);
        ou_sim::simulate_path(&ou_cfg, &ts, &mut rng).expect("grid within horizon")
    });
    let mut report = Report::new(cfg.seed);
    for (g, &t) in ts.iter().enumerate() {
        for &q in &cfg.q_list {
            let values: Vec<f64> = rows.iter().map(|row| (q * row[g]).exp()).collect();
            let r = frag_lab::moments::build_report(
                format!("E[exp(qU(t))] delta={} q={q} t={t}", flags.delta),
                &values,
                ou_sim::ou_mgf_exact(q, t),
                cfg.replicas,
                t,
                q,
            );
            println!("{r}");
            report.moments.push(r);
        }
    }
    emit(&report, cfg)
}

fn cmd_theta(flags: &Flags) -> Result<(), HarnessError> {
    let cfg = &flags.cfg;
    let (j, k) = (flags.j, flags.k);
    let mut report = Report::new(cfg.seed);
    let mut csv = String::from("ks,num,den\n");
    for ks in exact_dist::theta::compositions(k, j) {
        let q = exact_dist::ThetaQuery::new(j, k, ks.clone())?;
        let value = if flags.brute {
            exact_dist::theta_bruteforce(&q)?
        } else {
            exact_dist::theta_general(&q)?
        };
        let key = ks
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("|");
        csv.push_str(&format!("{key},{},{}\n", value.numer(), value.denom()));
        report.verdicts.push(TestVerdict::exact(
            &format!("theta_{j}_{k}[{key}]={}/{}", value.numer(), value.denom()),
            0.0,
            true,
        ));
    }
    match (&cfg.out, cfg.format) {
        (Some(path), OutputFormat::Csv) => {
            std::fs::write(path, &csv)?;
            println!("theta table written to {}", path.display());
        }
        (Some(path), OutputFormat::Json) => {
            report.write(path, OutputFormat::Json)?;
            println!("theta table written to {}", path.display());
        }
        _ => print!("{csv}"),
    }
    Ok(())
}

fn cmd_verify(flags: &Flags) -> Result<bool, HarnessError> {
    let outcome = run_acceptance_suite(&flags.cfg)?;
    Ok(outcome.report.pass)
}
