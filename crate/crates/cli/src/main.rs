use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use lpacket::io;
use lpacket::suite;
use lpacket_core::chartab::character_table;
use lpacket_core::double::{crossed_s_matrix, inner_product_check, DoubleContext};
use lpacket_core::finite_field::FieldTower;
use lpacket_core::group::GroupAutomorphism;
use lpacket_core::heisenberg::heis_context_bounded;
use lpacket_core::metric::{
    from_additive_roots, metric_automorphism, metric_crossed_data, metric_validate,
};
use lpacket_core::{Error, DEFAULT_SIZE_BOUND};

/// Exact crossed S-matrices and packet data for finite groups with an
/// automorphism and for the two-parameter family over small finite fields.
#[derive(Parser)]
#[command(name = "lpacket", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the group size bound (also via LPACKET_SIZE_BOUND).
    #[arg(long, global = true)]
    size_bound: Option<usize>,
    /// Reject outputs whose cyclotomic conductor exceeds this cap.
    #[arg(long, global = true)]
    conductor_cap: Option<u32>,
    /// Seed recorded in verification reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Crossed S-matrix of a finite group with automorphism.
    Double {
        #[arg(long)]
        group: PathBuf,
        /// `id` or a path to an automorphism JSON; defaults to the one in
        /// the group file, else the identity.
        #[arg(long)]
        aut: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the two-way inner product comparison for every pair.
        #[arg(long)]
        check_ipf: bool,
        /// Additionally write a decimal CSV next to the JSON output.
        #[arg(long)]
        emit_csv: bool,
    },
    /// Validate a metric group and compute its matrices.
    Metric {
        /// p,q,s — build the kernel metric group of the family directly.
        #[arg(long, value_name = "P,Q,S")]
        from_heisenberg: Option<String>,
        #[arg(long)]
        group: Option<PathBuf>,
        /// JSON array of exact scalars, one theta value per element.
        #[arg(long)]
        theta: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Packet analysis of U(F_q) for q = p^m.
    Heisenberg {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: usize,
        /// Restrict to one s (element index in F_q).
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification bundle.
    Suite {
        #[arg(value_parser = ["finite-smoke", "heis-grid", "full"])]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact character table of a group.
    Chartable {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact JSON output (the default).
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Decimal CSV output instead (non-authoritative).
        #[arg(long)]
        csv: bool,
    },
}

fn size_bound(cli: &Cli) -> usize {
    cli.size_bound
        .or_else(|| {
            std::env::var("LPACKET_SIZE_BOUND")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_SIZE_BOUND)
}

fn write_output(path: Option<&PathBuf>, contents: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Internal(format!("serialize: {e}")))
}

/// Largest conductor appearing anywhere in a serialized value tree.
fn max_conductor(value: &serde_json::Value) -> u32 {
    match value {
        serde_json::Value::Object(map) => {
            let own = if map.contains_key("coeffs") {
                map.get("order").and_then(|v| v.as_u64()).unwrap_or(1) as u32
            } else {
                1
            };
            map.values().map(max_conductor).max().unwrap_or(1).max(own)
        }
        serde_json::Value::Array(items) => {
            items.iter().map(max_conductor).max().unwrap_or(1)
        }
        _ => 1,
    }
}

fn enforce_conductor_cap(cap: Option<u32>, json: &str) -> Result<(), Error> {
    if let Some(cap) = cap {
        let value: serde_json::Value =
            serde_json::from_str(json).map_err(|e| Error::Internal(e.to_string()))?;
        let max = max_conductor(&value);
        if max > cap {
            return Err(Error::CheckFailed(format!(
                "output conductor {max} exceeds the cap {cap}"
            )));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    let bound = size_bound(&cli);
    match cli.command {
        Command::Double { group, aut, out, check_ipf, emit_csv } => {
            let loaded = io::load_group_file(&group, bound)?;
            let table = Arc::new(loaded.table);
            let f = match aut {
                Some(arg) => io::load_automorphism(&arg, &table)?,
                None => loaded
                    .automorphism
                    .unwrap_or_else(|| GroupAutomorphism::identity(&table)),
            };
            let ctx = DoubleContext::new(table, f)?;
            let s = crossed_s_matrix(&ctx)?;
            s.verify_trace_orthonormality()?;
            let ipf = if check_ipf {
                let mut list = Vec::new();
                let mut all = true;
                for (ri, datum) in s.weil_data.iter().enumerate() {
                    for (ci, chi) in s.col_characters.iter().enumerate() {
                        let chk = inner_product_check(&ctx, datum, chi)?;
                        all &= chk.equal;
                        list.push((ri, ci, chk));
                    }
                }
                if !all {
                    let json = to_json(&io::s_matrix_json(&ctx, &s, Some(list)))?;
                    write_output(out.as_ref(), &json)?;
                    return Err(Error::CheckFailed(
                        "an inner product comparison failed; see the ledger".into(),
                    ));
                }
                Some(list)
            } else {
                None
            };
            let json = to_json(&io::s_matrix_json(&ctx, &s, ipf))?;
            enforce_conductor_cap(cli.conductor_cap, &json)?;
            if emit_csv {
                let csv_path = out
                    .as_ref()
                    .map(|p| p.with_extension("csv"))
                    .unwrap_or_else(|| PathBuf::from("s_matrix.csv"));
                std::fs::write(&csv_path, io::matrix_csv(&s.entries))
                    .map_err(|e| Error::Internal(format!("cannot write csv: {e}")))?;
            }
            write_output(out.as_ref(), &json)?;
            Ok(true)
        }
        Command::Metric { from_heisenberg, group, theta, out } => {
            let json = if let Some(triple) = from_heisenberg {
                let parts: Vec<&str> = triple.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::InvalidGroup("expected p,q,s".into()));
                }
                let p: u32 = parts[0].trim().parse().map_err(|_| {
                    Error::InvalidGroup("p must be an integer".into())
                })?;
                let q: usize = parts[1].trim().parse().map_err(|_| {
                    Error::InvalidGroup("q must be an integer".into())
                })?;
                let s_idx: usize = parts[2].trim().parse().map_err(|_| {
                    Error::InvalidGroup("s must be an element index".into())
                })?;
                let mut m = 0;
                let mut power = 1usize;
                while power < q {
                    power *= p as usize;
                    m += 1;
                }
                if power != q || m == 0 {
                    return Err(Error::InvalidGroup("q must be a power of p".into()));
                }
                let tower = FieldTower::new(p, m)?;
                let base = tower.base();
                if s_idx == 0 || s_idx >= q {
                    return Err(Error::InvalidGroup("s must be a nonzero element index".into()));
                }
                let s = base.element(s_idx);
                let roots = tower.additive_roots(&s)?;
                let (metric, maut) = from_additive_roots(&tower, &roots)?;
                let crossed = metric_crossed_data(&metric, &maut)?;
                to_json(&io::metric_json(&metric, Some(&crossed))?)?
            } else {
                let group_path = group.ok_or_else(|| {
                    Error::InvalidGroup("need --from-heisenberg or --group with --theta".into())
                })?;
                let theta_path = theta
                    .ok_or_else(|| Error::InvalidGroup("--group requires --theta".into()))?;
                let loaded = io::load_group_file(&group_path, bound)?;
                let text = std::fs::read_to_string(&theta_path).map_err(|e| {
                    Error::InvalidGroup(format!("cannot read {}: {e}", theta_path.display()))
                })?;
                let theta: Vec<lpacket_core::Cyclotomic> = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidGroup(format!("bad theta JSON: {e}")))?;
                let metric = metric_validate(Arc::new(loaded.table), theta)?;
                let crossed = match loaded.automorphism {
                    Some(aut) => {
                        let maut = metric_automorphism(&metric, aut)?;
                        Some(metric_crossed_data(&metric, &maut)?)
                    }
                    None => None,
                };
                to_json(&io::metric_json(&metric, crossed.as_ref())?)?
            };
            enforce_conductor_cap(cli.conductor_cap, &json)?;
            write_output(out.as_ref(), &json)?;
            Ok(true)
        }
        Command::Heisenberg { p, m, s, out } => {
            let ctx = heis_context_bounded(p, m, bound)?;
            if let Some(s_idx) = s {
                if s_idx == 0 || s_idx >= ctx.heis.q {
                    return Err(Error::InvalidGroup(
                        "s must be a nonzero element index of F_q".into(),
                    ));
                }
            }
            let (packets, reports, dims) = suite::build_heis_reports(&ctx, s)?;
            let json = to_json(&io::heis_report_json(&ctx, &packets, &reports, &dims))?;
            enforce_conductor_cap(cli.conductor_cap, &json)?;
            write_output(out.as_ref(), &json)?;
            Ok(true)
        }
        Command::Suite { name, out } => {
            let report = match name.as_str() {
                "finite-smoke" => suite::run_finite_smoke(cli.seed),
                "heis-grid" => suite::run_heis_grid(cli.seed),
                _ => suite::run_full(cli.seed),
            };
            for check in &report.checks {
                println!(
                    "[{}] {} — {}{}",
                    check.status,
                    check.name,
                    check.statement,
                    check
                        .witness
                        .as_ref()
                        .map(|w| format!(" [witness: {w}]"))
                        .unwrap_or_default()
                );
            }
            println!("{}: {} passed, {} failed", report.suite, report.passed, report.failed);
            let json = to_json(&report)?;
            if let Some(path) = out.as_ref() {
                write_output(Some(path), &json)?;
            }
            Ok(report.all_passed())
        }
        Command::Chartable { group, out, json: _, csv } => {
            let loaded = io::load_group_file(&group, bound)?;
            if loaded.table.n > bound {
                return Err(Error::SizeBound { bound, actual: loaded.table.n });
            }
            let t = character_table(&loaded.table)?;
            if csv {
                write_output(out.as_ref(), &io::matrix_csv(&t.values))?;
            } else {
                let json = to_json(&io::chartable_json(&loaded.table, &t))?;
                enforce_conductor_cap(cli.conductor_cap, &json)?;
                write_output(out.as_ref(), &json)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(lpacket::exit_code(e.kind()) as u8)
        }
    }
}
