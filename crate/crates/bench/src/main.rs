use std::fs::File;
use std::io;
use std::process::ExitCode;

use clap::Parser;
use exocone_bench::output::write_csv;
use exocone_bench::{run_matrix, Family, Form, InstanceSpec, RunOptions, Variant};

/// Generate a seeded benchmark instance, solve it in the requested
/// formulations and write the statistics as CSV.
#[derive(Parser, Debug)]
#[command(name = "bench", version)]
struct Args {
    /// portfolio, matcompletion, matregression, expdesign[-rt|-log] or polymin
    family: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    variant: Option<Variant>,
    /// Comma-separated list of nf, ef-exp, ef-sec.
    #[arg(long, value_delimiter = ',', default_value = "nf")]
    form: Vec<Form>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Seconds per solve.
    #[arg(long, default_value_t = 1800.0)]
    time_limit: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let family: Family = match args.family.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let variant = match (args.family.as_str(), args.variant) {
        (_, Some(v)) => v,
        ("expdesign-log", None) => Variant::Log,
        _ => Variant::Rt,
    };
    let m = match (family.uses_m(), args.m) {
        (true, Some(m)) => m,
        (true, None) => {
            eprintln!("error: {family} requires --m");
            return ExitCode::from(2);
        }
        (false, _) => 0,
    };
    let specs: Vec<InstanceSpec> = args
        .form
        .iter()
        .map(|&form| InstanceSpec::new(family, args.k, m, args.seed, form).with_variant(variant))
        .collect();
    let records = run_matrix(&specs, &RunOptions::new(args.tol, args.time_limit));
    for rec in &records {
        if let Some(err) = &rec.error {
            eprintln!("{} {}: {err}", family, rec.spec.form);
        }
    }
    let written = match &args.out {
        Some(path) => File::create(path).map_err(Into::into).and_then(|f| write_csv(f, &records)),
        None => write_csv(io::stdout().lock(), &records),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
