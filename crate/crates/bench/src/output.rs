use std::io::Write;

use serde::Serialize;

use crate::{BenchError, RunRecord};

/// Exact CSV header row.
pub const CSV_HEADER: &str =
    "family,k,m,variant,form,seed,nu,n,p,q,status,converged,iterations,solve_seconds,primal_obj,eps,eps_tilde";

/// Comment line preceding the header, recording the data distributions.
pub const DISTRIBUTIONS_COMMENT: &str = "# distributions: uniform entries U(0.1, 1.1); Gaussian entries standard normal; \
matcompletion known-entry probability 0.8";

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    k: usize,
    m: Option<usize>,
    variant: Option<&'a str>,
    form: &'a str,
    seed: u64,
    nu: Option<u64>,
    n: Option<usize>,
    p: Option<usize>,
    q: Option<usize>,
    status: &'a str,
    converged: bool,
    iterations: Option<usize>,
    solve_seconds: Option<f64>,
    primal_obj: Option<f64>,
    eps: Option<f64>,
    eps_tilde: Option<f64>,
}

impl<'a> From<&'a RunRecord> for CsvRow<'a> {
    fn from(r: &'a RunRecord) -> Self {
        let spec = &r.spec;
        CsvRow {
            family: spec.family.name(),
            k: spec.k,
            m: spec.family.uses_m().then_some(spec.m),
            variant: (spec.family == crate::Family::ExpDesign).then(|| spec.variant.name()),
            form: spec.form.name(),
            seed: spec.seed,
            nu: r.nu.map(|v| v.round() as u64),
            n: r.n,
            p: r.p,
            q: r.q,
            status: r.status_code(),
            converged: r.converged,
            iterations: r.iterations,
            solve_seconds: r.solve_seconds,
            primal_obj: r.primal_obj,
            eps: r.eps,
            eps_tilde: r.eps_tilde,
        }
    }
}

/// Writes the comment line, the header and one row per record.
pub fn write_csv<W: Write>(mut out: W, records: &[RunRecord]) -> Result<(), BenchError> {
    writeln!(out, "{DISTRIBUTIONS_COMMENT}")?;
    writeln!(out, "{CSV_HEADER}")?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for rec in records {
        writer.serialize(CsvRow::from(rec))?;
    }
    writer.flush()?;
    Ok(())
}
