//! CSV writers. Every file starts with one `#` provenance line.

use std::io::Write;

use num_traits::ToPrimitive;
use urn_core::simulate::Trajectory;
use urn_core::{Pmf, Rational};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `# urn <version> scheme=<hash> key=value ...`
#[derive(Debug, Clone)]
pub struct Provenance {
    pub command: String,
    pub scheme_hash: Option<String>,
    pub params: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str, scheme_hash: Option<String>) -> Self {
        Provenance {
            command: command.to_string(),
            scheme_hash,
            params: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "# urn {VERSION} {} scheme={}",
            self.command,
            self.scheme_hash.as_deref().unwrap_or("none")
        );
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }
}

/// Nearest `f64`, printed with 17 significant digits.
pub fn decimal(r: &Rational) -> String {
    format!("{:.16e}", r.to_f64().unwrap_or(f64::NAN))
}

fn with_header<W: Write>(mut out: W, provenance: &Provenance) -> Result<csv::Writer<W>> {
    writeln!(out, "{}", provenance.line())?;
    Ok(csv::Writer::from_writer(out))
}

pub fn write_distribution<W: Write>(out: W, provenance: &Provenance, pmf: &Pmf) -> Result<()> {
    let mut w = with_header(out, provenance)?;
    w.write_record(["value", "probability_num", "probability_den", "probability_float"])?;
    for (v, p) in pmf {
        w.write_record([
            v.to_string(),
            p.numer().to_string(),
            p.denom().to_string(),
            decimal(p),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Distribution rows tagged `empirical` then `exact`.
pub fn write_histogram<W: Write>(
    out: W,
    provenance: &Provenance,
    empirical: &Pmf,
    exact: Option<&Pmf>,
) -> Result<()> {
    let mut w = with_header(out, provenance)?;
    w.write_record([
        "value",
        "probability_num",
        "probability_den",
        "probability_float",
        "source",
    ])?;
    let sources = [("empirical", Some(empirical)), ("exact", exact)];
    for (source, pmf) in sources {
        for (v, p) in pmf.into_iter().flatten() {
            w.write_record([
                v.to_string(),
                p.numer().to_string(),
                p.denom().to_string(),
                decimal(p),
                source.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectories<W: Write>(
    out: W,
    provenance: &Provenance,
    colors: usize,
    trajectories: &[Trajectory],
) -> Result<()> {
    let mut w = with_header(out, provenance)?;
    let mut header = vec!["history_id".to_string(), "step".to_string()];
    header.extend((0..colors).map(|i| format!("count_color_{i}")));
    w.write_record(&header)?;
    for (id, t) in trajectories.iter().enumerate() {
        for (step, c) in t.configurations.iter().enumerate() {
            let mut record = vec![id.to_string(), step.to_string()];
            record.extend(c.counts().iter().map(u64::to_string));
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}
