//! Sweep CSV rows.

use crate::error::{CliError, CliResult};
use serde::Deserialize;
use std::io::{Read, Write};

pub const HEADER: [&str; 9] = ["B", "alpha", "E_total", "E_kin3", "E_coulomb", "trial_E", "cert_bound", "iters", "residual"];

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "B")]
    pub b: f64,
    pub alpha: f64,
    #[serde(rename = "E_total")]
    pub e_total: f64,
    #[serde(rename = "E_kin3")]
    pub e_kin3: f64,
    #[serde(rename = "E_coulomb")]
    pub e_coulomb: f64,
    #[serde(rename = "trial_E")]
    pub trial_e: f64,
    pub cert_bound: Option<f64>,
    pub iters: usize,
    pub residual: f64,
}

impl SweepRecord {
    pub fn binding(&self) -> f64 {
        self.e_kin3 + self.e_coulomb
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRecord]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            real(r.b),
            real(r.alpha),
            real(r.e_total),
            real(r.e_kin3),
            real(r.e_coulomb),
            real(r.trial_e),
            r.cert_bound.map(real).unwrap_or_default(),
            r.iters.to_string(),
            real(r.residual),
        ])?;
    }
    w.flush().map_err(|source| CliError::Io { path: "csv output".into(), source })?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> CliResult<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(CliError::Config(format!("unexpected CSV header {header:?}")));
    }
    Ok(r.deserialize().collect::<Result<Vec<SweepRecord>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rows = vec![SweepRecord {
            b: 10f64.exp(),
            alpha: 1.0,
            e_total: 22024.6,
            e_kin3: 1.0 / 3.0,
            e_coulomb: -2.2,
            trial_e: 22024.7,
            cert_bound: None,
            iters: 23,
            residual: 1e-7,
        }];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("B,alpha,E_total,E_kin3,E_coulomb,trial_E,cert_bound,iters,residual\n"));
        assert!(text.contains("3.3333333333333331e-1"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }
}
