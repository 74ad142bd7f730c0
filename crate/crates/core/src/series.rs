//! Norm time series: one record per `(t, channel, p, alpha)`, stored as
//! `norms.csv` with header `t,channel,p,alpha,value`.
//!
//! `alpha` is written as three digits `a1a2a3` (derivative orders in
//! `x1, x2, x3`), `p` as a number or `inf`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct NormRecord {
    pub t: f64,
    pub channel: String,
    pub p: f64,
    pub alpha: [u32; 3],
    pub value: f64,
}

pub fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub fn parse_p(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "Inf" | "infinity" => Ok(f64::INFINITY),
        x => x
            .parse::<f64>()
            .map_err(|_| Error::Format(format!("bad exponent '{x}'"))),
    }
}

pub fn format_alpha(a: [u32; 3]) -> String {
    format!("{}{}{}", a[0], a[1], a[2])
}

pub fn parse_alpha(s: &str) -> Result<[u32; 3]> {
    let d: Vec<u32> = s.trim().chars().filter_map(|c| c.to_digit(10)).collect();
    if d.len() != 3 || s.trim().len() != 3 {
        return Err(Error::Format(format!("bad multi-index '{s}'")));
    }
    Ok([d[0], d[1], d[2]])
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormTable {
    pub records: Vec<NormRecord>,
}

impl NormTable {
    pub fn push(&mut self, t: f64, channel: &str, p: f64, alpha: [u32; 3], value: f64) {
        self.records.push(NormRecord {
            t,
            channel: channel.to_string(),
            p,
            alpha,
            value,
        });
    }

    pub fn extend(&mut self, other: NormTable) {
        self.records.extend(other.records);
    }

    /// Distinct record times in increasing order.
    pub fn times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.records.iter().map(|r| r.t).collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    fn matches(r: &NormRecord, channel: &str, p: f64, alpha: [u32; 3]) -> bool {
        r.channel == channel && r.alpha == alpha && (r.p == p || (r.p.is_infinite() && p.is_infinite()))
    }

    /// `(t, value)` pairs of one channel sorted by time.
    pub fn series(&self, channel: &str, p: f64, alpha: [u32; 3]) -> Vec<(f64, f64)> {
        let mut s: Vec<(f64, f64)> = self
            .records
            .iter()
            .filter(|r| Self::matches(r, channel, p, alpha))
            .map(|r| (r.t, r.value))
            .collect();
        s.sort_by(|a, b| a.0.total_cmp(&b.0));
        s
    }

    pub fn value_at(&self, t: f64, channel: &str, p: f64, alpha: [u32; 3]) -> Option<f64> {
        self.records
            .iter()
            .find(|r| r.t == t && Self::matches(r, channel, p, alpha))
            .map(|r| r.value)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,channel,p,alpha,value\n");
        for r in &self.records {
            let _ = writeln!(
                s,
                "{:e},{},{},{},{:e}",
                r.t,
                r.channel,
                format_p(r.p),
                format_alpha(r.alpha),
                r.value
            );
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "t,channel,p,alpha,value" => {}
            _ => return Err(Error::Format("missing norms.csv header".into())),
        }
        let mut table = NormTable::default();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::Format(format!("line {}: expected 5 columns", n + 2)));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("line {}: bad number '{s}'", n + 2)))
            };
            table.push(
                num(cols[0])?,
                cols[1].trim(),
                parse_p(cols[2])?,
                parse_alpha(cols[3])?,
                num(cols[4])?,
            );
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = NormTable::default();
        t.push(0.0, "theta", f64::INFINITY, [1, 0, 0], 0.125);
        t.push(2.5, "v3", 2.0, [0, 0, 0], 1e-7);
        let back = NormTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.series("theta", f64::INFINITY, [1, 0, 0]), vec![(0.0, 0.125)]);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(parse_alpha("10").is_err());
        assert!(parse_alpha("1a0").is_err());
    }
}
