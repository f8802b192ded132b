//! CSV and JSON renderings of toolkit results.
//!
//! CSV floats carry 17 significant digits so every value round-trips to the
//! same `f64`. An estimate computed from a single sample has no standard
//! error; its `std_error` cell holds the sentinel `NA`.

use std::fmt::Write as _;

use microcanon::{EstimateResult, Histogram, TimeSeries};
use serde_json::{json, Value};

/// Sentinel for a standard error that is not available.
pub const NOT_AVAILABLE: &str = "NA";

/// A generated file, not yet written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn new(name: &str, bytes: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.to_string(),
            bytes: bytes.into(),
        }
    }

    pub fn json(name: &str, value: &Value) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
        text.push('\n');
        Self::new(name, text)
    }
}

/// `%.17g`: shortest of fixed or exponent notation, trailing zeros dropped.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn estimates_csv(results: &[EstimateResult]) -> String {
    let mut out = String::from("observable,mean,std_error,n_samples\n");
    for r in results {
        let se = r.std_error.map_or_else(|| NOT_AVAILABLE.to_string(), fmt_g17);
        writeln!(
            out,
            "{},{},{},{}",
            r.observable.name(),
            fmt_g17(r.mean),
            se,
            r.n_samples
        )
        .unwrap();
    }
    out
}

pub fn estimates_json(seed: u64, results: &[EstimateResult]) -> Value {
    json!({ "seed": seed, "estimates": results })
}

pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,count,density\n");
    for (k, (&c, &d)) in h.counts.iter().zip(&h.normalized_density).enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_g17(h.bin_edges[k]),
            fmt_g17(h.bin_edges[k + 1]),
            c,
            fmt_g17(d)
        )
        .unwrap();
    }
    out
}

pub fn histogram_json(seed: u64, h: &Histogram) -> Value {
    json!({ "seed": seed, "histogram": h })
}

/// Column `weight_A_B` holds the mass of gas shell `A` times container shell `B`.
pub fn trajectory_csv(ts: &TimeSeries) -> String {
    let mut out = String::from("t,purity,entropy");
    for ((a, b), _) in &ts.block_weights {
        write!(out, ",weight_{a}_{b}").unwrap();
    }
    out.push_str(",total_purity\n");
    for k in 0..ts.len() {
        write!(
            out,
            "{},{},{}",
            fmt_g17(ts.times[k]),
            fmt_g17(ts.purity[k]),
            fmt_g17(ts.entropy[k])
        )
        .unwrap();
        for (_, w) in &ts.block_weights {
            write!(out, ",{}", fmt_g17(w[k])).unwrap();
        }
        writeln!(out, ",{}", fmt_g17(ts.total_purity[k])).unwrap();
    }
    out
}

pub fn trajectory_json(seed: u64, ts: &TimeSeries) -> Value {
    let weights: Vec<Value> = ts
        .block_weights
        .iter()
        .map(|((a, b), w)| json!({ "gas_shell": a, "container_shell": b, "weight": w }))
        .collect();
    json!({
        "seed": seed,
        "t": ts.times,
        "purity": ts.purity,
        "entropy": ts.entropy,
        "total_purity": ts.total_purity,
        "velocity": ts.velocity,
        "block_weights": weights,
    })
}

/// One row of the analytic table.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Number(f64),
    Flag(bool),
}

impl Quantity {
    fn csv(&self) -> String {
        match self {
            Quantity::Number(x) => fmt_g17(*x),
            Quantity::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Quantity::Number(x) => json!(x),
            Quantity::Flag(b) => json!(b),
        }
    }
}

pub fn table_csv(rows: &[(String, Quantity)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (name, q) in rows {
        writeln!(out, "{name},{}", q.csv()).unwrap();
    }
    out
}

pub fn table_json(seed: u64, rows: &[(String, Quantity)]) -> Value {
    let map: serde_json::Map<String, Value> = rows.iter().map(|(k, q)| (k.clone(), q.json())).collect();
    json!({ "seed": seed, "quantities": map })
}
