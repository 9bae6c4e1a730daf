//! Deterministic JSON and CSV rendering.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

/// Writes floats with 17 significant digits and non-finite values as null.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fixed17;

pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    if exp >= 0 {
        let cut = exp as usize + 1;
        let (int, frac) = digits.split_at(cut.min(digits.len()));
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    }
}

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON with fixed float formatting.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17);
    value.serialize(&mut ser).map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::Format(e.to_string()))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::Number(n) if n.is_f64() => out.push((prefix.into(), n.as_f64().map(format_f64).unwrap_or_default())),
        Value::Number(n) => out.push((prefix.into(), n.to_string())),
        Value::String(s) => out.push((prefix.into(), csv_field(s))),
        Value::Bool(b) => out.push((prefix.into(), b.to_string())),
        Value::Null => out.push((prefix.into(), String::new())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header and value rows of the dotted-key flattening of each record.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut header: Option<Vec<String>> = None;
    let mut out = String::new();
    for r in rows {
        let v = serde_json::to_value(r).map_err(|e| Error::Format(e.to_string()))?;
        let mut cells = Vec::new();
        flatten("", &v, &mut cells);
        let keys: Vec<String> = cells.iter().map(|c| c.0.clone()).collect();
        match &header {
            None => {
                out.push_str(&keys.join(","));
                out.push('\n');
                header = Some(keys);
            }
            Some(h) if *h != keys => return Err(Error::Format("CSV rows have different fields".into())),
            _ => {}
        }
        out.push_str(&cells.iter().map(|c| c.1.as_str()).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(8.0), "8.0000000000000000");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(-1234.5), "-1234.5000000000000");
        assert_eq!(format_f64(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_f64(f64::NAN), "null");
        for x in [std::f64::consts::PI, 1e-5 / 3.0, 123456789.123, 2f64.powi(60)] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_and_csv() {
        #[derive(Serialize)]
        struct R {
            a: f64,
            b: Vec<f64>,
            c: &'static str,
            d: u64,
        }
        let r = R { a: 0.5, b: vec![1.0, f64::INFINITY], c: "x,y", d: 7 };
        assert_eq!(to_json(&r).unwrap(), r#"{"a":0.50000000000000000,"b":[1.0000000000000000,null],"c":"x,y","d":7}"#);
        assert_eq!(to_csv(&[r]).unwrap(), "a,b.0,b.1,c,d\n0.50000000000000000,1.0000000000000000,,\"x,y\",7\n");
    }
}
