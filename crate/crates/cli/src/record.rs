//! Line-delimited output records.

use std::io::Write;

use num_complex::Complex;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A float with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(
        text.parse::<Number>()
            .expect("formatted float is valid JSON"),
    )
}

pub fn complex(z: Complex<f64>) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

#[derive(Debug, Clone, Default)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new(command: &str) -> Self {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(command.into()));
        Self(m)
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.0.insert(key.into(), v.into());
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }
}

/// Object pairs in insertion order.
pub fn object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::Null => out.push((prefix.into(), String::new())),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        other => out.push((prefix.into(), other.to_string())),
    }
}

pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    header: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Self {
            format,
            out,
            header: None,
        }
    }

    /// CSV columns are the flattened keys of the first record, nested keys
    /// joined with dots; later records must share them.
    pub fn emit(&mut self, r: Record) -> std::io::Result<()> {
        let v = r.into_value();
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut self.out, &v)?;
                self.out.write_all(b"\n")
            }
            Format::Csv => {
                let mut cells = Vec::new();
                flatten("", &v, &mut cells);
                let mut w = csv::Writer::from_writer(&mut self.out);
                if self.header.is_none() {
                    let names: Vec<String> = cells.iter().map(|(k, _)| k.clone()).collect();
                    w.write_record(&names)?;
                    self.header = Some(names);
                }
                let header = self.header.as_ref().expect("set above");
                let row: Vec<&str> = header
                    .iter()
                    .map(|h| {
                        cells
                            .iter()
                            .find(|(k, _)| k == h)
                            .map_or("", |(_, v)| v.as_str())
                    })
                    .collect();
                w.write_record(&row)?;
                w.flush()
            }
        }
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(num(f64::NAN), Value::Null);
        let back: f64 = num(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn csv_flattening() {
        let mut e = Emitter::new(Format::Csv, Vec::new());
        let mut r = Record::new("x");
        r.set("params", object([("n", 3.into())]))
            .set("result", complex(Complex::new(1.0, 0.0)));
        e.emit(r.clone()).unwrap();
        e.emit(r).unwrap();
        let text = String::from_utf8(e.out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "command,params.n,result.0,result.1");
        assert_eq!(lines[1], lines[2]);
    }
}
