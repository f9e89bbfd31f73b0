//! Flag grammars for `--ae`, `--weights` and `--f`.

use std::path::PathBuf;

use expsum::amp_est::AeMethod;

pub const DEFAULT_SHOTS_PER_BIT: u64 = 1000;

/// `exact | qft:m | cpp:shots | kitaev:m[:shots_per_bit]`
pub fn parse_ae(s: &str) -> Result<AeMethod, String> {
    let mut parts = s.split(':');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let int = |x: &str, what: &str| {
        x.parse::<u64>()
            .map_err(|_| format!("bad {what} `{x}` in `{s}`"))
    };
    let m = match (head, rest.as_slice()) {
        ("exact", []) => AeMethod::Exact,
        ("qft", [m]) => AeMethod::Qft {
            bits: int(m, "bit count")? as u32,
        },
        ("cpp", [n]) => AeMethod::ClassicalPp {
            shots: int(n, "shot count")?,
        },
        ("kitaev", [m]) => AeMethod::Kitaev {
            bits: int(m, "bit count")? as u32,
            shots_per_bit: DEFAULT_SHOTS_PER_BIT,
        },
        ("kitaev", [m, spb]) => AeMethod::Kitaev {
            bits: int(m, "bit count")? as u32,
            shots_per_bit: int(spb, "shots per bit")?,
        },
        _ => {
            return Err(format!(
                "expected exact, qft:m, cpp:shots or kitaev:m[:spb], got `{s}`"
            ))
        }
    };
    expsum::amp_est::AEConfig::new(m, 0)
        .validate()
        .map_err(|e| e.to_string())?;
    Ok(m)
}

pub fn ae_name(m: AeMethod) -> String {
    match m {
        AeMethod::Exact => "exact".into(),
        AeMethod::Qft { bits } => format!("qft:{bits}"),
        AeMethod::ClassicalPp { shots } => format!("cpp:{shots}"),
        AeMethod::Kitaev {
            bits,
            shots_per_bit,
        } => format!("kitaev:{bits}:{shots_per_bit}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Uniform,
    Power(f64),
    File(PathBuf),
}

pub fn parse_weights(s: &str) -> Result<WeightSpec, String> {
    if s == "uniform" {
        return Ok(WeightSpec::Uniform);
    }
    if let Some(sigma) = s.strip_prefix("power:") {
        let v: f64 = sigma
            .parse()
            .map_err(|_| format!("bad exponent `{sigma}`"))?;
        if !v.is_finite() {
            return Err(format!("bad exponent `{sigma}`"));
        }
        return Ok(WeightSpec::Power(v));
    }
    Ok(WeightSpec::File(PathBuf::from(s)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSpec {
    Poly(Vec<f64>),
    File(PathBuf),
}

pub fn parse_phase(s: &str) -> Result<PhaseSpec, String> {
    if let Some(cs) = s.strip_prefix("poly:") {
        let coeffs = cs
            .split(',')
            .map(|c| c.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| format!("bad coefficient list `{cs}`"))?;
        return Ok(PhaseSpec::Poly(coeffs));
    }
    Ok(PhaseSpec::File(PathBuf::from(s)))
}

/// Reads whitespace-separated `k value` lines into a table of length `dim`.
/// Blank lines and lines starting with `#` are skipped; absent indices are zero.
pub fn read_table(path: &PathBuf, dim: usize) -> Result<Vec<f64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut table = vec![0.0; dim];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || format!("{}:{}: expected `k value`", path.display(), i + 1);
        let mut it = line.split_whitespace();
        let (Some(k), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad());
        };
        let k: usize = k.parse().map_err(|_| bad())?;
        let v: f64 = v.parse().map_err(|_| bad())?;
        if k >= dim {
            return Err(format!(
                "{}:{}: index {k} outside 0..{dim}",
                path.display(),
                i + 1
            ));
        }
        table[k] = v;
    }
    Ok(table)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|_| format!("bad list entry `{x}`"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ae_grammar() {
        assert_eq!(parse_ae("exact"), Ok(AeMethod::Exact));
        assert_eq!(parse_ae("qft:12"), Ok(AeMethod::Qft { bits: 12 }));
        assert_eq!(
            parse_ae("kitaev:6"),
            Ok(AeMethod::Kitaev {
                bits: 6,
                shots_per_bit: 1000
            })
        );
        assert!(parse_ae("qft").is_err());
        assert!(parse_ae("qft:0").is_err());
        assert!(parse_ae("kitaev:6:10").is_err());
        for s in ["exact", "qft:7", "cpp:300", "kitaev:5:200"] {
            assert_eq!(ae_name(parse_ae(s).unwrap()), s);
        }
    }

    #[test]
    fn phase_and_weights() {
        assert_eq!(
            parse_phase("poly:0,0,0.25"),
            Ok(PhaseSpec::Poly(vec![0.0, 0.0, 0.25]))
        );
        assert!(parse_phase("poly:1,x").is_err());
        assert_eq!(parse_weights("power:0.5"), Ok(WeightSpec::Power(0.5)));
        assert!(parse_weights("power:nan").is_err());
    }
}
