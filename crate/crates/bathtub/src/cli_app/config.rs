//! Flat `key = value` model configuration and small argument parsers.

use std::collections::BTreeMap;

use crate::core_model::ModelParams;
use crate::error::{BathtubError, Result};

/// Keys accepted in a configuration file.
pub const CONFIG_KEYS: [&str; 5] = ["m", "omega_minus", "omega_plus", "ell", "hbar"];

/// Partially specified model parameters; unset fields fall back to
/// [`ModelParams::default`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverrides {
    pub m: Option<f64>,
    pub omega_minus: Option<f64>,
    pub omega_plus: Option<f64>,
    pub ell: Option<f64>,
    pub hbar: Option<f64>,
}

impl ParamOverrides {
    /// Fields set in `other` replace those in `self`.
    pub fn merged_with(self, other: ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            m: other.m.or(self.m),
            omega_minus: other.omega_minus.or(self.omega_minus),
            omega_plus: other.omega_plus.or(self.omega_plus),
            ell: other.ell.or(self.ell),
            hbar: other.hbar.or(self.hbar),
        }
    }

    /// Validated parameters.
    pub fn resolve(&self) -> Result<ModelParams> {
        let d = ModelParams::default();
        ModelParams::new(
            self.m.unwrap_or(d.m()),
            self.omega_minus.unwrap_or(d.omega_minus()),
            self.omega_plus.unwrap_or(d.omega_plus()),
            self.ell.unwrap_or(d.ell()),
            self.hbar.unwrap_or(d.hbar()),
        )
        .map_err(|e| BathtubError::Config(e.to_string()))
    }
}

/// Parses a configuration text. Blank lines and lines starting with `#`
/// are ignored; unknown or repeated keys and unparsable values are errors.
pub fn parse_config(text: &str) -> Result<ParamOverrides> {
    let mut seen = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            BathtubError::Config(format!(
                "line {}: expected key=value, got {line:?}",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !CONFIG_KEYS.contains(&key) {
            return Err(BathtubError::Config(format!(
                "line {}: unknown key {key:?} (allowed: {})",
                lineno + 1,
                CONFIG_KEYS.join(", ")
            )));
        }
        let v: f64 = value.parse().map_err(|_| {
            BathtubError::Config(format!(
                "line {}: {key} has non-numeric value {value:?}",
                lineno + 1
            ))
        })?;
        if seen.insert(key, v).is_some() {
            return Err(BathtubError::Config(format!(
                "line {}: key {key:?} given twice",
                lineno + 1
            )));
        }
    }
    Ok(ParamOverrides {
        m: seen.get("m").copied(),
        omega_minus: seen.get("omega_minus").copied(),
        omega_plus: seen.get("omega_plus").copied(),
        ell: seen.get("ell").copied(),
        hbar: seen.get("hbar").copied(),
    })
}

/// Serializes parameters in the configuration format (round-trips through
/// [`parse_config`]).
pub fn format_config(p: &ModelParams) -> String {
    format!(
        "m = {:e}\nomega_minus = {:e}\nomega_plus = {:e}\nell = {:e}\nhbar = {:e}\n",
        p.m(),
        p.omega_minus(),
        p.omega_plus(),
        p.ell(),
        p.hbar()
    )
}

/// Parses a half-open index range `a..b` with `a ≤ b`.
pub fn parse_range(s: &str) -> std::result::Result<std::ops::Range<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a half-open range a..b, got {s:?}"))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start in {s:?}"))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("range start exceeds end in {s:?}"));
    }
    Ok(a..b)
}

/// Parses an orbit selector `k,alpha,beta`.
pub fn parse_triple(s: &str) -> std::result::Result<(i64, i64, i64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected k,alpha,beta, got {s:?}"));
    }
    let p = |x: &str| {
        x.parse::<i64>()
            .map_err(|_| format!("bad integer {x:?} in {s:?}"))
    };
    Ok((p(parts[0])?, p(parts[1])?, p(parts[2])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let c = parse_config("# model\nm = 2\nomega_minus=1.5\n\nell = 0\n").unwrap();
        assert_eq!(c.m, Some(2.0));
        assert_eq!(c.omega_plus, None);
        let p = c.resolve().unwrap();
        assert_eq!(p.omega_plus(), 2.0);
        assert_eq!(
            parse_config(&format_config(&p)).unwrap().resolve().unwrap(),
            p
        );
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["mass = 1", "m 1", "m = one", "m = 1\nm = 2"] {
            assert!(
                matches!(parse_config(bad), Err(BathtubError::Config(_))),
                "{bad}"
            );
        }
        assert!(matches!(
            parse_config("m = -1").unwrap().resolve(),
            Err(BathtubError::Config(_))
        ));
    }

    #[test]
    fn overrides_take_precedence() {
        let file = parse_config("m = 2\nhbar = 0.5").unwrap();
        let flags = ParamOverrides {
            hbar: Some(0.1),
            ..Default::default()
        };
        let merged = file.merged_with(flags);
        assert_eq!((merged.m, merged.hbar), (Some(2.0), Some(0.1)));
    }

    #[test]
    fn small_parsers() {
        assert_eq!(parse_range("0..20").unwrap(), 0..20);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("0-20").is_err());
        assert_eq!(parse_triple("1,0,-1").unwrap(), (1, 0, -1));
        assert!(parse_triple("1,0").is_err());
    }
}
