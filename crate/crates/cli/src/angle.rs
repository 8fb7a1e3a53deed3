use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

/// What the `pi` suffix of an angle literal stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaUnit {
    /// `0.45pi` is `0.45 * pi` radians.
    #[default]
    Pi,
    /// `0.45pi` is `0.45 * pi / 2` radians.
    HalfPi,
}

impl AlphaUnit {
    pub fn radians(self) -> f64 {
        match self {
            AlphaUnit::Pi => PI,
            AlphaUnit::HalfPi => FRAC_PI_2,
        }
    }
}

/// An angle as typed on the command line: either plain radians or a multiple
/// of `pi` such as `0.45pi`, `20/25pi`, `pi` or `-pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleLiteral {
    Radians(f64),
    PiMultiple(f64),
}

impl AngleLiteral {
    pub fn resolve(self, unit: AlphaUnit) -> f64 {
        match self {
            AngleLiteral::Radians(r) => r,
            AngleLiteral::PiMultiple(m) => m * unit.radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleParseError(String);

impl fmt::Display for AngleParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot read `{}` as an angle (use radians like 1.41 or multiples of pi like 0.45pi or 20/25pi)",
            self.0
        )
    }
}

impl std::error::Error for AngleParseError {}

fn coefficient(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = match s {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => match s.split_once('/') {
            Some((num, den)) => {
                let den: f64 = den.trim().parse().ok()?;
                if den == 0.0 {
                    return None;
                }
                num.trim().parse::<f64>().ok()? / den
            }
            None => s.strip_suffix('*').unwrap_or(s).trim().parse().ok()?,
        },
    };
    v.is_finite().then_some(v)
}

impl FromStr for AngleLiteral {
    type Err = AngleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AngleParseError(s.to_string());
        let t = s.trim();
        if let Some(prefix) = t.strip_suffix("pi").or_else(|| t.strip_suffix("π")) {
            return coefficient(prefix).map(AngleLiteral::PiMultiple).ok_or_else(err);
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(AngleLiteral::Radians(v)),
            _ => Err(err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> f64 {
        s.parse::<AngleLiteral>().unwrap().resolve(AlphaUnit::Pi)
    }

    #[test]
    fn literals() {
        assert_eq!(parse("pi"), PI);
        assert_eq!(parse("-pi"), -PI);
        assert_eq!(parse("0.45pi"), 0.45 * PI);
        assert_eq!(parse("20/25pi"), 0.8 * PI);
        assert_eq!(parse(" 0.5*pi "), 0.5 * PI);
        assert_eq!(parse("1.25"), 1.25);
        assert_eq!(parse("0"), 0.0);
        for bad in ["", "x", "1/0pi", "0.4 pie", "nan", "inf"] {
            assert!(bad.parse::<AngleLiteral>().is_err(), "{bad}");
        }
    }

    #[test]
    fn half_pi_unit() {
        let a: AngleLiteral = "20/25pi".parse().unwrap();
        assert!((a.resolve(AlphaUnit::HalfPi) - 0.4 * PI).abs() < 1e-15);
        assert_eq!(AngleLiteral::Radians(1.0).resolve(AlphaUnit::HalfPi), 1.0);
    }
}
