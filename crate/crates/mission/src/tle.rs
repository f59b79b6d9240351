//! Two-line element sets (optionally preceded by a name line).

use adr_core::astro::{mean_to_true, ClassicalElements, Environment};
use serde::{Deserialize, Serialize};

use crate::epoch::tle_epoch_to_j2000;
use crate::error::{MissionError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebrisRecord {
    pub name: String,
    pub catalog_id: u32,
    /// s since J2000
    pub epoch: f64,
    /// rev/day
    pub mean_motion: f64,
    /// deg
    pub inclination: f64,
    /// deg
    pub raan: f64,
    pub eccentricity: f64,
    /// deg
    pub arg_perigee: f64,
    /// deg
    pub mean_anomaly: f64,
    /// 1/earth radii
    pub bstar: f64,
    /// Semi-major axis from the mean motion by Kepler's third law.
    pub elements: ClassicalElements,
}

/// Modulo-10 checksum over the first 68 columns: digits count their value,
/// minus signs count one.
pub fn checksum(line: &str) -> u32 {
    line.bytes()
        .take(68)
        .map(|b| match b {
            b'0'..=b'9' => u32::from(b - b'0'),
            b'-' => 1,
            _ => 0,
        })
        .sum::<u32>()
        % 10
}

struct Line<'a> {
    text: &'a str,
    number: usize,
}

impl Line<'_> {
    fn err(&self, message: impl Into<String>) -> MissionError {
        MissionError::Tle {
            line: self.number,
            message: message.into(),
        }
    }

    /// 1-based inclusive columns.
    fn field(&self, first: usize, last: usize) -> Result<&str> {
        self.text
            .get(first - 1..last)
            .ok_or_else(|| self.err(format!("columns {first}-{last} missing")))
    }

    fn number<T: std::str::FromStr>(&self, first: usize, last: usize, what: &str) -> Result<T> {
        let raw = self.field(first, last)?;
        raw.trim().parse().map_err(|_| {
            self.err(format!(
                "malformed {what} {raw:?} in columns {first}-{last}"
            ))
        })
    }

    /// Leading-decimal-point-implied field such as `0001257` → 0.0001257.
    fn implied_decimal(&self, first: usize, last: usize, what: &str) -> Result<f64> {
        let raw = self.field(first, last)?;
        let digits = raw.trim();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(format!(
                "malformed {what} {raw:?} in columns {first}-{last}"
            )));
        }
        Ok(format!("0.{digits}").parse::<f64>().unwrap_or(0.0))
    }

    /// Implied-decimal mantissa with a signed power-of-ten exponent, e.g.
    /// ` 24512-4` → 0.24512e-4.
    fn exponential(&self, first: usize, last: usize, what: &str) -> Result<f64> {
        let raw = self.field(first, last)?;
        let bad = || {
            self.err(format!(
                "malformed {what} {raw:?} in columns {first}-{last}"
            ))
        };
        let s = raw.trim();
        if s.is_empty() {
            return Ok(0.0);
        }
        let (sign, body) = match s.as_bytes()[0] {
            b'-' => (-1.0, &s[1..]),
            b'+' => (1.0, &s[1..]),
            _ => (1.0, s),
        };
        let split = body.rfind(['-', '+']).ok_or_else(bad)?;
        let (mantissa, exponent) = body.split_at(split);
        if mantissa.is_empty() || !mantissa.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let m: f64 = format!("0.{mantissa}").parse().map_err(|_| bad())?;
        let e: i32 = exponent.parse().map_err(|_| bad())?;
        Ok(sign * m * 10f64.powi(e))
    }

    fn check(&self, index: char) -> Result<()> {
        if self.text.len() < 69 {
            return Err(self.err(format!("expected 69 columns, found {}", self.text.len())));
        }
        if !self.text.is_ascii() {
            return Err(self.err("non-ASCII characters"));
        }
        if !self.text.starts_with(index) {
            return Err(self.err(format!("expected line number {index}")));
        }
        let stated = self.text.as_bytes()[68];
        if !stated.is_ascii_digit() {
            return Err(self.err("checksum column is not a digit"));
        }
        let computed = checksum(self.text);
        if u32::from(stated - b'0') != computed {
            return Err(self.err(format!(
                "checksum mismatch: stated {}, computed {computed}",
                stated - b'0'
            )));
        }
        Ok(())
    }
}

fn in_range(line: &Line, value: f64, lo: f64, hi: f64, what: &str) -> Result<f64> {
    if (lo..hi).contains(&value) {
        Ok(value)
    } else {
        Err(line.err(format!("{what} {value} outside [{lo}, {hi})")))
    }
}

fn parse_record(name: &str, l1: &Line, l2: &Line, env: &Environment) -> Result<DebrisRecord> {
    l1.check('1')?;
    l2.check('2')?;
    let catalog_id: u32 = l1.number(3, 7, "catalog number")?;
    let id2: u32 = l2.number(3, 7, "catalog number")?;
    if id2 != catalog_id {
        return Err(l2.err(format!(
            "catalog number {id2} does not match line 1 ({catalog_id})"
        )));
    }
    let year: u32 = l1.number(19, 20, "epoch year")?;
    let day: f64 = l1.number(21, 32, "epoch day")?;
    in_range(l1, day, 1.0, 367.0, "epoch day")?;
    let bstar = l1.exponential(54, 61, "B*")?;

    let inclination = in_range(
        l2,
        l2.number(9, 16, "inclination")?,
        0.0,
        180.0 + 1e-9,
        "inclination",
    )?;
    let raan = in_range(l2, l2.number(18, 25, "RAAN")?, 0.0, 360.0, "RAAN")?;
    let eccentricity = l2.implied_decimal(27, 33, "eccentricity")?;
    let arg_perigee = in_range(
        l2,
        l2.number(35, 42, "argument of perigee")?,
        0.0,
        360.0,
        "argument of perigee",
    )?;
    let mean_anomaly = in_range(
        l2,
        l2.number(44, 51, "mean anomaly")?,
        0.0,
        360.0,
        "mean anomaly",
    )?;
    let mean_motion: f64 = l2.number(53, 63, "mean motion")?;
    if !(mean_motion > 0.0) {
        return Err(l2.err(format!("mean motion {mean_motion} must be positive")));
    }

    let epoch = tle_epoch_to_j2000(year, day);
    let n = mean_motion * 2.0 * std::f64::consts::PI / 86_400.0;
    let a = (env.mu / (n * n)).cbrt();
    let elements = ClassicalElements {
        a,
        e: eccentricity,
        i: inclination.to_radians(),
        raan: raan.to_radians(),
        argp: arg_perigee.to_radians(),
        nu: mean_to_true(mean_anomaly.to_radians(), eccentricity),
        epoch,
    };
    let name = if name.is_empty() {
        catalog_id.to_string()
    } else {
        name.to_string()
    };
    Ok(DebrisRecord {
        name,
        catalog_id,
        epoch,
        mean_motion,
        inclination,
        raan,
        eccentricity,
        arg_perigee,
        mean_anomaly,
        bstar,
        elements,
    })
}

/// Parses every record in `text`. Blank lines are skipped; a line not
/// starting with `1 ` or `2 ` is taken as the name of the next record
/// (a leading `0 ` is stripped).
pub fn parse_tle(text: &str, env: &Environment) -> Result<Vec<DebrisRecord>> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(k, t)| Line {
            text: t.trim_end(),
            number: k + 1,
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let mut records = Vec::new();
    let mut k = 0;
    while k < lines.len() {
        let mut name = "";
        let line = &lines[k];
        if !(line.text.starts_with("1 ") || line.text.starts_with("2 ")) {
            name = line.text.strip_prefix("0 ").unwrap_or(line.text).trim();
            k += 1;
        }
        let l1 = lines
            .get(k)
            .ok_or_else(|| line.err("record ends before line 1"))?;
        let l2 = lines
            .get(k + 1)
            .ok_or_else(|| l1.err("record ends before line 2"))?;
        records.push(parse_record(name, l1, l2, env)?);
        k += 2;
    }
    Ok(records)
}
