//! Calendar epochs to seconds since J2000.0 (2000-01-01T12:00:00).
//!
//! UTC is treated as a uniform time scale; leap seconds are ignored.

use crate::error::MissionError;

const DAY: f64 = 86_400.0;

/// Days from 1970-01-01 to a proleptic Gregorian date.
fn days_from_civil(year: i64, month: u32, day: u32) -> i64 {
    let y = if month <= 2 { year - 1 } else { year };
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let m = i64::from(month);
    let doy = (153 * (if m > 2 { m - 3 } else { m + 9 }) + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

const J2000_UNIX_DAYS: i64 = 10_957;

pub fn civil_to_j2000(year: i64, month: u32, day: u32, hour: u32, minute: u32, second: f64) -> f64 {
    let days = days_from_civil(year, month, day) - J2000_UNIX_DAYS;
    days as f64 * DAY + f64::from(hour) * 3600.0 + f64::from(minute) * 60.0 + second - 43_200.0
}

/// Element-set epoch: two-digit year (57–99 → 19xx) and fractional day of
/// year, day 1.0 being January 1st 00:00.
pub fn tle_epoch_to_j2000(two_digit_year: u32, day_of_year: f64) -> f64 {
    let year = if two_digit_year < 57 { 2000 } else { 1900 } + i64::from(two_digit_year);
    civil_to_j2000(year, 1, 1, 0, 0, 0.0) + (day_of_year - 1.0) * DAY
}

/// `YYYY-MM-DDTHH:MM:SS[.fff][Z]` (a space may replace the `T`).
pub fn parse_utc(text: &str) -> Result<f64, MissionError> {
    let bad = || {
        MissionError::Config(format!(
            "invalid UTC timestamp {text:?}, expected YYYY-MM-DDTHH:MM:SSZ"
        ))
    };
    let s = text.trim().trim_end_matches('Z');
    let (date, time) = s.split_once(['T', ' ']).unwrap_or((s, "00:00:00"));
    let d: Vec<&str> = date.split('-').collect();
    let t: Vec<&str> = time.split(':').collect();
    if d.len() != 3 || t.len() != 3 {
        return Err(bad());
    }
    let year: i64 = d[0].parse().map_err(|_| bad())?;
    let month: u32 = d[1].parse().map_err(|_| bad())?;
    let day: u32 = d[2].parse().map_err(|_| bad())?;
    let hour: u32 = t[0].parse().map_err(|_| bad())?;
    let minute: u32 = t[1].parse().map_err(|_| bad())?;
    let second: f64 = t[2].parse().map_err(|_| bad())?;
    if !(1..=12).contains(&month)
        || !(1..=31).contains(&day)
        || hour > 23
        || minute > 59
        || !(0.0..61.0).contains(&second)
    {
        return Err(bad());
    }
    Ok(civil_to_j2000(year, month, day, hour, minute, second))
}
