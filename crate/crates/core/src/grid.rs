//! Sweep grids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scale {
    #[default]
    Linear,
    /// Evenly spaced in `log10`.
    Log,
    /// Constant ratio between neighbours; same points as `Log`.
    Geometric,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            "geometric" | "geom" => Ok(Self::Geometric),
            other => Err(Error::Config(format!(
                "unknown scale '{other}' (expected linear, log or geometric)"
            ))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Log => "log",
            Self::Geometric => "geometric",
        })
    }
}

/// `points` values from `min` to `max` inclusive. `min > max` gives a
/// descending grid. A single point returns `[min]`.
pub fn grid<T: Real>(min: T, max: T, points: usize, scale: Scale) -> Result<Vec<T>> {
    if points == 0 {
        return Err(Error::Config("grid needs at least one point".into()));
    }
    if !min.is_finite() || !max.is_finite() {
        return Err(Error::Config("grid bounds must be finite".into()));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let last = T::from_usize(points - 1).unwrap();
    let at = |i: usize| T::from_usize(i).unwrap() / last;
    match scale {
        Scale::Linear => Ok((0..points)
            .map(|i| {
                if i + 1 == points {
                    max
                } else {
                    min + (max - min) * at(i)
                }
            })
            .collect()),
        Scale::Log | Scale::Geometric => {
            if !(min > T::zero() && max > T::zero()) {
                return Err(Error::Config(format!(
                    "{scale} grid needs positive bounds, got {min}..{max}"
                )));
            }
            let (lo, hi) = (min.log10(), max.log10());
            Ok((0..points)
                .map(|i| match i {
                    0 => min,
                    _ if i + 1 == points => max,
                    _ => T::lit(10.0).powf(lo + (hi - lo) * at(i)),
                })
                .collect())
        }
    }
}

/// Integer grid: the real grid rounded to the nearest integer with
/// duplicates removed, order preserved.
pub fn integer_grid(min: u32, max: u32, points: usize, scale: Scale) -> Result<Vec<u32>> {
    let real = grid(f64::from(min), f64::from(max), points, scale)?;
    let mut out: Vec<u32> = Vec::with_capacity(real.len());
    for v in real {
        let r = v.round() as u32;
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    Ok(out)
}
