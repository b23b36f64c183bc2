use std::fmt;
use std::io::{self, Write};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Confirmed,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Confirmed => "confirmed",
            Self::Violated => "violated",
        })
    }
}

/// One pass/fail condition on a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check<T> {
    /// The last `len` values are strictly decreasing.
    TailDecreasing(usize),
    /// The last `len` values are strictly increasing.
    TailIncreasing(usize),
    FinalBelow(T),
    FirstBelow(T),
    FirstAbove(T),
    AllBelow(T),
    /// Last value strictly below the first.
    FinalBelowFirst,
}

impl<T: Real> fmt::Display for Check<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TailDecreasing(n) => write!(f, "strictly decreasing over last {n} points"),
            Self::TailIncreasing(n) => write!(f, "strictly increasing over last {n} points"),
            Self::FinalBelow(t) => write!(f, "final value < {t}"),
            Self::FirstBelow(t) => write!(f, "first value < {t}"),
            Self::FirstAbove(t) => write!(f, "first value > {t}"),
            Self::AllBelow(t) => write!(f, "every value < {t}"),
            Self::FinalBelowFirst => write!(f, "final value < first value"),
        }
    }
}

impl<T: Real> Check<T> {
    /// Index of the first grid point that breaks the check.
    fn first_violation(&self, values: &[T]) -> Option<usize> {
        let len = values.len();
        let last = len.checked_sub(1)?;
        match *self {
            Self::TailDecreasing(n) | Self::TailIncreasing(n) => {
                if len < n.max(2) {
                    return Some(last);
                }
                let decreasing = matches!(self, Self::TailDecreasing(_));
                (len - n + 1..len).find(|&i| {
                    let ok = if decreasing {
                        values[i] < values[i - 1]
                    } else {
                        values[i] > values[i - 1]
                    };
                    !ok
                })
            }
            Self::FinalBelow(t) => (!(values[last] < t)).then_some(last),
            Self::FirstBelow(t) => (!(values[0] < t)).then_some(0),
            Self::FirstAbove(t) => (!(values[0] > t)).then_some(0),
            Self::AllBelow(t) => values.iter().position(|v| !(*v < t)),
            Self::FinalBelowFirst => (!(values[last] < values[0])).then_some(last),
        }
    }
}

/// Sampled curve with the outcome of its checks. `witness` is the first
/// violating grid point, present exactly when the verdict is `Violated`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport<T> {
    pub label: String,
    pub sweep_variable: String,
    pub grid: Vec<T>,
    pub values: Vec<T>,
    pub verdict: Verdict,
    pub witness: Option<T>,
    pub criterion: String,
}

impl<T: Real> TrendReport<T> {
    pub fn assess(
        label: impl Into<String>,
        sweep_variable: impl Into<String>,
        grid: Vec<T>,
        values: Vec<T>,
        checks: &[Check<T>],
    ) -> Self {
        assert_eq!(grid.len(), values.len(), "grid and values differ in length");
        let witness = checks
            .iter()
            .find_map(|c| c.first_violation(&values))
            .map(|i| grid[i]);
        let criterion = checks
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        Self {
            label: label.into(),
            sweep_variable: sweep_variable.into(),
            grid,
            values,
            verdict: if witness.is_some() {
                Verdict::Violated
            } else {
                Verdict::Confirmed
            },
            witness,
            criterion,
        }
    }

    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }

    pub fn first(&self) -> T {
        self.values[0]
    }

    pub fn last(&self) -> T {
        *self.values.last().unwrap()
    }

    /// Value at the grid point nearest to `x`.
    pub fn value_near(&self, x: T) -> T {
        let i = (0..self.grid.len())
            .min_by(|&a, &b| {
                (self.grid[a] - x)
                    .abs()
                    .partial_cmp(&(self.grid[b] - x).abs())
                    .unwrap()
            })
            .unwrap();
        self.values[i]
    }
}

/// A group of reports for one result plus free-form notes.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck<T> {
    pub name: String,
    pub reports: Vec<TrendReport<T>>,
    pub notes: Vec<String>,
    /// First grid point where the headline ratio drops below 1, if tracked.
    pub crossing: Option<T>,
}

impl<T: Real> TheoremCheck<T> {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            reports: Vec::new(),
            notes: Vec::new(),
            crossing: None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.reports.iter().all(TrendReport::confirmed) {
            Verdict::Confirmed
        } else {
            Verdict::Violated
        }
    }

    pub fn report(&self, label: &str) -> Option<&TrendReport<T>> {
        self.reports.iter().find(|r| r.label == label)
    }

    /// Human-readable summary, one line per report.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}: {}", self.name, self.verdict())?;
        for r in &self.reports {
            write!(
                w,
                "  {:<28} {:<9} first={:.6e} last={:.6e}  [{}]",
                r.label,
                r.verdict,
                r.first(),
                r.last(),
                r.criterion
            )?;
            match r.witness {
                Some(x) => writeln!(w, " witness {}={:.6e}", r.sweep_variable, x)?,
                None => writeln!(w)?,
            }
        }
        if let Some(c) = self.crossing {
            writeln!(w, "  crossing below 1 at {c:.6e}")?;
        }
        for n in &self.notes {
            writeln!(w, "  note: {n}")?;
        }
        Ok(())
    }

    /// Long-format CSV: `check,report,sweep_variable,x,value`, preceded by
    /// `#` lines carrying verdicts, criteria and notes.
    pub fn write_csv<W: Write>(&self, mut w: W, header: bool) -> io::Result<()> {
        writeln!(w, "# check={} verdict={}", self.name, self.verdict())?;
        for r in &self.reports {
            let witness = r
                .witness
                .map_or_else(|| "none".to_string(), |x| format!("{x:.16e}"));
            writeln!(
                w,
                "# report={} verdict={} witness={} criterion={}",
                r.label, r.verdict, witness, r.criterion
            )?;
        }
        if let Some(c) = self.crossing {
            writeln!(w, "# crossing={c:.16e}")?;
        }
        for n in &self.notes {
            writeln!(w, "# note={n}")?;
        }
        if header {
            writeln!(w, "check,report,sweep_variable,x,value")?;
        }
        for r in &self.reports {
            for (x, v) in r.grid.iter().zip(&r.values) {
                writeln!(
                    w,
                    "{},{},{},{:.16e},{:.16e}",
                    self.name, r.label, r.sweep_variable, x, v
                )?;
            }
        }
        Ok(())
    }
}
