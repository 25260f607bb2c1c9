//! Finite piecewise-linear signals.
//!
//! A signal is given by breakpoints `0 = t_0 < t_1 < … < t_m` and one value
//! vector per breakpoint; between breakpoints every component is the linear
//! interpolant. Whether the breakpoints capture every change of the
//! underlying process is the caller's responsibility; [`Signal::refine`] only
//! inserts interpolated points.

use std::io::Read;
use std::path::Path;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, SchemaError, SignalSchema};
use crate::time::{format_time, parse_time, time_to_f64, Time};

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("time must be strictly increasing: row {row} has time {time} after {prev}")]
    NonMonotoneTime { row: usize, time: String, prev: String },
    #[error("row {row} has {found} values, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("row {row}, column {column}: `{text}` is not a finite number")]
    NonNumeric { row: usize, column: usize, text: String },
    #[error("a signal needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("time {t} lies outside the signal domain [0, {length}]")]
    Domain { t: f64, length: f64 },
    #[error("missing `time` header")]
    MissingTimeColumn,
    #[error("invalid variable names: {0}")]
    Schema(#[from] SchemaError),
    #[error("variable index {0} is out of range")]
    UnknownVariable(usize),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Outcome of comparing a signal's length to a formula's requirement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthCheck {
    Ok,
    Short { needed: Time, have: Time },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    schema: SignalSchema,
    times: Vec<Time>,
    times_f: Vec<f64>,
    /// One row per breakpoint.
    values: Vec<Vec<f64>>,
    /// Amount subtracted from the source time stamps.
    offset: Time,
}

/// Machine-readable signal format.
#[derive(Serialize, Deserialize)]
struct SignalJson {
    variables: Vec<String>,
    times: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl Signal {
    /// Builds a signal from breakpoints and value rows. Times are shifted so
    /// the first one is 0.
    pub fn new(schema: SignalSchema, times: Vec<Time>, values: Vec<Vec<f64>>) -> Result<Self, SignalError> {
        if times.len() < 2 {
            return Err(SignalError::TooFewSamples(times.len()));
        }
        if values.len() != times.len() {
            return Err(SignalError::Ragged {
                row: values.len().min(times.len()),
                expected: times.len(),
                found: values.len(),
            });
        }
        for k in 1..times.len() {
            if times[k] <= times[k - 1] {
                return Err(SignalError::NonMonotoneTime {
                    row: k,
                    time: format_time(&times[k]),
                    prev: format_time(&times[k - 1]),
                });
            }
        }
        for (row, v) in values.iter().enumerate() {
            if v.len() != schema.len() {
                return Err(SignalError::Ragged {
                    row,
                    expected: schema.len(),
                    found: v.len(),
                });
            }
            if let Some(column) = v.iter().position(|x| !x.is_finite()) {
                return Err(SignalError::NonNumeric {
                    row,
                    column,
                    text: v[column].to_string(),
                });
            }
        }
        let offset = times[0];
        let times: Vec<Time> = times.into_iter().map(|t| t - offset).collect();
        let times_f = times.iter().map(time_to_f64).collect();
        Ok(Signal {
            schema,
            times,
            times_f,
            values,
            offset,
        })
    }

    /// Reads CSV with header `time,var1,…,varn`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, SignalError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.get(0).map(str::to_ascii_lowercase).as_deref() != Some("time") {
            return Err(SignalError::MissingTimeColumn);
        }
        let schema = SignalSchema::new(headers.iter().skip(1))?;
        let width = headers.len();
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    if let csv::ErrorKind::UnequalLengths { len, .. } = e.kind() {
                        return Err(SignalError::Ragged {
                            row,
                            expected: width,
                            found: *len as usize,
                        });
                    }
                    return Err(e.into());
                }
            };
            if rec.len() != width {
                return Err(SignalError::Ragged {
                    row,
                    expected: width,
                    found: rec.len(),
                });
            }
            let t = parse_time(&rec[0]).ok_or_else(|| SignalError::NonNumeric {
                row,
                column: 0,
                text: rec[0].to_string(),
            })?;
            if let Some(prev) = times.last() {
                if t <= *prev {
                    return Err(SignalError::NonMonotoneTime {
                        row,
                        time: format_time(&t),
                        prev: format_time(prev),
                    });
                }
            }
            let mut v = Vec::with_capacity(width - 1);
            for column in 1..width {
                let x: f64 = rec[column]
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite())
                    .ok_or_else(|| SignalError::NonNumeric {
                        row,
                        column,
                        text: rec[column].to_string(),
                    })?;
                v.push(x);
            }
            times.push(t);
            values.push(v);
        }
        Signal::new(schema, times, values)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self, SignalError> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    /// Writes the signal as CSV; times are the shifted ones.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), SignalError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["time".to_string()];
        header.extend(self.schema.names().iter().cloned());
        w.write_record(&header)?;
        for (k, row) in self.values.iter().enumerate() {
            let mut rec = vec![format_time_for_csv(&self.times[k])];
            rec.extend(row.iter().map(|x| x.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SignalError> {
        let raw: SignalJson = serde_json::from_str(text)?;
        let schema = SignalSchema::new(raw.variables)?;
        let times = raw
            .times
            .iter()
            .enumerate()
            .map(|(row, s)| {
                parse_time(s).ok_or_else(|| SignalError::NonNumeric {
                    row,
                    column: 0,
                    text: s.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Signal::new(schema, times, raw.values)
    }

    pub fn to_json(&self) -> String {
        let raw = SignalJson {
            variables: self.schema.names().to_vec(),
            times: self.times.iter().map(format_time).collect(),
            values: self.values.clone(),
        };
        serde_json::to_string(&raw).expect("signal serializes")
    }

    pub fn schema(&self) -> &SignalSchema {
        &self.schema
    }

    pub fn times(&self) -> &[Time] {
        &self.times
    }

    /// Breakpoints as floats.
    pub fn times_f64(&self) -> &[f64] {
        &self.times_f
    }

    /// Value row at breakpoint `k`.
    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn offset(&self) -> Time {
        self.offset
    }

    pub fn len_time(&self) -> Time {
        *self.times.last().expect("at least two samples")
    }

    /// Signal length `r` as a float.
    pub fn length(&self) -> f64 {
        *self.times_f.last().expect("at least two samples")
    }

    pub fn segment_count(&self) -> usize {
        self.times.len() - 1
    }

    /// The segments `[t_j, t_{j+1}]` in order.
    pub fn segment_partition(&self) -> Vec<(Time, Time)> {
        self.times.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Index of a segment containing `t` (the left one at interior
    /// breakpoints). `t` must lie in the domain.
    pub fn segment_index(&self, t: f64) -> usize {
        let k = self.times_f.partition_point(|&x| x < t);
        k.saturating_sub(1).min(self.segment_count() - 1)
    }

    /// Linear interpolant of component `i` at time `t`.
    pub fn value_at(&self, i: usize, t: f64) -> Result<f64, SignalError> {
        if i >= self.schema.len() {
            return Err(SignalError::UnknownVariable(i));
        }
        if !(t >= 0.0 && t <= self.length()) {
            return Err(SignalError::Domain {
                t,
                length: self.length(),
            });
        }
        Ok(self.value_unchecked(i, t))
    }

    pub(crate) fn value_unchecked(&self, i: usize, t: f64) -> f64 {
        let j = self.segment_index(t);
        let (t0, t1) = (self.times_f[j], self.times_f[j + 1]);
        let (v0, v1) = (self.values[j][i], self.values[j + 1][i]);
        if t == t0 {
            v0
        } else if t == t1 {
            v1
        } else {
            v0 + (v1 - v0) * ((t - t0) / (t1 - t0))
        }
    }

    /// All components at time `t`.
    pub fn values_at(&self, t: f64) -> Result<Vec<f64>, SignalError> {
        (0..self.schema.len()).map(|i| self.value_at(i, t)).collect()
    }

    /// Slope of component `i` on segment `j`.
    pub fn slope(&self, i: usize, j: usize) -> f64 {
        (self.values[j + 1][i] - self.values[j][i]) / (self.times_f[j + 1] - self.times_f[j])
    }

    /// Splits every segment into `factor` equal pieces by inserting
    /// interpolated breakpoints.
    pub fn refine(&self, factor: usize) -> Signal {
        let factor = factor.max(1);
        let mut times = Vec::with_capacity(self.segment_count() * factor + 1);
        let mut values = Vec::with_capacity(times.capacity());
        for j in 0..self.segment_count() {
            let (a, b) = (self.times[j], self.times[j + 1]);
            for k in 0..factor {
                let s = Time::new(k as i128, factor as i128);
                let t = a + (b - a) * s;
                let sf = s.to_f64().unwrap_or(0.0);
                times.push(t);
                values.push(
                    self.values[j]
                        .iter()
                        .zip(&self.values[j + 1])
                        .map(|(&v0, &v1)| if k == 0 { v0 } else { v0 + (v1 - v0) * sf })
                        .collect(),
                );
            }
        }
        times.push(self.len_time());
        values.push(self.values[self.segment_count()].clone());
        let mut s = Signal::new(self.schema.clone(), times, values).expect("refinement keeps invariants");
        s.offset = self.offset;
        s
    }

    /// Whether the signal is long enough to evaluate `f` at time 0.
    pub fn check_length(&self, f: &Formula) -> LengthCheck {
        let needed = f.required_length();
        let have = self.len_time();
        if have >= needed {
            LengthCheck::Ok
        } else {
            LengthCheck::Short { needed, have }
        }
    }
}

/// Integral times print without a fraction; others as the nearest float,
/// which reads back within one ulp.
fn format_time_for_csv(t: &Time) -> String {
    let exact = format_time(t);
    if !exact.contains('/') {
        return exact;
    }
    let x = time_to_f64(t);
    if x.is_zero() {
        "0".into()
    } else {
        format!("{x}")
    }
}
