//! Offline monitoring of STL* formulas over piecewise-linear signals.
//!
//! STL* extends signal temporal logic with a freeze operator `*( … )` that
//! records the time it is evaluated at; atoms inside can then compare current
//! signal values `x` with values at the frozen time `x*`. The monitor builds,
//! for each subformula, its satisfaction set: the points `(t, t*)` of
//! `[0, r]²` where it holds, represented as a union of convex polygons. A
//! signal satisfies a formula when `(0, 0)` lies in the root set.
//!
//! ```
//! use stlstar_core::{formula, monitor, MonitorOptions, Signal, Verdict};
//!
//! let s = Signal::from_csv_reader("time,x\n0,0\n5,4\n10,0\n".as_bytes()).unwrap();
//! let f = formula::parse("F[0,5] *(F[1,3] x < x* - 1)", s.schema()).unwrap();
//! let report = monitor(&s, &f, &MonitorOptions::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::Sat);
//! ```

pub mod formula;
pub mod oracle;
pub mod satset;
pub mod signal;
pub mod simulate;
pub mod time;

pub use formula::{parse, Formula, LinearPredicate, ParseError, SignalSchema};
pub use satset::{monitor, MonitorError, MonitorOptions, MonitorReport, Verdict};
pub use signal::{LengthCheck, Signal, SignalError};
pub use time::Time;
