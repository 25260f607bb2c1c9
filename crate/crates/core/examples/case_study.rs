//! Simulates both repressilator runs and monitors the oscillation formulas.

use stlstar_core::simulate::{integrate, RepressilatorParams};
use stlstar_core::{monitor, parse, MonitorOptions};

fn main() {
    let period = "G[10,190] F[0,50] *((F[1,50] m1* < m1) && (F[1,50] m1* > m1))";
    let growing = "G[10,200] *(F[1,50] m1* <= m1)";
    let both = format!("({period}) && ({growing})");
    for alpha0 in [0.2, 2.0] {
        let p = RepressilatorParams {
            alpha0,
            samples: 301,
            ..Default::default()
        };
        let s = integrate(&p).expect("default parameters integrate");
        for (name, text) in [("oscillates", period), ("oscillates, peaks never drop", both.as_str())] {
            let f = parse(text, s.schema()).expect("formula parses");
            let r = monitor(&s, &f, &MonitorOptions::default()).expect("signal is long enough");
            println!(
                "alpha0 = {alpha0:<4} {name:<30} {} ({:.0} ms)",
                r.verdict, r.stats.wall_ms
            );
        }
    }
}
