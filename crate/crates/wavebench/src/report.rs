//! Suite reports: deterministic pass/fail summaries with replayable
//! counterexamples.
//!
//! JSON output omits wall time so reports are byte-for-byte reproducible
//! under a fixed seed; the text rendering includes it.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub description: String,
    /// Replayable serialized instance.
    pub instance: String,
    /// Greedily element-deleted variant that still fails, when smaller.
    pub minimized: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub instances: u64,
    pub passes: u64,
    pub failures: u64,
    pub skipped: u64,
    pub tallies: BTreeMap<String, u64>,
    pub counterexample: Option<Counterexample>,
    #[serde(skip)]
    pub wall: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {}: {} instances, {} passed, {} failed, {} skipped ({:.3}s)\n",
            self.suite,
            self.instances,
            self.passes,
            self.failures,
            self.skipped,
            self.wall.as_secs_f64()
        );
        for (k, v) in &self.tallies {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        if let Some(cx) = &self.counterexample {
            out.push_str(&format!("  COUNTEREXAMPLE: {}\n", cx.description));
            for line in cx.instance.lines() {
                out.push_str(&format!("    | {line}\n"));
            }
            if let Some(min) = &cx.minimized {
                out.push_str("  minimized:\n");
                for line in min.lines() {
                    out.push_str(&format!("    | {line}\n"));
                }
            }
        }
        out
    }
}

/// One trial's outcome. Tally labels are free-form and merged by sum.
pub enum Trial {
    Pass(Vec<(String, u64)>),
    Fail(Counterexample),
    Skip,
}

impl Trial {
    pub fn pass() -> Trial {
        Trial::Pass(Vec::new())
    }

    pub fn tally(label: impl Into<String>) -> Trial {
        Trial::Pass(vec![(label.into(), 1)])
    }
}

/// Run `count` trials (in parallel), merging results in instance order so
/// the first counterexample is deterministic. Trials exceeding the wall
/// guard are counted as skipped.
pub fn run_trials(
    suite: &str,
    count: u64,
    guard: Duration,
    f: impl Fn(u64) -> Trial + Sync,
) -> Report {
    use rayon::prelude::*;
    let start = Instant::now();
    let results: Vec<(Trial, Duration)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let t0 = Instant::now();
            let r = f(i);
            (r, t0.elapsed())
        })
        .collect();
    let mut report = Report {
        suite: suite.to_string(),
        instances: count,
        passes: 0,
        failures: 0,
        skipped: 0,
        tallies: BTreeMap::new(),
        counterexample: None,
        wall: Duration::ZERO,
    };
    for (trial, elapsed) in results {
        let trial = if elapsed > guard { Trial::Skip } else { trial };
        match trial {
            Trial::Pass(tallies) => {
                report.passes += 1;
                for (k, v) in tallies {
                    *report.tallies.entry(k).or_insert(0) += v;
                }
            }
            Trial::Fail(cx) => {
                report.failures += 1;
                if report.counterexample.is_none() {
                    report.counterexample = Some(cx);
                }
            }
            Trial::Skip => report.skipped += 1,
        }
    }
    report.wall = start.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_instance_ordered() {
        let report = run_trials("demo", 10, Duration::from_secs(5), |i| {
            if i % 4 == 3 {
                Trial::Fail(Counterexample {
                    description: format!("instance {i}"),
                    instance: format!("i={i}"),
                    minimized: None,
                })
            } else {
                Trial::tally("fine")
            }
        });
        assert_eq!(report.failures, 2);
        assert_eq!(report.counterexample.as_ref().unwrap().description, "instance 3");
        assert_eq!(report.tallies["fine"], 8);
        assert!(!report.to_text().is_empty());
    }

    #[test]
    fn json_omits_wall_time() {
        let report = run_trials("demo", 1, Duration::from_secs(5), |_| Trial::pass());
        let j = report.to_json();
        assert!(!j.contains("wall"));
        let again = run_trials("demo", 1, Duration::from_secs(5), |_| Trial::pass());
        assert_eq!(j, again.to_json());
    }
}
