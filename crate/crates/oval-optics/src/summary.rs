use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing to measure (no eligible points, or the check is off).
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub a: Option<f64>,
    /// Largest measured value, already normalised like `threshold`.
    pub measured: Option<f64>,
    pub threshold: f64,
    pub status: Status,
    /// Number of points or rays the maximum was taken over.
    pub samples: usize,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        a: Option<f64>,
        measured: Option<f64>,
        threshold: f64,
        samples: usize,
    ) -> Self {
        let status = match measured {
            None => Status::Skipped,
            Some(m) if m <= threshold => Status::Pass,
            Some(_) => Status::Fail,
        };
        Check {
            name: name.into(),
            a,
            measured,
            threshold,
            status,
            samples,
            note: String::new(),
        }
    }

    pub fn skipped(
        name: impl Into<String>,
        a: Option<f64>,
        threshold: f64,
        note: impl Into<String>,
    ) -> Self {
        Check {
            note: note.into(),
            ..Check::new(name, a, None, threshold, 0)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Points left out of the checks, summed over all parameter values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tir: usize,
    pub singular: usize,
    pub grazing: usize,
    pub no_stencil: usize,
    pub side: usize,
    pub precondition: usize,
    pub outside_extent: usize,
    /// Wavefront samples without a caustic point (flat).
    pub gap: usize,
    /// Caustic samples skipped by reconstruction as too far away.
    pub far: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub scene: String,
    pub checks: Vec<Check>,
    pub counts: Counts,
}

impl ValidationSummary {
    pub fn new(scene: impl Into<String>) -> Self {
        ValidationSummary {
            scene: scene.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// True iff no measured maximum exceeds its threshold.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serialises");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scene: {}", self.scene);
        let _ = writeln!(
            s,
            "{:<38} {:>6} {:>12} {:>10} {:>8}  status",
            "check", "a", "measured", "threshold", "n"
        );
        for c in &self.checks {
            let a = c.a.map(|a| format!("{a}")).unwrap_or_else(|| "-".into());
            let m = c
                .measured
                .map(|m| format!("{m:.3e}"))
                .unwrap_or_else(|| "-".into());
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let _ = write!(
                s,
                "{:<38} {:>6} {:>12} {:>10.1e} {:>8}  {status}",
                c.name, a, m, c.threshold, c.samples
            );
            if !c.note.is_empty() {
                let _ = write!(s, "  ({})", c.note);
            }
            s.push('\n');
        }
        let k = &self.counts;
        let _ = writeln!(
            s,
            "excluded: tir {} singular {} grazing {} stencil {} side {} precondition {} extent {}; caustic gaps {} far {}",
            k.tir, k.singular, k.grazing, k.no_stencil, k.side, k.precondition, k.outside_extent, k.gap, k.far
        );
        let _ = writeln!(
            s,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        s
    }
}
