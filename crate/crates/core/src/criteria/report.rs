use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Conclusion {
    GaugeNFormal { n: usize },
    Formal,
    Inconclusive,
}

/// Outcome of a sufficient criterion. Conclusions are conditional on `assumption` when present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub truncation: usize,
    pub checks: Vec<HypothesisCheck>,
    pub conclusion: Conclusion,
    pub assumption: Option<String>,
    pub notes: Vec<String>,
    pub cross_check: Option<bool>,
}

impl CriterionReport {
    pub(crate) fn new(criterion: &str, truncation: usize) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            truncation,
            checks: Vec::new(),
            conclusion: Conclusion::Inconclusive,
            assumption: None,
            notes: Vec::new(),
            cross_check: None,
        }
    }

    pub(crate) fn check(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.checks.push(HypothesisCheck { name: name.into(), passed });
        self
    }

    /// Sets `conclusion` only when every check passed.
    pub(crate) fn conclude(&mut self, conclusion: Conclusion) {
        self.conclusion = if self.passed() { conclusion } else { Conclusion::Inconclusive };
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name.as_str())
    }

    /// Human-readable lines.
    pub fn render(&self) -> String {
        let mut out = format!("criterion {} (truncation {})\n", self.criterion, self.truncation);
        for c in &self.checks {
            out.push_str(&format!("  [{}] {}\n", if c.passed { "pass" } else { "FAIL" }, c.name));
        }
        let conclusion = match &self.conclusion {
            Conclusion::GaugeNFormal { n } => format!("gauge {n}-formal"),
            Conclusion::Formal => "gauge formal".into(),
            Conclusion::Inconclusive => "inconclusive".into(),
        };
        match (&self.assumption, &self.conclusion) {
            (Some(a), Conclusion::GaugeNFormal { .. } | Conclusion::Formal) => {
                out.push_str(&format!("  conclusion: {conclusion}, provided {a}\n"))
            }
            _ => out.push_str(&format!("  conclusion: {conclusion}\n")),
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        if let Some(x) = self.cross_check {
            out.push_str(&format!("  obstruction decider: {}\n", if x { "formal" } else { "not formal" }));
        }
        out
    }
}
