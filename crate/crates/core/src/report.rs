//! Verification records: every check carries both sides of the claim and a
//! signed margin, so reports show how close a claim came to failing.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// How the two sides of a check are compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "tolerance")]
pub enum Relation {
    /// `|lhs − rhs| ≤ tolerance` (absolute, already scaled by the caller).
    Equal(f64),
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Non-negative (strictly positive for strict relations) iff the check
    /// passes.
    pub margin: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: f64, relation: Relation, rhs: f64) -> Self {
        let (margin, pass) = match relation {
            Relation::Equal(tol) => {
                let m = tol - (lhs - rhs).abs();
                (m, m >= 0.0)
            }
            Relation::Less => (rhs - lhs, rhs - lhs > 0.0),
            Relation::LessEqual => (rhs - lhs, rhs - lhs >= 0.0),
            Relation::Greater => (lhs - rhs, lhs - rhs > 0.0),
            Relation::GreaterEqual => (lhs - rhs, lhs - rhs >= 0.0),
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            margin,
            pass: pass && lhs.is_finite() && rhs.is_finite(),
        }
    }

    /// Equality within `rel_tol · max(|lhs|, |rhs|, 1)`.
    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        Self::new(name, lhs, Relation::Equal(rel_tol * scale), rhs)
    }

    /// Exact integer equality.
    pub fn exact(name: impl Into<String>, lhs: i128, rhs: i128) -> Self {
        Self::new(name, lhs as f64, Relation::Equal(0.0), rhs as f64).with_pass(lhs == rhs)
    }

    /// A boolean claim rendered as `1 == 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, f64::from(u8::from(ok)), Relation::Equal(0.0), 1.0)
    }

    fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(lemma: impl Into<String>) -> Self {
        Self {
            lemma: lemma.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
            note: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn add_note(&mut self, note: impl Into<String>) {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// The smallest margin over all checks, or `None` for an empty report.
    pub fn min_margin(&self) -> Option<f64> {
        self.checks.iter().map(|c| c.margin).reduce(f64::min)
    }

    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| match v {
                Value::Number(x) if x.is_f64() => format!("{k}={}", fmt_sig(x.as_f64().unwrap_or(f64::NAN))),
                Value::String(s) => format!("{k}={s}"),
                _ => format!("{k}={v}"),
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Aggregate of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

pub fn summarize(reports: &[VerificationReport]) -> Summary {
    let passed = reports.iter().filter(|r| r.pass).count();
    Summary {
        total: reports.len(),
        passed,
        failed: reports.len() - passed,
    }
}

/// CSV summary with one row per check.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lemma", "params", "check", "lhs", "rhs", "margin", "pass"])
        .expect("in-memory write");
    for r in reports {
        for c in &r.checks {
            w.write_record([
                r.lemma.clone(),
                r.params_string(),
                c.name.clone(),
                fmt_sig(c.lhs),
                fmt_sig(c.rhs),
                fmt_sig(c.margin),
                c.pass.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
}

/// Ten significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.9e}")
    }
}

/// Rounds to ten significant digits, for machine-readable output.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}
