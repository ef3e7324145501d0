//! Checks the `expect` lines of a system file against fresh computations.
//!
//! Recognized keys: `budget` (setting, not a check), `dominance`, `adim`,
//! `invariant`, `degrees`, `growth`, `class`, `verdict`, `square.new_invariant`,
//! `square.witness`, `square.rank`.

use std::cell::OnceCell;

use ratdyn_core::dynsys::{degree_sequence, validate_dominant, DynamicalSystem};
use ratdyn_core::invsearch::{adim_lower_bound, corollary_b_check, CorollaryBReport, InvariantReport, SearchBudget};
use ratdyn_core::translation::{classify_system, TranslationEvidence};
use serde::Serialize;
use serde_json::Value;

use crate::commands::parse_budget;
use crate::error::CliResult;
use crate::parser::parse_expression;
use crate::sysfile::parse_system_source;
use crate::verify::{verify_invariant, Mode};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub file: String,
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(e) => e.to_string(),
    }
}

struct Lazy<'a> {
    sys: &'a DynamicalSystem,
    budget: SearchBudget,
    adim: OnceCell<CliResult<InvariantReport>>,
    square: OnceCell<CliResult<CorollaryBReport>>,
    class: OnceCell<CliResult<TranslationEvidence>>,
}

impl Lazy<'_> {
    fn adim(&self) -> Result<&InvariantReport, String> {
        self.adim
            .get_or_init(|| Ok(adim_lower_bound(self.sys, &self.budget)?))
            .as_ref()
            .map_err(|e| e.to_string())
    }

    fn square(&self) -> Result<&CorollaryBReport, String> {
        self.square
            .get_or_init(|| Ok(corollary_b_check(self.sys, &self.budget)?))
            .as_ref()
            .map_err(|e| e.to_string())
    }

    fn class(&self) -> Result<&TranslationEvidence, String> {
        self.class
            .get_or_init(|| Ok(classify_system(self.sys)?))
            .as_ref()
            .map_err(|e| e.to_string())
    }
}

fn parse_list(s: &str) -> Option<Vec<u32>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Runs every expectation of one file. Parse failures become one failed check.
pub fn run_file(name: &str, src: &str) -> Vec<Check> {
    let fail = |key: &str, expected: &str, actual: String| Check {
        file: name.to_string(),
        key: key.to_string(),
        expected: expected.to_string(),
        actual,
        passed: false,
    };
    let file = match parse_system_source(src, name) {
        Ok(f) => f,
        Err(e) => return vec![fail("parse", "ok", e.to_string())],
    };
    let sys = match file.to_system() {
        Ok(s) => s,
        Err(e) => return vec![fail("parse", "ok", e.to_string())],
    };
    let budget = match file.expectation("budget").map(parse_budget).transpose() {
        Ok(b) => b.unwrap_or_default(),
        Err(e) => return vec![fail("budget", "valid budget", e.to_string())],
    };
    let lazy = Lazy {
        sys: &sys,
        budget,
        adim: OnceCell::new(),
        square: OnceCell::new(),
        class: OnceCell::new(),
    };
    let mut out = Vec::new();
    for (key, expected) in &file.expect {
        if key == "budget" {
            continue;
        }
        let actual: Result<String, String> = match key.as_str() {
            "dominance" => validate_dominant(&sys, 3).map(|d| kebab(&d)).map_err(|e| e.to_string()),
            "adim" => lazy.adim().map(|r| r.independence_rank.to_string()),
            "invariant" => parse_expression(expected, sys.vars())
                .and_then(|f| verify_invariant(&sys, &f, Mode::Exact, 1, 0))
                .map(|o| kebab(&o.verdict))
                .map_err(|e| e.to_string()),
            "degrees" => match parse_list(expected) {
                Some(ds) if !ds.is_empty() => degree_sequence(&sys, ds.len())
                    .map(|p| format!("{:?}", p.degrees))
                    .map_err(|e| e.to_string()),
                _ => Err("expected a list such as [1, 2, 4]".into()),
            },
            "growth" => lazy.class().map(|c| kebab(&c.profile.growth_class)),
            "class" => lazy.class().map(|c| kebab(&c.recognized_class)),
            "verdict" => lazy.class().map(|c| kebab(&c.verdict)),
            "square.new_invariant" => lazy.square().map(|r| r.new_invariant_found.to_string()),
            "square.witness" => lazy
                .square()
                .map(|r| r.witness.as_ref().map_or("none".to_string(), |w| w.to_string())),
            "square.rank" => lazy.square().map(|r| r.square_rank.to_string()),
            other => Err(format!("unknown expectation '{other}'")),
        };
        let (actual, passed) = match actual {
            Ok(a) => {
                let passed = match key.as_str() {
                    "invariant" => a == "invariant",
                    "degrees" => parse_list(expected).map(|d| format!("{d:?}")) == Some(a.clone()),
                    _ => a == *expected,
                };
                (a, passed)
            }
            Err(e) => (e, false),
        };
        out.push(Check {
            file: name.to_string(),
            key: key.clone(),
            expected: expected.clone(),
            actual,
            passed,
        });
    }
    out
}
