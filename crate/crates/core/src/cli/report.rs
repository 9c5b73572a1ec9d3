//! Reports, their text and JSON renderings, and CSV number formatting.

use std::fmt::Write as _;

use serde::Serialize;

use crate::finsys::DimQuadruple;
use crate::seqclassify::{Relation, Verdict};

/// Output of one command. `timing` is the only field that varies between
/// identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub ids: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Invariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selftest: Option<SelftestSummary>,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSummary {
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
    /// Where the CSV went, when written to a file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    /// Inline matrix rows when no output file was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Invariants {
    Finite(FiniteInvariants),
    Diagonal(DiagonalInvariants),
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteInvariants {
    pub ambient_dim: usize,
    pub dim_e1: usize,
    pub dim_e2: usize,
    pub quadruple: DimQuadruple,
    /// `[E1∩E2, E1∩E2⊥, E1⊥∩E2, E1⊥∩E2⊥, generic angles]`.
    pub halmos_dims: [usize; 5],
    pub generic_angles: Vec<f64>,
    pub principal_angles: Vec<f64>,
    /// `E1 ⊕ E2 = H`, so the oblique projection onto E1 along E2 exists.
    pub complementary: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalInvariants {
    pub description: String,
    pub kernel_dim: String,
    pub cokernel_dim: String,
    pub range_closed: bool,
    pub sum_closed: bool,
    pub domain_total: bool,
    pub compact: bool,
    /// Schatten exponent, `None` when infinite.
    pub sh_exponent: Option<f64>,
    pub leading_mu: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestSummary {
    pub passed: usize,
    pub failed: usize,
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn new(command: &str, ids: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            ids: ids.iter().map(|s| s.to_string()).collect(),
            relation: None,
            verdicts: Vec::new(),
            witness: None,
            invariants: None,
            selftest: None,
            timing: Timing::default(),
        }
    }

    pub fn undecided(&self) -> bool {
        self.verdicts.iter().any(|v| v.relation == Relation::Undecided)
    }

    pub fn failed(&self) -> bool {
        self.selftest.as_ref().is_some_and(|s| s.failed > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timing field removed.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut rows: Vec<(String, String)> = vec![("command".into(), self.command.clone())];
        if !self.ids.is_empty() {
            rows.push(("systems".into(), self.ids.join(" vs ")));
        }
        if let Some(r) = &self.relation {
            rows.push(("relation".into(), r.clone()));
        }
        for v in &self.verdicts {
            rows.push(("verdict".into(), format!("{} [{}]", v.relation, v.rule_id)));
            rows.push(("because".into(), v.citation.clone()));
            if !v.detail.is_empty() {
                rows.push(("detail".into(), v.detail.clone()));
            }
        }
        if let Some(w) = &self.witness {
            rows.push(("witness".into(), if w.found { "found".into() } else { "none".into() }));
            if let Some((r1, r2)) = w.residuals {
                rows.push(("residuals".into(), format!("{} {}", fmt_num(r1), fmt_num(r2))));
            }
            if let Some(c) = w.condition_number {
                rows.push(("condition".into(), fmt_num(c)));
            }
            if let Some(p) = &w.csv_path {
                rows.push(("written".into(), p.clone()));
            }
        }
        match &self.invariants {
            Some(Invariants::Finite(f)) => {
                rows.push(("ambient dim".into(), f.ambient_dim.to_string()));
                rows.push(("dim E1, E2".into(), format!("{}, {}", f.dim_e1, f.dim_e2)));
                let q = f.quadruple;
                rows.push(("quadruple".into(), format!("({}, {}, {}, {})", q.d_meet, q.d1, q.d2, q.d_coker)));
                rows.push(("halmos dims".into(), format!("{:?}", f.halmos_dims)));
                rows.push(("generic angles".into(), join_nums(&f.generic_angles)));
                rows.push(("principal angles".into(), join_nums(&f.principal_angles)));
                rows.push(("complementary".into(), f.complementary.to_string()));
            }
            Some(Invariants::Diagonal(d)) => {
                rows.push(("operator".into(), d.description.clone()));
                rows.push(("kernel dim".into(), d.kernel_dim.clone()));
                rows.push(("cokernel dim".into(), d.cokernel_dim.clone()));
                rows.push(("range closed".into(), d.range_closed.to_string()));
                rows.push(("E1 + E2 closed".into(), d.sum_closed.to_string()));
                rows.push(("bounded".into(), d.domain_total.to_string()));
                rows.push(("compact".into(), d.compact.to_string()));
                rows.push(("Sh".into(), d.sh_exponent.map_or("inf".into(), fmt_num)));
                if !d.leading_mu.is_empty() {
                    rows.push(("leading mu".into(), join_nums(&d.leading_mu)));
                }
            }
            None => {}
        }
        if let Some(s) = &self.selftest {
            for c in &s.criteria {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                rows.push((format!("{mark} {}", c.id), format!("{}: {}", c.name, c.detail)));
            }
            rows.push(("summary".into(), format!("{} passed, {} failed", s.passed, s.failed)));
        }
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

fn join_nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(" ")
}

/// 17 significant digits with trailing zeros removed; positional notation
/// for magnitudes in `[1e-5, 1e17)`, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if !(-5..17).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

/// CSV with a header row.
pub fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
