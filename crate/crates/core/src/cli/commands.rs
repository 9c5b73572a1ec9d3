//! `classify`, `invariants`, `witness` and `mu-csv`.

use std::path::Path;
use std::time::Instant;

use super::config::{ConfigFile, System};
use super::report::{
    to_csv, DiagonalInvariants, FiniteInvariants, Invariants, Report, Timing, WitnessSummary,
};
use super::{CliError, Options, RelationKind};
use crate::finsys::{self, FiniteSystem, Witness};
use crate::linalg;
use crate::seqclassify::{sum_closed_graph, Engine, Relation, Rule, Verdict};
use crate::seqmodel::DiagonalSpec;

const LEADING_MU: usize = 5;

fn engine(opts: &Options) -> Engine {
    Engine { budgets: opts.budgets, disabled: opts.disabled.clone() }
}

fn stamp(mut r: Report, start: Instant) -> Report {
    r.timing = Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 };
    r
}

/// Finite bounded (= algebraic) classification by dimension quadruples.
pub fn classify_finite_bounded(a: &FiniteSystem, b: &FiniteSystem, tol: f64, rel: RelationKind) -> Result<Verdict, CliError> {
    let (qa, qb) = (finsys::dim_quadruple_tol(a, tol)?, finsys::dim_quadruple_tol(b, tol)?);
    let iso = a.ambient_dim() == b.ambient_dim() && qa == qb;
    let relation = match (rel, iso) {
        (RelationKind::Algebraic, true) => Relation::AlgebraicallyIsomorphic,
        (RelationKind::Algebraic, false) => Relation::NotAlgebraicallyIsomorphic,
        (_, true) => Relation::BoundedlyIsomorphic,
        (_, false) => Relation::NotBoundedlyIsomorphic,
    };
    let show = |q: finsys::DimQuadruple| format!("({}, {}, {}, {})", q.d_meet, q.d1, q.d2, q.d_coker);
    Ok(Verdict::new(
        relation,
        Rule::FiniteDimQuadruple,
        format!(
            "ambient {} vs {}; quadruples {} vs {}",
            a.ambient_dim(),
            b.ambient_dim(),
            show(qa),
            show(qb)
        ),
    ))
}

/// Finite unitary classification by Halmos dimensions and angles.
pub fn classify_finite_unitary(a: &FiniteSystem, b: &FiniteSystem, tol: f64) -> Result<Verdict, CliError> {
    let (ha, hb) = (finsys::halmos_decompose_tol(a, tol)?, finsys::halmos_decompose_tol(b, tol)?);
    let iso = a.ambient_dim() == b.ambient_dim()
        && ha.dims() == hb.dims()
        && finsys::angles_match(&ha.generic_angles, &hb.generic_angles);
    let relation = if iso { Relation::UnitarilyIsomorphic } else { Relation::NotUnitarilyIsomorphic };
    Ok(Verdict::new(
        relation,
        Rule::FiniteAngles,
        format!(
            "halmos dims {:?} vs {:?}; generic angles [{}] vs [{}]",
            ha.dims(),
            hb.dims(),
            join(&ha.generic_angles),
            join(&hb.generic_angles)
        ),
    ))
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| super::report::fmt_num(x)).collect::<Vec<_>>().join(", ")
}

/// Witness for two finite systems: the block-diagonal construction for two
/// graph systems of equal shape, adapted bases otherwise.
pub fn finite_witness(a: &System, b: &System) -> Result<Option<Witness>, CliError> {
    match (a, b) {
        (System::GraphFinite(t, _), System::GraphFinite(t2, _)) if t.shape() == t2.shape() => {
            Ok(finsys::witness_graph_bounded(t, t2)?)
        }
        _ => {
            let (fa, fb) = (finite_of(a)?, finite_of(b)?);
            Ok(finsys::witness_fin(fa, fb)?)
        }
    }
}

fn finite_of(s: &System) -> Result<&FiniteSystem, CliError> {
    s.finite()
        .ok_or_else(|| CliError::KindMismatch(format!("{} is not a finite system", s.kind())))
}

fn summary(w: &Option<Witness>) -> WitnessSummary {
    WitnessSummary {
        found: w.is_some(),
        residuals: w.as_ref().map(|w| w.residuals),
        condition_number: w.as_ref().map(|w| w.condition_number),
        csv_path: None,
        matrix: None,
    }
}

pub fn cmd_classify(cfg: &ConfigFile, id1: &str, id2: &str, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    let (a, b) = (cfg.system(id1)?, cfg.system(id2)?);
    let mut report = Report::new("classify", &[id1, id2]);
    report.relation = Some(opts.relation.to_string());
    match (&a, &b) {
        (System::Diagonal(da), System::Diagonal(db)) => {
            let v = classify_diagonal(da, db, opts)?;
            report.verdicts.push(v);
        }
        (System::Diagonal(_), _) | (_, System::Diagonal(_)) => {
            return Err(CliError::KindMismatch(format!("{} with {}", a.kind(), b.kind())));
        }
        _ => {
            let (fa, fb) = (finite_of(&a)?, finite_of(&b)?);
            let v = match opts.relation {
                RelationKind::Unitary => classify_finite_unitary(fa, fb, opts.tol)?,
                rel => classify_finite_bounded(fa, fb, opts.tol, rel)?,
            };
            if v.relation == Relation::BoundedlyIsomorphic {
                report.witness = Some(summary(&finite_witness(&a, &b)?));
            }
            report.verdicts.push(v);
        }
    }
    Ok(stamp(report, start))
}

pub fn classify_diagonal(a: &DiagonalSpec, b: &DiagonalSpec, opts: &Options) -> Result<Verdict, CliError> {
    let e = engine(opts);
    match opts.relation {
        RelationKind::Bounded => Ok(e.classify_bounded_graph(a, b)),
        RelationKind::Algebraic => Ok(e.classify_algebraic_graph(a, b)?),
        RelationKind::Unitary => Err(CliError::Unsupported(
            "unitary classification of infinite-dimensional systems".into(),
        )),
    }
}

pub fn finite_invariants(s: &FiniteSystem, tol: f64) -> Result<FiniteInvariants, CliError> {
    let h = finsys::halmos_decompose_tol(s, tol)?;
    Ok(FiniteInvariants {
        ambient_dim: s.ambient_dim(),
        dim_e1: s.e1().cols(),
        dim_e2: s.e2().cols(),
        quadruple: finsys::dim_quadruple_tol(s, tol)?,
        halmos_dims: h.dims(),
        generic_angles: h.generic_angles,
        principal_angles: linalg::principal_angles(s.e1(), s.e2())?,
        complementary: finsys::oblique_projection(s.e1(), s.e2())?.is_some(),
    })
}

pub fn diagonal_invariants(d: &DiagonalSpec) -> Result<DiagonalInvariants, CliError> {
    let sh = d.sh_exponent();
    Ok(DiagonalInvariants {
        description: d.describe(),
        kernel_dim: d.kernel_dim().to_string(),
        cokernel_dim: d.cokernel_dim().to_string(),
        range_closed: d.range_closed(),
        sum_closed: sum_closed_graph(d),
        domain_total: d.domain_total(),
        compact: d.is_compact(),
        sh_exponent: sh.is_finite().then_some(sh),
        leading_mu: if d.is_compact() { d.mu_sequence(LEADING_MU)? } else { Vec::new() },
    })
}

pub fn cmd_invariants(cfg: &ConfigFile, id: &str, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    let s = cfg.system(id)?;
    let mut report = Report::new("invariants", &[id]);
    report.invariants = Some(match &s {
        System::Diagonal(d) => Invariants::Diagonal(diagonal_invariants(d)?),
        other => Invariants::Finite(finite_invariants(finite_of(other)?, opts.tol)?),
    });
    Ok(stamp(report, start))
}

/// Builds a witness; the matrix goes to `out` as CSV or inline into the
/// report.
pub fn cmd_witness(cfg: &ConfigFile, id1: &str, id2: &str, out: Option<&Path>, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    let (a, b) = (cfg.system(id1)?, cfg.system(id2)?);
    let (fa, fb) = (finite_of(&a)?, finite_of(&b)?);
    let mut report = Report::new("witness", &[id1, id2]);
    report.relation = Some(RelationKind::Bounded.to_string());
    let verdict = classify_finite_bounded(fa, fb, opts.tol, RelationKind::Bounded)?;
    let w = if verdict.relation == Relation::BoundedlyIsomorphic { finite_witness(&a, &b)? } else { None };
    let mut sum = summary(&w);
    if let Some(w) = &w {
        match out {
            Some(path) => {
                let header: Vec<String> = (0..w.map.cols()).map(|j| format!("c{j}")).collect();
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                std::fs::write(path, to_csv(&header, &w.map.to_rows()))
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                sum.csv_path = Some(path.display().to_string());
            }
            None => sum.matrix = Some(w.map.to_rows()),
        }
    }
    let verdict = if w.is_none() && verdict.relation == Relation::BoundedlyIsomorphic {
        Verdict { detail: format!("{}; no witness within the conditioning cap", verdict.detail), ..verdict }
    } else if w.is_none() {
        Verdict { detail: format!("no witness: {}", verdict.detail), ..verdict }
    } else {
        verdict
    };
    report.verdicts.push(verdict);
    report.witness = Some(sum);
    Ok(stamp(report, start))
}

/// CSV of `(n, mu_n)` and, with `against`, the ratio `mu_n / mu'_n`.
pub fn cmd_mu_csv(cfg: &ConfigFile, id: &str, n: usize, against: Option<&str>) -> Result<String, CliError> {
    let spec = diagonal_of(cfg, id)?;
    let mu = spec.mu_sequence(n)?;
    match against {
        None => {
            let rows: Vec<Vec<f64>> = mu.iter().enumerate().map(|(i, &m)| vec![(i + 1) as f64, m]).collect();
            Ok(to_csv(&["n", "mu"], &rows))
        }
        Some(other) => {
            let mu2 = diagonal_of(cfg, other)?.mu_sequence(n)?;
            let rows: Vec<Vec<f64>> = mu
                .iter()
                .zip(&mu2)
                .enumerate()
                .map(|(i, (&m, &m2))| vec![(i + 1) as f64, m, m2, m / m2])
                .collect();
            Ok(to_csv(&["n", "mu", "mu_other", "ratio"], &rows))
        }
    }
}

fn diagonal_of(cfg: &ConfigFile, id: &str) -> Result<DiagonalSpec, CliError> {
    match cfg.system(id)? {
        System::Diagonal(d) => Ok(d),
        other => Err(CliError::KindMismatch(format!("mu-csv needs graph-diagonal, {id:?} is {}", other.kind()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ConfigFile {
        ConfigFile::from_json(
            r#"{"systems": [
                {"id": "t2", "kind": "graph-finite", "matrix": [[1, 0], [0, 0.5]]},
                {"id": "t3", "kind": "graph-finite", "matrix": [[1, 0], [0, 0.3333333333333333]]},
                {"id": "r1", "kind": "graph-finite", "matrix": [[1, 0], [0, 0]]},
                {"id": "orth", "kind": "finite-matrix", "ambient_dim": 2, "e1": [[1, 0]], "e2": [[0, 1]]},
                {"id": "h", "kind": "graph-diagonal", "branches": [{"c": 1, "p": -1}]},
                {"id": "h2", "kind": "graph-diagonal", "branches": [{"c": 1, "p": -2}]},
                {"id": "hs", "kind": "graph-diagonal", "branches": [{"c": 1, "p": -1}], "shift_offset": 1},
                {"id": "sq", "kind": "graph-diagonal", "branches": [{"c": 1, "p": 2}]},
                {"id": "cube", "kind": "graph-diagonal", "branches": [{"c": 1, "p": 3}]}
            ]}"#,
        )
        .unwrap()
    }

    fn opts(rel: RelationKind) -> Options {
        Options { relation: rel, ..Options::default() }
    }

    #[test]
    fn classify_finite_and_diagonal() {
        let c = cfg();
        let r = cmd_classify(&c, "t2", "t3", &opts(RelationKind::Bounded)).unwrap();
        assert_eq!(r.verdicts[0].relation, Relation::BoundedlyIsomorphic);
        assert!(r.witness.as_ref().unwrap().found);
        let r = cmd_classify(&c, "t2", "t3", &opts(RelationKind::Unitary)).unwrap();
        assert_eq!(r.verdicts[0].relation, Relation::NotUnitarilyIsomorphic);
        let r = cmd_classify(&c, "h", "h2", &opts(RelationKind::Algebraic)).unwrap();
        assert_eq!(r.verdicts[0].relation, Relation::AlgebraicallyIsomorphic);
        let r = cmd_classify(&c, "h", "h2", &opts(RelationKind::Bounded)).unwrap();
        assert_eq!(r.verdicts[0].relation, Relation::NotBoundedlyIsomorphic);
        assert!(cmd_classify(&c, "h", "t2", &opts(RelationKind::Bounded)).is_err());
        assert!(cmd_classify(&c, "h", "h2", &opts(RelationKind::Unitary)).is_err());
    }

    #[test]
    fn invariants_examples() {
        let c = cfg();
        let r = cmd_invariants(&c, "orth", &Options::default()).unwrap();
        match r.invariants.unwrap() {
            Invariants::Finite(f) => {
                let q = f.quadruple;
                assert_eq!((q.d_meet, q.d1, q.d2, q.d_coker), (0, 1, 1, 0));
            }
            _ => panic!("expected finite invariants"),
        }
        match cmd_invariants(&c, "h2", &Options::default()).unwrap().invariants.unwrap() {
            Invariants::Diagonal(d) => {
                assert_eq!(d.sh_exponent, Some(0.5));
                assert!(!d.range_closed);
                assert_eq!(d.kernel_dim, "0");
            }
            _ => panic!("expected diagonal invariants"),
        }
        match cmd_invariants(&c, "hs", &Options::default()).unwrap().invariants.unwrap() {
            Invariants::Diagonal(d) => assert_eq!(d.cokernel_dim, "1"),
            _ => panic!("expected diagonal invariants"),
        }
    }

    #[test]
    fn witness_cases() {
        let c = cfg();
        let r = cmd_witness(&c, "t2", "t3", None, &Options::default()).unwrap();
        let w = r.witness.unwrap();
        assert!(w.found);
        let (r1, r2) = w.residuals.unwrap();
        assert!(r1 < 1e-10 && r2 < 1e-10);
        let r = cmd_witness(&c, "t2", "r1", None, &Options::default()).unwrap();
        assert!(!r.witness.unwrap().found);
        assert!(r.verdicts[0].detail.starts_with("no witness"));
        let r = cmd_witness(&c, "t2", "t2", None, &Options::default()).unwrap();
        let m = r.witness.unwrap().matrix.unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mu_csv_examples() {
        let c = cfg();
        assert_eq!(cmd_mu_csv(&c, "h", 3, None).unwrap(), "n,mu\n1,1\n2,0.5\n3,0.33333333333333331\n");
        let s = cmd_mu_csv(&c, "h", 3, Some("h2")).unwrap();
        assert_eq!(s.lines().nth(3).unwrap(), "3,0.33333333333333331,0.1111111111111111,3");
        assert!(cmd_mu_csv(&c, "sq", 3, None).is_err());
        assert!(cmd_mu_csv(&c, "t2", 3, None).is_err());
    }
}
