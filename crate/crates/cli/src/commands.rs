use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use tesler_alpha::alpha::{
    alpha_of_face, classify_case, fcone_template, ncone_template, verify_tables, AlphaMethod,
    CaseSummary, FaceCheck, TableReport,
};
use tesler_alpha::cones::{
    certify_total_unimodularity, check_inversion_identity, fcone_mdp, ncone_mdp,
    oracle_equivalence, InversionReport, OracleReport, UnimodularityCertificate,
};
use tesler_alpha::ehrhart::{mcmullen_check, McMullenRow};
use tesler_alpha::ratlinalg::rational::pq;
use tesler_alpha::ratlinalg::{to_pq, RatMatrix, Rational};
use tesler_alpha::tesler::{
    dimension, enumerate_faces, enumerate_vertices, verify_deformation, DeformationReport,
    FaceSupport, HookSumVector, Position, UTMatrix, VertexGraph,
};

use crate::output::{csv, json};
use crate::{CliError, Format, Outcome, Size};

/// Largest `n` for which the full Ehrhart polynomial is computed.
const EHRHART_MAX_N: usize = 4;
/// Largest `n` for which `verify --oracle` runs the edge-direction oracle.
const ORACLE_MAX_N: usize = 4;

fn passed(text: String) -> Result<Outcome, CliError> {
    Ok(Outcome { text, passed: true })
}

fn check_codim(n: usize, codim: usize) -> Result<(), CliError> {
    let d = dimension(n);
    if codim > d {
        return Err(CliError::Usage(format!("--codim {codim} exceeds the dimension {d} for n = {n}")));
    }
    Ok(())
}

fn hooks(a: &HookSumVector) -> String {
    a.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct FacesListing<'a> {
    n: usize,
    a: &'a HookSumVector,
    codim: usize,
    dim: usize,
    count: usize,
    faces: Vec<FaceSupport>,
}

pub fn faces(size: &Size, codim: usize, format: Format) -> Result<Outcome, CliError> {
    check_codim(size.n, codim)?;
    let faces = enumerate_faces(size.n, codim).map_err(anyhow::Error::from)?;
    let dim = dimension(size.n) - codim;
    let text = match format {
        Format::Json => json(&FacesListing {
            n: size.n,
            a: &size.a,
            codim,
            dim,
            count: faces.len(),
            faces,
        })?,
        Format::Csv => csv(
            &["support", "codim", "dim"],
            faces.iter().map(|f| vec![f.to_string(), codim.to_string(), dim.to_string()]),
        )?,
        Format::Text => {
            let mut s = format!("n = {}, codim {codim} (dim {dim}): {} faces\n", size.n, faces.len());
            for f in &faces {
                writeln!(s, "  {f}").unwrap();
            }
            s
        }
    };
    passed(text)
}

#[derive(Serialize)]
struct AlphaRow {
    support: FaceSupport,
    case: String,
    #[serde(with = "pq")]
    alpha: Rational,
    method: AlphaMethod,
}

#[derive(Serialize)]
struct AlphaListing {
    n: usize,
    codim: usize,
    count: usize,
    #[serde(with = "pq")]
    min: Rational,
    faces: Vec<AlphaRow>,
}

pub fn alpha(size: &Size, codim: usize, min_only: bool, format: Format) -> Result<Outcome, CliError> {
    if codim > 3 {
        return Err(CliError::Usage(format!("alpha is available for codimension 0 to 3, not {codim}")));
    }
    check_codim(size.n, codim)?;
    let n = size.n;
    let supports = enumerate_faces(n, codim).map_err(anyhow::Error::from)?;
    let mut rows = supports
        .into_iter()
        .map(|support| {
            let value = alpha_of_face(n, &support)?;
            let case = if codim >= 2 {
                classify_case(&support)?.label.to_string()
            } else {
                "-".to_string()
            };
            Ok(AlphaRow {
                support,
                case,
                alpha: value.value,
                method: value.method,
            })
        })
        .collect::<Result<Vec<_>, tesler_alpha::alpha::AlphaError>>()
        .map_err(anyhow::Error::from)?;
    let count = rows.len();
    let min = rows
        .iter()
        .map(|r| r.alpha.clone())
        .min()
        .context("no faces of this codimension")?;
    if min_only {
        rows.retain(|r| r.alpha == min);
    }
    let text = match format {
        Format::Json => json(&AlphaListing {
            n,
            codim,
            count,
            min,
            faces: rows,
        })?,
        Format::Csv => csv(
            &["support", "case", "alpha"],
            rows.iter().map(|r| vec![r.support.to_string(), r.case.clone(), to_pq(&r.alpha)]),
        )?,
        Format::Text => {
            let mut s = String::new();
            if min_only {
                writeln!(s, "{min}").unwrap();
            } else {
                writeln!(s, "n = {n}, codim {codim}: {count} faces, min alpha = {min}").unwrap();
            }
            for r in &rows {
                writeln!(s, "  {:<28} {:<10} {}", r.support.to_string(), r.case, r.alpha).unwrap();
            }
            s
        }
    };
    passed(text)
}

/// Expected versus actual data for the first failing face.
#[derive(Serialize)]
struct FaceDiff {
    support: FaceSupport,
    case: String,
    ordered: Vec<Position>,
    expected_ncone: Option<RatMatrix>,
    actual_ncone: RatMatrix,
    expected_fcone: Option<RatMatrix>,
    actual_fcone: RatMatrix,
    #[serde(with = "pq")]
    alpha: Rational,
    alpha_match: bool,
}

fn diff_for(n: usize, f: &FaceCheck) -> anyhow::Result<FaceDiff> {
    Ok(FaceDiff {
        support: f.support.clone(),
        case: f.tag.label.to_string(),
        ordered: f.tag.ordered.clone(),
        expected_ncone: ncone_template(f.tag.label).eval(n),
        actual_ncone: ncone_mdp(n, &f.tag.ordered)?.entries,
        expected_fcone: fcone_template(f.tag.label).eval(n),
        actual_fcone: fcone_mdp(n, &f.tag.ordered)?.entries,
        alpha: f.alpha.clone(),
        alpha_match: f.alpha_match,
    })
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    n: usize,
    passed: bool,
    codim2_faces: usize,
    codim3_faces: usize,
    cases: &'a [CaseSummary],
    inversion: InversionReport,
    unimodular: UnimodularityCertificate,
    oracle: Option<OracleReport>,
    first_failure: Option<FaceDiff>,
}

fn opt(m: &Option<RatMatrix>) -> String {
    m.as_ref().map_or_else(|| "unavailable".to_string(), |m| m.to_string())
}

fn verify_text(report: &VerifyReport, table: &TableReport) -> String {
    let mut s = format!("verify n = {}\n", report.n);
    for codim in [2, 3] {
        writeln!(s, "codim {codim}: {} faces", table.face_count(codim)).unwrap();
        for c in report.cases.iter().filter(|c| c.codim == codim) {
            let status = if c.count == 0 {
                "-"
            } else if c.mdp_match && c.alpha_match {
                "ok"
            } else {
                "MISMATCH"
            };
            let value = c
                .alpha_value
                .as_ref()
                .map_or_else(|| format!("(does not occur for n = {})", report.n), |v| format!("alpha {v}"));
            writeln!(s, "  {:<10} {:>5} faces  {:<8} {value}", c.label.to_string(), c.count, status).unwrap();
        }
    }
    writeln!(
        s,
        "C M = I: {}/{} faces",
        report.inversion.checked - report.inversion.failures.len(),
        report.inversion.checked
    )
    .unwrap();
    writeln!(
        s,
        "unimodular vertex cones: {}/{}",
        report.unimodular.unimodular, report.unimodular.vertices
    )
    .unwrap();
    if let Some(o) = &report.oracle {
        writeln!(s, "oracle: {} faces, {} runs, {} failures", o.faces, o.runs, o.failures.len()).unwrap();
    }
    if let Some(d) = &report.first_failure {
        writeln!(s, "first failing face: {} case {} order {:?}", d.support, d.case, d.ordered).unwrap();
        writeln!(s, "  normal cone   expected {} got {}", opt(&d.expected_ncone), d.actual_ncone).unwrap();
        writeln!(s, "  feasible cone expected {} got {}", opt(&d.expected_fcone), d.actual_fcone).unwrap();
        writeln!(s, "  alpha {} (closed form {})", d.alpha, if d.alpha_match { "agrees" } else { "differs" }).unwrap();
    }
    writeln!(s, "{}", if report.passed { "PASS" } else { "FAIL" }).unwrap();
    s
}

pub fn verify(size: &Size, oracle: bool, format: Format) -> Result<Outcome, CliError> {
    let n = size.n;
    if n < 3 {
        return Err(CliError::Usage(format!("verify needs n >= 3 (codim-2 faces), got n = {n}")));
    }
    let table = verify_tables(n).map_err(anyhow::Error::from)?;
    let inversion = check_inversion_identity(n, 3).map_err(anyhow::Error::from)?;
    let unimodular = certify_total_unimodularity(n).map_err(anyhow::Error::from)?;
    let oracle = if oracle && n <= ORACLE_MAX_N {
        Some(oracle_equivalence(n, 3, true).map_err(anyhow::Error::from)?)
    } else {
        if oracle {
            eprintln!("notice: the edge-direction oracle runs only for n <= {ORACLE_MAX_N}; skipped");
        }
        None
    };
    let first_failure = table.first_failure().map(|f| diff_for(n, f)).transpose()?;
    let ok = table.passed
        && inversion.failures.is_empty()
        && unimodular.holds()
        && oracle.as_ref().is_none_or(|o| o.passed());
    let report = VerifyReport {
        n,
        passed: ok,
        codim2_faces: table.face_count(2),
        codim3_faces: table.face_count(3),
        cases: &table.cases,
        inversion,
        unimodular,
        oracle,
        first_failure,
    };
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => csv(
            &["support", "codim", "case", "ncone_match", "fcone_match", "inverse_identity", "alpha_match", "alpha"],
            table.faces.iter().map(|f| {
                vec![
                    f.support.to_string(),
                    f.tag.codim.to_string(),
                    f.tag.label.to_string(),
                    f.ncone_match.to_string(),
                    f.fcone_match.to_string(),
                    f.inverse_identity.to_string(),
                    f.alpha_match.to_string(),
                    to_pq(&f.alpha),
                ]
            }),
        )?,
        Format::Text => verify_text(&report, &table),
    };
    Ok(Outcome { text, passed: ok })
}

#[derive(Serialize)]
struct EhrhartOutput<'a> {
    n: usize,
    a: &'a HookSumVector,
    degree: usize,
    polynomial: String,
    #[serde(with = "tesler_alpha::ratlinalg::rational::pq_vec")]
    coefficients: &'a [Rational],
    sample_counts: &'a [(u64, u128)],
    mcmullen: &'a [McMullenRow],
    passed: bool,
}

pub fn ehrhart(size: &Size, format: Format) -> Result<Outcome, CliError> {
    let n = size.n;
    if n > EHRHART_MAX_N {
        return Err(CliError::Usage(format!(
            "full Ehrhart polynomials are limited to n <= {EHRHART_MAX_N}, got n = {n}"
        )));
    }
    let report = mcmullen_check(n, &size.a).map_err(anyhow::Error::from)?;
    let poly = &report.polynomial;
    let display = poly.polynomial().to_string();
    let text = match format {
        Format::Json => json(&EhrhartOutput {
            n,
            a: &size.a,
            degree: poly.degree,
            polynomial: display,
            coefficients: &poly.coefficients,
            sample_counts: &poly.sample_counts,
            mcmullen: &report.rows,
            passed: report.passed,
        })?,
        Format::Csv => csv(
            &["i", "ehrhart", "mcmullen", "faces", "matches"],
            report.rows.iter().map(|r| {
                vec![
                    r.i.to_string(),
                    to_pq(&r.ehrhart),
                    to_pq(&r.mcmullen),
                    r.faces.to_string(),
                    r.matches.to_string(),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = format!("n = {n}, a = ({})\nE(t) = {display}\n", hooks(&size.a));
            for r in &report.rows {
                writeln!(
                    s,
                    "  e{} = {:<10} McMullen sum over {} faces = {:<10} {}",
                    r.i,
                    r.ehrhart.to_string(),
                    r.faces,
                    r.mcmullen.to_string(),
                    if r.matches { "PASS" } else { "FAIL" }
                )
                .unwrap();
            }
            writeln!(s, "McMullen {}", if report.passed { "PASS" } else { "FAIL" }).unwrap();
            s
        }
    };
    Ok(Outcome {
        text,
        passed: report.passed,
    })
}

fn entries(m: &UTMatrix) -> String {
    m.entries().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn vertices(size: &Size, format: Format) -> Result<Outcome, CliError> {
    let g = enumerate_vertices(size.n, &size.a).map_err(anyhow::Error::from)?;
    let text = match format {
        Format::Json => json(&g)?,
        Format::Csv => csv(
            &["vertex", "support", "entries"],
            g.vertices
                .iter()
                .zip(&g.supports)
                .enumerate()
                .map(|(i, (v, s))| vec![i.to_string(), s.to_string(), entries(v)]),
        )?,
        Format::Text => {
            let mut s = format!(
                "n = {}, a = ({}): {} vertices, {} edges\n",
                g.n,
                hooks(&g.a),
                g.vertices.len(),
                g.edges.len()
            );
            for (i, (v, sup)) in g.vertices.iter().zip(&g.supports).enumerate() {
                writeln!(s, "  v{i:<4} {:<40} [{}]", sup.to_string(), entries(v)).unwrap();
            }
            s
        }
    };
    passed(text)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TargetVertices {
    Graph(VertexGraph),
    List(Vec<UTMatrix>),
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct DeformationOutput<'a> {
    is_deformation: bool,
    #[serde(flatten)]
    report: &'a DeformationReport,
}

pub fn deformation_check(p: &Path, q: &Path, map: &Path, format: Format) -> Result<Outcome, CliError> {
    let source: VertexGraph = read_json(p)?;
    let target = match read_json::<TargetVertices>(q)? {
        TargetVertices::Graph(g) => g.vertices,
        TargetVertices::List(v) => v,
    };
    let phi: Vec<usize> = read_json(map)?;
    let report = verify_deformation(&source, &target, &phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let ok = report.is_deformation();
    let text = match format {
        Format::Json => json(&DeformationOutput {
            is_deformation: ok,
            report: &report,
        })?,
        Format::Csv => csv(
            &["v", "w", "scale"],
            report.edge_scales.iter().map(|e| {
                vec![
                    e.edge.0.to_string(),
                    e.edge.1.to_string(),
                    e.scale.as_ref().map_or_else(String::new, to_pq),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = format!(
                "{} edges checked, map {} surjective\n",
                report.edge_scales.len(),
                if report.surjective { "is" } else { "is not" }
            );
            if let Some((v, w)) = report.first_violation() {
                writeln!(s, "edge ({v},{w}) is not mapped to a non-negative multiple of itself").unwrap();
            }
            writeln!(s, "deformation: {}", if ok { "yes" } else { "no" }).unwrap();
            s
        }
    };
    Ok(Outcome { text, passed: ok })
}
