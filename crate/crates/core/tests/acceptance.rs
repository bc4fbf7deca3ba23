//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! run with `--nocapture` to see them.

use std::time::Instant;

use num_traits::{One, Zero};
use tesler_alpha::alpha::{
    alpha_of_face, positivity_report, verify_tables, CaseLabel, Codim3Case, TableReport,
};
use tesler_alpha::cones::{certify_total_unimodularity, check_inversion_identity, oracle_equivalence};
use tesler_alpha::ehrhart::{count_points, mcmullen_check};
use tesler_alpha::ratlinalg::{int, rat, Rational};
use tesler_alpha::tesler::{
    dimension, enumerate_faces, enumerate_vertices, verify_deformation, FaceSupport,
    HookSumVector, UTMatrix,
};

struct Outcome {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn run(id: usize, name: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    let detail = format!("{detail} [{:.1}s]", start.elapsed().as_secs_f64());
    let status = if passed { "PASS" } else { "FAIL" };
    println!("criterion {id} {status}: {name}: {detail}");
    Outcome {
        id,
        name,
        passed,
        detail,
    }
}

fn codim_ok(report: &TableReport, codim: usize) -> bool {
    report
        .faces
        .iter()
        .filter(|f| f.tag.codim == codim)
        .all(|f| f.passed())
}

fn case_counts(report: &TableReport, codim: usize) -> String {
    report
        .cases
        .iter()
        .filter(|c| c.codim == codim)
        .map(|c| format!("{}={}", c.label, c.count))
        .collect::<Vec<_>>()
        .join(" ")
}

fn tables_criterion(reports: &[TableReport], codim: usize) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in reports {
        let good = codim_ok(r, codim);
        ok &= good;
        parts.push(format!("n={} faces={} [{}]", r.n, r.face_count(codim), case_counts(r, codim)));
    }
    if codim == 3 {
        // Cases needing n >= 4 must be absent at n = 3.
        let r3 = reports.iter().find(|r| r.n == 3).expect("n=3 report");
        for c in [
            Codim3Case::OneDiagTwoOnRow,
            Codim3Case::OneDiagRowAndColumn,
            Codim3Case::OneDiagTwoOnColumn,
            Codim3Case::ThreeDiagonals,
        ] {
            let s = r3.case(CaseLabel::Codim3(c)).expect("case summary");
            ok &= s.count == 0 && !s.available;
        }
    }
    (ok, parts.join("; "))
}

/// Triple loop over all 3x3 upper-triangular matrices with entries in 0..=3.
fn brute_force_e1_n3() -> u128 {
    let mut count = 0;
    for x11 in 0..=3i64 {
        for x12 in 0..=3 {
            for x13 in 0..=3 {
                for x22 in 0..=3 {
                    for x23 in 0..=3 {
                        for x33 in 0..=3 {
                            let h1 = x11 + x12 + x13;
                            let h2 = x22 + x23 - x12;
                            let h3 = x33 - x13 - x23;
                            if (h1, h2, h3) == (1, 1, 1) {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    count
}

fn mcmullen_criterion() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();

    let e1 = count_points(3, &HookSumVector::ones(3), 1).unwrap();
    let brute = brute_force_e1_n3();
    ok &= e1 == 7 && brute == 7;
    parts.push(format!("E(1)={e1} brute={brute}"));

    let vertex_sum: Rational = enumerate_faces(3, 3)
        .unwrap()
        .iter()
        .map(|v| alpha_of_face(3, v).unwrap().value)
        .sum();
    ok &= vertex_sum.is_one();
    parts.push(format!("n=3 vertex alpha sum={vertex_sum}"));

    for n in [3, 4] {
        let report = mcmullen_check(n, &HookSumVector::ones(n)).unwrap();
        let poly = &report.polynomial;
        ok &= report.passed && poly.coefficient(0).is_one();
        ok &= report.rows.len() == 4 && report.rows[0].i == dimension(n);
        if n == 3 {
            ok &= poly.eval(1) == int(7);
        }
        let rows: Vec<String> = report
            .rows
            .iter()
            .map(|r| format!("e{}={}{}", r.i, r.ehrhart, if r.matches { "" } else { "(MISMATCH)" }))
            .collect();
        parts.push(format!("n={n} {}", rows.join(" ")));
    }
    (ok, parts.join("; "))
}

fn positivity_criterion() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 3..=6usize {
        let r = positivity_report(n).unwrap();
        let ni = n as i64;
        let expected = rat(1, 4) - rat(ni, 12 * (ni - 1));
        ok &= r.codim2.min == expected && r.codim2.min > Rational::zero();
        ok &= r.codim3.min > Rational::zero();
        if n >= 4 {
            ok &= r.codim3.min == rat(1, 24);
        }
        parts.push(format!("n={n} min2={} min3={}", r.codim2.min, r.codim3.min));
    }
    (ok, parts.join("; "))
}

/// Every codim-k face has exactly k codim-(k-1) faces above it and every
/// edge has exactly two vertices.
fn incidence_consistent(n: usize) -> bool {
    let d = dimension(n);
    let by_codim: Vec<Vec<FaceSupport>> = (0..=d).map(|k| enumerate_faces(n, k).unwrap()).collect();
    for k in 1..=d {
        for f in &by_codim[k] {
            let above = by_codim[k - 1].iter().filter(|g| g.is_subset_of(f)).count();
            if above != k {
                return false;
            }
        }
    }
    by_codim[d - 1]
        .iter()
        .all(|e| by_codim[d].iter().filter(|v| e.is_subset_of(v)).count() == 2)
}

fn face_count_criterion() -> (bool, String) {
    let counts = |n: usize| -> Vec<usize> {
        (1..=dimension(n)).map(|k| enumerate_faces(n, k).unwrap().len()).collect()
    };
    let c3 = counts(3);
    let c4 = counts(4);
    let euler = c3[2] as i64 - c3[1] as i64 + c3[0] as i64;
    let ok = c3 == vec![5, 9, 6]
        && euler == 2
        && c4[0] == 9
        && c4[1] == 35
        && c4[2] == 76
        && c4[5] == 24
        && incidence_consistent(3)
        && incidence_consistent(4);
    (ok, format!("n=3 {c3:?} V-E+F={euler}; n=4 {c4:?}"))
}

fn deformation_criterion() -> (bool, String) {
    let g = enumerate_vertices(3, &HookSumVector::ones(3)).unwrap();
    let ident: Vec<usize> = (0..g.vertices.len()).collect();
    let identity = verify_deformation(&g, &g.vertices, &ident).unwrap();
    let doubled: Vec<UTMatrix> = g.vertices.iter().map(|v| v.scaled(&int(2))).collect();
    let dilation = verify_deformation(&g, &doubled, &ident).unwrap();
    let point = vec![g.vertices[0].clone()];
    let constant = verify_deformation(&g, &point, &vec![0; g.vertices.len()]).unwrap();
    let (v, w) = g.edges[0];
    let mut swapped = ident.clone();
    swapped.swap(v, w);
    let bad = verify_deformation(&g, &g.vertices, &swapped).unwrap();

    let scales_all = |r: &tesler_alpha::tesler::DeformationReport, s: Rational| {
        r.edge_scales.iter().all(|e| e.scale.as_ref() == Some(&s))
    };
    let ok = identity.is_deformation()
        && scales_all(&identity, int(1))
        && dilation.is_deformation()
        && scales_all(&dilation, int(2))
        && constant.is_deformation()
        && scales_all(&constant, int(0))
        && !bad.is_deformation();
    (
        ok,
        format!(
            "identity={} dilation={} constant={} violating={}",
            identity.is_deformation(),
            dilation.is_deformation(),
            constant.is_deformation(),
            bad.is_deformation()
        ),
    )
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let tables: Vec<TableReport> = (3..=6).map(|n| verify_tables(n).unwrap()).collect();
    println!("tables for n=3..6 built in {:.1}s", start.elapsed().as_secs_f64());

    let outcomes = vec![
        run(1, "codim-2 tables, n=3..6", || tables_criterion(&tables, 2)),
        run(2, "codim-3 tables, n=3..6", || tables_criterion(&tables, 3)),
        run(3, "C M = I for codim <= 3, n <= 6", || {
            let mut ok = true;
            let mut parts = Vec::new();
            for n in 2..=6 {
                let r = check_inversion_identity(n, 3).unwrap();
                ok &= r.failures.is_empty() && r.checked > 0;
                parts.push(format!("n={n}: {}", r.checked));
            }
            (ok, parts.join(" "))
        }),
        run(4, "edge-direction oracle, n=3,4, all base vertices", || {
            let mut ok = true;
            let mut parts = Vec::new();
            for n in [3, 4] {
                let r = oracle_equivalence(n, 3, true).unwrap();
                ok &= r.passed();
                parts.push(format!("n={n}: {} faces, {} runs, {} failures", r.faces, r.runs, r.failures.len()));
            }
            (ok, parts.join("; "))
        }),
        run(5, "vertex cones unimodular, n=2..5", || {
            let mut ok = true;
            let mut parts = Vec::new();
            for n in 2..=5 {
                let c = certify_total_unimodularity(n).unwrap();
                ok &= c.holds();
                parts.push(format!("n={n}: {}/{}", c.unimodular, c.vertices));
            }
            (ok, parts.join(" "))
        }),
        run(6, "McMullen cross-check, n=3,4", mcmullen_criterion),
        run(7, "alpha positivity, n=3..6", positivity_criterion),
        run(8, "face counts and incidences", face_count_criterion),
        run(9, "deformation verifier", deformation_criterion),
    ];

    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{} ({}): {}", o.id, o.name, o.detail))
        .collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}
