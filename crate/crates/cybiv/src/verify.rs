//! The `verify-paper` harness: replays the built-in catalog of reference
//! results as deterministic, idempotent cases.
//!
//! Statuses: `pass` (exact agreement), `fail` (a computation contradicts
//! an expectation — never expected), and `discrepancy-noted`, reserved for
//! the documented slips in the reference displays (sign conventions, the
//! relation-count claims, the one relation that does not contract to
//! zero, and the section-term counts). The exit code is 0 iff no case
//! fails; noted discrepancies do not fail the run.

use crate::analysis::{casimirs, degeneracy_locus, locus_well_defined, ComponentKind};
use crate::catalog;
use crate::exactpoly::{parse_u, scalar, Poly, Scalar, Var};
use crate::schouten::{
    apply_b_matrix, b_operator, b_operator_matrix, is_integrable, self_bracket,
    w1_bivector_from_module_coords,
};
use crate::sections::{
    contract_relation, express_in_generators, graded_section_basis, module_presentation,
    section_basis, BivectorField, Presentation,
};
use crate::symmetries::{
    certify, restrict_to_fiber, restrict_to_surface, surface_catalog, verify_generation,
    BasicMap, EmbeddingSlot, SurfaceEmbedding, ThreefoldMap, Witness,
};
use crate::threefold::{Chart, ThreefoldSpec};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::OnceLock;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Pass,
    Fail,
    DiscrepancyNoted,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub status: CaseStatus,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
    pub discrepancies: usize,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let tag = match c.status {
                CaseStatus::Pass => "PASS",
                CaseStatus::Fail => "FAIL",
                CaseStatus::DiscrepancyNoted => "NOTED",
            };
            out.push_str(&format!("[{tag:>5}] {}\n", c.id));
            for d in &c.details {
                out.push_str(&format!("        - {d}\n"));
            }
        }
        out.push_str(&format!(
            "{} cases: {} passed, {} failed, {} with noted discrepancies\n",
            self.cases.len(),
            self.passed,
            self.failed,
            self.discrepancies
        ));
        out
    }
}

/// Runs every case whose id contains `filter` (all cases when `None`).
pub fn run_verify(filter: Option<&str>) -> RunReport {
    let cases = case_list();
    let selected: Vec<_> = cases
        .into_iter()
        .filter(|(id, _)| filter.map(|f| id.contains(f)).unwrap_or(true))
        .collect();
    use rayon::prelude::*;
    let results: Vec<CaseResult> = selected
        .into_par_iter()
        .map(|(id, run)| {
            let mut case = Case::new(id);
            run(&mut case);
            case.finish()
        })
        .collect();
    let passed = results.iter().filter(|c| c.status == CaseStatus::Pass).count();
    let failed = results.iter().filter(|c| c.status == CaseStatus::Fail).count();
    let discrepancies = results
        .iter()
        .filter(|c| c.status == CaseStatus::DiscrepancyNoted)
        .count();
    RunReport {
        cases: results,
        passed,
        failed,
        discrepancies,
    }
}

/// Accumulates checks for one case.
struct Case {
    id: &'static str,
    failed: bool,
    discrepancy: bool,
    details: Vec<String>,
}

impl Case {
    fn new(id: &'static str) -> Self {
        Case {
            id,
            failed: false,
            discrepancy: false,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: &str) {
        if !ok {
            self.failed = true;
            self.details.push(format!("FAILED: {what}"));
        }
    }

    fn note_discrepancy(&mut self, what: String) {
        self.discrepancy = true;
        self.details.push(format!("noted: {what}"));
    }

    fn info(&mut self, what: String) {
        self.details.push(what);
    }

    fn finish(self) -> CaseResult {
        let status = if self.failed {
            CaseStatus::Fail
        } else if self.discrepancy {
            CaseStatus::DiscrepancyNoted
        } else {
            CaseStatus::Pass
        };
        CaseResult {
            id: self.id.to_string(),
            status,
            details: self.details,
        }
    }
}

/// Degree bound at which the presentation of each reference spec is
/// certified stable (one further grade is checked internally).
pub fn presentation_bound(spec: ThreefoldSpec) -> u64 {
    if spec == catalog::w3() {
        7
    } else {
        3
    }
}

/// Cached presentations: several cases share them.
pub fn cached_presentation(spec: ThreefoldSpec) -> &'static Presentation {
    static W1: OnceLock<Presentation> = OnceLock::new();
    static W2: OnceLock<Presentation> = OnceLock::new();
    static W3: OnceLock<Presentation> = OnceLock::new();
    let cell = if spec == catalog::w1() {
        &W1
    } else if spec == catalog::w2() {
        &W2
    } else if spec == catalog::w3() {
        &W3
    } else {
        panic!("no cached presentation for {spec}");
    };
    cell.get_or_init(|| {
        module_presentation(spec, presentation_bound(spec)).expect("stable presentation")
    })
}

fn gen(spec: ThreefoldSpec, label: &str) -> BivectorField {
    catalog::generator(spec, label).expect("catalog generator")
}

fn parse_triple(spec: ThreefoldSpec, t: [&str; 3]) -> BivectorField {
    BivectorField::new(
        spec,
        [
            parse_u(t[0]).unwrap(),
            parse_u(t[1]).unwrap(),
            parse_u(t[2]).unwrap(),
        ],
    )
}

type CaseFn = fn(&mut Case);

fn case_list() -> Vec<(&'static str, CaseFn)> {
    vec![
        ("cy-criterion", case_cy_criterion),
        ("canonical-transitions", case_canonical_transitions),
        ("lambda2-matrix-w1", case_lambda2_w1),
        ("lambda2-matrix-w2", case_lambda2_w2),
        ("lambda2-matrix-w3", case_lambda2_w3),
        ("global-ring-w1", case_global_ring_w1),
        ("global-ring-w2", case_global_ring_w2),
        ("global-ring-w3", case_global_ring_w3),
        ("section-terms-w1", case_section_terms_w1),
        ("section-terms-w2", case_section_terms_w2),
        ("section-terms-w3", case_section_terms_w3),
        ("module-containment-w1", case_module_containment_w1),
        ("module-containment-w2", case_module_containment_w2),
        ("module-containment-w3", case_module_containment_w3),
        ("presentation-w1", case_presentation_w1),
        ("presentation-w2", case_presentation_w2),
        ("presentation-w3", case_presentation_w3),
        ("integrability-generators", case_integrability),
        ("nonintegrable-example", case_nonintegrable),
        ("b-operator-oracle", case_b_oracle),
        ("b-operator-matrix", case_b_matrix),
        ("submodule-closure", case_submodule_closure),
        ("degeneracy-w1", case_degeneracy_w1),
        ("degeneracy-w2", case_degeneracy_w2),
        ("degeneracy-w3-alphas", case_degeneracy_w3_alphas),
        ("degeneracy-w3-betas", case_degeneracy_w3_betas),
        ("degeneracy-w3-gammas", case_degeneracy_w3_gammas),
        ("casimirs-w1", case_casimirs_w1),
        ("casimirs-w2", case_casimirs_w2),
        ("casimirs-w3-classes", case_casimirs_w3),
        ("foliations", case_foliations),
        ("symmetry-w1-diagram", case_symmetry_w1),
        ("symmetry-w2-chart-swap", case_symmetry_w2),
        ("symmetry-w3-pairs", case_symmetry_w3),
        ("surface-catalogs", case_surface_catalogs),
        ("embeddings-w1", case_embeddings_w1),
        ("embeddings-w2", case_embeddings_w2),
        ("embeddings-w3", case_embeddings_w3),
        ("bracket-covariance", case_bracket_covariance),
        ("express-examples", case_express_examples),
    ]
}

fn case_cy_criterion(c: &mut Case) {
    for k in [1i64, 2, 3] {
        c.check(
            ThreefoldSpec::w(k).is_calabi_yau(),
            &format!("W_{k} should be Calabi-Yau"),
        );
    }
    c.check(!ThreefoldSpec::new(1, 2).is_calabi_yau(), "W(1,2) is not CY");
    c.check(!ThreefoldSpec::new(0, 0).is_calabi_yau(), "W(0,0) is not CY");
}

fn case_canonical_transitions(c: &mut Case) {
    let expected: [(ThreefoldSpec, [&str; 3]); 3] = [
        (catalog::w1(), ["z^-1", "z*u1", "z*u2"]),
        (catalog::w2(), ["z^-1", "z^2*u1", "u2"]),
        (catalog::w3(), ["z^-1", "z^3*u1", "z^-1*u2"]),
    ];
    for (spec, rules) in expected {
        let got = spec.coordinate_transition(crate::threefold::Direction::UToV);
        for (g, e) in got.iter().zip(rules) {
            c.check(
                g == &parse_u(e).unwrap(),
                &format!("{spec} transition entry {e}"),
            );
        }
    }
}

fn check_matrix(c: &mut Case, spec: ThreefoldSpec, expected: [[&str; 3]; 3]) -> bool {
    let m = spec.lambda2_transition();
    let mut all = true;
    for i in 0..3 {
        for j in 0..3 {
            let want = parse_u(expected[i][j]).unwrap();
            if m.entries[i][j] != want {
                all = false;
                c.info(format!(
                    "entry ({i},{j}): computed {} vs displayed {}",
                    m.entries[i][j], expected[i][j]
                ));
            }
        }
    }
    all
}

fn case_lambda2_w1(c: &mut Case) {
    // The displayed W1 matrix carries +z^-1 in rows 2 and 3 where the
    // exterior power of the Jacobian gives -z^-1. Kernels and loci are
    // invariant under scaling rows by -1.
    let printed = catalog::printed_w1_matrix();
    let matches = check_matrix(c, catalog::w1(), printed);
    if !matches {
        c.note_discrepancy(
            "displayed W1 matrix rows 2-3 print +z^-1; the exterior power of the Jacobian \
             gives -z^-1 (the W2/W3 displays and the W2 chart-swap computation use the \
             derived sign)"
                .to_string(),
        );
    } else {
        c.check(false, "expected the documented sign discrepancy in rows 2-3");
    }
    // The derived matrix itself: fixed closed form.
    let m = catalog::w1().lambda2_transition();
    c.check(
        m.entries[1][1] == parse_u("-z^-1").unwrap() && m.entries[2][2] == parse_u("-z^-1").unwrap(),
        "derived W1 matrix has -z^-1 in rows 2-3",
    );
}

fn case_lambda2_w2(c: &mut Case) {
    let ok = check_matrix(
        c,
        catalog::w2(),
        [["z^2", "-2*z*u1", "0"], ["0", "-z^-2", "0"], ["0", "0", "-1"]],
    );
    c.check(ok, "W2 matrix equals the displayed one");
}

fn case_lambda2_w3(c: &mut Case) {
    let ok = check_matrix(
        c,
        catalog::w3(),
        [
            ["z^2", "-3*z*u1", "z*u2"],
            ["0", "-z^-3", "0"],
            ["0", "0", "-z"],
        ],
    );
    c.check(ok, "W3 matrix equals the displayed one");
}

fn check_ring_generators(c: &mut Case, spec: ThreefoldSpec, degree: u64, expected: &[&str]) {
    let got: Vec<String> = spec
        .global_ring_generators(degree)
        .iter()
        .map(|m| Poly::from_monomial(*m, Scalar::one()).to_string())
        .collect();
    let mut want: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
    want.sort_by_key(|s| parse_u(s).unwrap().leading_monomial());
    c.check(
        got == want,
        &format!("{spec} ring generators: computed {:?}, displayed {:?}", got, want),
    );
}

fn case_global_ring_w1(c: &mut Case) {
    check_ring_generators(c, catalog::w1(), 1, &["1", "u1", "z*u1", "u2", "z*u2"]);
}

fn case_global_ring_w2(c: &mut Case) {
    check_ring_generators(c, catalog::w2(), 1, &["1", "u1", "z*u1", "z^2*u1", "u2"]);
}

fn case_global_ring_w3(c: &mut Case) {
    check_ring_generators(
        c,
        catalog::w3(),
        2,
        &[
            "1", "u1", "z*u1", "z^2*u1", "z^3*u1", "u1*u2", "z*u1*u2", "z^2*u1*u2",
        ],
    );
}

fn case_section_terms(c: &mut Case, spec: ThreefoldSpec) {
    let displayed = catalog::displayed_sections(spec).unwrap();
    let basis = section_basis(spec, displayed.neighborhood as i64).unwrap();
    let span = {
        let mut s = crate::linalg::SpanSpace::new();
        for v in &basis {
            s.insert(crate::sections::coordinatize(&v.u_coeffs));
        }
        s
    };
    let mut non_global = Vec::new();
    for term in &displayed.terms {
        let f = parse_triple(spec, term.coeffs);
        let global = f.is_global();
        if term.global {
            c.check(global, &format!("displayed term {:?} is a global section", term.coeffs));
            // Terms within the truncation lie in the computed span; the
            // few with one higher-degree first component are homogeneous
            // of grade ≤ neighborhood and lie in the graded space.
            let within = f
                .u_coeffs
                .iter()
                .all(|p| p.fiber_degree() <= displayed.neighborhood);
            if within {
                c.check(
                    span.contains(&crate::sections::coordinatize(&f.u_coeffs)),
                    &format!("displayed term {:?} lies in the truncated section space", term.coeffs),
                );
            } else {
                let g = f.grade();
                c.check(
                    g.is_some() && g.unwrap() <= displayed.neighborhood,
                    &format!("lifted term {:?} is homogeneous of grade ≤ n", term.coeffs),
                );
                let gspan = {
                    let mut s = crate::linalg::SpanSpace::new();
                    for v in graded_section_basis(spec, g.unwrap()) {
                        s.insert(crate::sections::coordinatize(&v.u_coeffs));
                    }
                    s
                };
                c.check(
                    gspan.contains(&crate::sections::coordinatize(&f.u_coeffs)),
                    &format!("lifted term {:?} lies in its graded section space", term.coeffs),
                );
            }
        } else {
            c.check(
                !global,
                &format!("term {:?} was expected to fail the transition", term.coeffs),
            );
            non_global.push(format!("({}, {}, {})", term.coeffs[0], term.coeffs[1], term.coeffs[2]));
        }
    }
    let honest = basis.len();
    if honest != displayed.claimed_count || displayed.terms.len() != displayed.claimed_count {
        c.note_discrepancy(format!(
            "claimed count {} vs {} displayed expressions vs honest truncated dimension {} \
             (the display is a module-spanning term list, not a basis of the truncated space)",
            displayed.claimed_count,
            displayed.terms.len(),
            honest
        ));
    }
    for t in non_global {
        c.note_discrepancy(format!(
            "displayed term {t} does not transform polynomially; the corrected combination \
             appears elsewhere in the same display"
        ));
    }
}

fn case_section_terms_w1(c: &mut Case) {
    case_section_terms(c, catalog::w1());
}
fn case_section_terms_w2(c: &mut Case) {
    case_section_terms(c, catalog::w2());
}
fn case_section_terms_w3(c: &mut Case) {
    case_section_terms(c, catalog::w3());
}

/// Every truncated-section basis vector must be an exact global-function
/// combination of the presentation generators; for W1/W2 the reference
/// generators alone suffice, on W3 the computed extra generators are
/// genuinely needed.
fn case_module_containment(c: &mut Case, spec: ThreefoldSpec, neighborhood: i64) {
    let pres = cached_presentation(spec);
    for v in section_basis(spec, neighborhood).unwrap() {
        match express_in_generators(&v, pres) {
            Ok(coeffs) => {
                let back = contract_relation(&coeffs, &pres.generators);
                c.check(
                    back.u_coeffs == v.u_coeffs,
                    &format!("re-expansion reproduces {:?}", v),
                );
                for p in &coeffs {
                    c.check(
                        spec.is_global_function(p),
                        &format!("coefficient {p} is a global function"),
                    );
                }
            }
            Err(e) => c.check(false, &format!("{:?} expressible in generators ({e})", v)),
        }
    }
}

fn case_module_containment_w1(c: &mut Case) {
    case_module_containment(c, catalog::w1(), 2);
}
fn case_module_containment_w2(c: &mut Case) {
    case_module_containment(c, catalog::w2(), 1);
}
fn case_module_containment_w3(c: &mut Case) {
    case_module_containment(c, catalog::w3(), 2);
}

fn case_presentation_w1(c: &mut Case) {
    let pres = cached_presentation(catalog::w1());
    let labels: Vec<&str> = pres.generators.iter().map(|g| g.label.as_str()).collect();
    c.check(labels == ["e1", "e2", "e3", "e4"], "four generators e1..e4");
    c.check(pres.relations.len() == 1, "exactly one relation");
    let rel = &pres.relations[0];
    let expected = [
        parse_u("z*u2").unwrap(),
        parse_u("-z*u1").unwrap(),
        parse_u("-u2").unwrap(),
        parse_u("u1").unwrap(),
    ];
    c.check(rel.coeffs == expected, "relation is z*u2*e1 - z*u1*e2 - u2*e3 + u1*e4");
    c.check(
        contract_relation(&rel.coeffs, &pres.generators).is_zero(),
        "relation contracts to zero",
    );
}

fn case_presentation_w2(c: &mut Case) {
    let pres = cached_presentation(catalog::w2());
    let labels: Vec<&str> = pres.generators.iter().map(|g| g.label.as_str()).collect();
    c.check(labels == ["e1", "e2", "e3", "e4", "e5"], "five generators e1..e5");
    for rel in &pres.relations {
        c.check(
            contract_relation(&rel.coeffs, &pres.generators).is_zero(),
            &format!("relation {} contracts to zero", rel.label),
        );
    }
    let has = |label: &str| pres.relations.iter().any(|r| r.label == label);
    c.check(has("r1") && has("r2"), "both displayed relation patterns adopted");
    // The statement prints u2·e5 − z·u2·e3 − 2z·u2·e2 and the proof
    // u2·e5 − z·u3·e4 − 2z·u2·e2; z*u2 is not a global function on W2
    // (and u3 does not exist), so neither is a module relation as printed.
    let zu2 = parse_u("z*u2").unwrap();
    c.check(
        !catalog::w2().is_global_function(&zu2),
        "z*u2 is not global on W2",
    );
    c.note_discrepancy(
        "second displayed relation multiplies by u2, giving the non-global coefficient z*u2 \
         (the proof variant also references a non-existent u3); the computed relation \
         u1*e5 - z*u1*e3 - 2*z*u1*e2 matches the statement's (e5, e3, e2) pattern under \
         the u1-multiplier"
            .to_string(),
    );
    c.note_discrepancy(format!(
        "displayed relation count {} vs computed minimal count {} (the z-shifted copies \
         z*u1*e3 - z^2*u1*e1 and z*u1*e5 - z^2*u1*e3 - 2*z^2*u1*e2 are not global-function \
         multiples of the displayed ones)",
        catalog::claimed_counts().w2_relations,
        pres.relations.len()
    ));
}

fn case_presentation_w3(c: &mut Case) {
    let spec = catalog::w3();
    let pres = cached_presentation(spec);
    let labels: Vec<&str> = pres.generators.iter().map(|g| g.label.as_str()).collect();
    for l in [
        "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9", "e10", "e11", "e12", "e13",
    ] {
        c.check(labels.contains(&l), &format!("{l} among computed generators"));
    }
    for rel in &pres.relations {
        c.check(
            contract_relation(&rel.coeffs, &pres.generators).is_zero(),
            &format!("relation {} contracts to zero", rel.label),
        );
    }
    // Eleven displayed relations hold as printed (adopted as r1..r11); the
    // twelfth does not contract to zero as printed.
    for i in 1..=12 {
        let label = format!("r{i}");
        c.check(
            pres.relations.iter().any(|r| r.label == label),
            &format!("displayed relation {label} adopted (r12 in corrected form)"),
        );
    }
    let printed = catalog::printed_w3_relation_12();
    let mut coeffs = vec![Poly::zero(); pres.generators.len()];
    for (l, p) in &printed {
        let idx = pres.generators.iter().position(|g| g.label == *l).unwrap();
        coeffs[idx] = parse_u(p).unwrap();
    }
    let contraction = contract_relation(&coeffs, &pres.generators);
    c.check(
        !contraction.is_zero(),
        "printed twelfth relation should not contract to zero",
    );
    c.note_discrepancy(format!(
        "displayed relation u1*e12 - z*u1*e11 - 3*z*u1*e1 contracts to {} ≠ 0; the \
         e1-coefficient must be -3*z*u1*u2 (adopted as r12)",
        contraction.render(Chart::U)
    ));

    let extra: Vec<&str> = labels
        .iter()
        .filter(|l| l.starts_with('g'))
        .copied()
        .collect();
    c.check(!extra.is_empty(), "extra generators beyond e1..e13 were found");
    // Non-membership certificate: z*u1*b0 is a grade-0 global section, and
    // the grade-0 span of the thirteen displayed generators misses it.
    let reference = catalog::reference_generators(spec).unwrap();
    let target = parse_triple(spec, ["z*u1", "0", "0"]);
    c.check(target.is_global(), "z*u1*b0 is a global section");
    let grade0: Vec<&BivectorField> = reference
        .iter()
        .filter(|g| g.grade() == Some(0))
        .collect();
    let cols: Vec<BTreeMap<_, _>> = grade0
        .iter()
        .map(|g| crate::sections::coordinatize(&g.u_coeffs))
        .collect();
    let sol = crate::linalg::solve(&cols, &crate::sections::coordinatize(&target.u_coeffs));
    c.check(
        sol.is_none(),
        "z*u1*b0 is not a constant combination of the displayed grade-0 generators",
    );
    c.note_discrepancy(format!(
        "the displayed 13 generators do not generate the module: {} extra minimal \
         generators are required ({}), e.g. (z*u1, 0, 0) = s1-transport of e1",
        extra.len(),
        extra.join(", ")
    ));
    c.note_discrepancy(format!(
        "relation count: {} displayed, {} claimed in the accompanying remark, {} computed \
         minimal relations (grades 1-6; the u2-saturated multiples are not global-function \
         combinations of the displayed ones)",
        catalog::claimed_counts().w3_relations_displayed,
        catalog::claimed_counts().w3_relations_remark,
        pres.relations.len()
    ));
}

fn case_integrability(c: &mut Case) {
    let mut count = 0;
    for spec in [catalog::w1(), catalog::w2(), catalog::w3()] {
        for g in &cached_presentation(spec).generators {
            c.check(
                is_integrable(&g.field),
                &format!("{} on {spec} integrable", g.label),
            );
            count += 1;
        }
    }
    c.info(format!("{count} generator structures checked"));
}

fn case_nonintegrable(c: &mut Case) {
    let spec = catalog::w1();
    let q = gen(spec, "e1")
        .mul_poly(&parse_u("z*u2").unwrap())
        .add(&gen(spec, "e3"));
    let sb = self_bracket(&q);
    c.check(
        sb.coeff == parse_u("z*u1").unwrap(),
        &format!("obstruction of z*u2*e1 + e3 is z*u1, got {}", sb.coeff),
    );
    c.check(!is_integrable(&q), "z*u2*e1 + e3 is not integrable");
}

fn random_global_poly(
    rng: &mut ChaCha8Rng,
    spec: ThreefoldSpec,
    max_fiber_degree: u64,
    max_terms: usize,
) -> Poly {
    let monos = spec.global_function_monomials(max_fiber_degree);
    let n = rng.gen_range(0..=max_terms);
    let mut p = Poly::zero();
    for _ in 0..n {
        let m = monos[rng.gen_range(0..monos.len())];
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            p.add_term(m, scalar(c));
        }
    }
    p
}

fn case_b_oracle(c: &mut Case) {
    let spec = catalog::w1();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut zero_count = 0;
    for _ in 0..200 {
        let p: [Poly; 4] = std::array::from_fn(|_| random_global_poly(&mut rng, spec, 3, 3));
        let b = b_operator(spec, &p).unwrap();
        let q = w1_bivector_from_module_coords(spec, &p);
        let sb = self_bracket(&q);
        c.check(
            b == sb.coeff,
            &format!("operator and bracket agree identically on {:?}", p),
        );
        if b.is_zero() {
            zero_count += 1;
        }
        c.check(
            b.is_zero() == is_integrable(&q),
            "vanishing of the operator matches integrability",
        );
    }
    c.info(format!(
        "200 random module-coordinate tuples, {zero_count} integrable among them"
    ));
}

fn case_b_matrix(c: &mut Case) {
    let spec = catalog::w1();
    let q = b_operator_matrix();
    // Matrix form equals the grouped form on random global tuples.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..50 {
        let p: [Poly; 4] = std::array::from_fn(|_| random_global_poly(&mut rng, spec, 2, 3));
        c.check(
            apply_b_matrix(&q, &p, &p) == b_operator(spec, &p).unwrap(),
            "matrix form agrees with the grouped form",
        );
    }
    // Antisymmetry of the displayed operator matrix: entry (3,2) is the
    // negative of entry (2,3); the printed layout is consistent.
    for i in 0..4 {
        for j in 0..4 {
            let neg: Vec<(Poly, Var)> = q[j][i].iter().map(|(p, v)| (p.neg(), *v)).collect();
            c.check(q[i][j] == neg, &format!("Q[{i}][{j}] = -Q[{j}][{i}]"));
        }
    }
    c.info("derived operator matrix matches the displayed one, including entry (3,2)".into());
}

fn case_submodule_closure(c: &mut Case) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let specs = [catalog::w1(), catalog::w2(), catalog::w3()];
    let mut done = 0;
    while done < 100 {
        let spec = specs[rng.gen_range(0..3)];
        let gens = catalog::reference_generators(spec).unwrap();
        // Random constant combination of the generators: integrable.
        let mut q = BivectorField::zero(spec);
        for g in &gens {
            let coeff = rng.gen_range(-2i64..=2);
            if coeff != 0 {
                q = q.add(&g.scale(&scalar(coeff)));
            }
        }
        if !is_integrable(&q) || q.is_zero() {
            continue;
        }
        let f = random_global_poly(&mut rng, spec, 2, 3);
        let fq = q.mul_poly(&f);
        c.check(
            is_integrable(&fq),
            &format!("global multiple stays integrable on {spec} (f = {f})"),
        );
        done += 1;
    }
    c.info("100 random (global function, Poisson structure) products verified".into());
}

fn check_locus(c: &mut Case, spec: ThreefoldSpec, expected: &catalog::ExpectedLocus) {
    let locus = degeneracy_locus(&gen(spec, expected.gen)).unwrap();
    c.check(
        locus.u_piece_names() == expected.u_pieces,
        &format!(
            "{} U pieces: computed {:?}, expected {:?}",
            expected.gen,
            locus.u_piece_names(),
            expected.u_pieces
        ),
    );
    c.check(
        locus.v_piece_names() == expected.v_pieces,
        &format!(
            "{} V pieces: computed {:?}, expected {:?}",
            expected.gen,
            locus.v_piece_names(),
            expected.v_pieces
        ),
    );
    c.check(
        locus_well_defined(&locus),
        &format!("{} locus agrees on the chart overlap", expected.gen),
    );
}

fn case_degeneracy_w1(c: &mut Case) {
    let spec = catalog::w1();
    for expected in catalog::expected_loci(spec).unwrap() {
        check_locus(c, spec, expected);
    }
    let locus = degeneracy_locus(&gen(spec, "e2")).unwrap();
    c.check(
        locus.components.len() == 1 && locus.components[0].kind == ComponentKind::Curve,
        "degeneracy locus of e2 is a single line",
    );
}

fn case_degeneracy_w2(c: &mut Case) {
    let spec = catalog::w2();
    for expected in catalog::expected_loci(spec).unwrap() {
        check_locus(c, spec, expected);
    }
    // Prose types: C^2 for e1, P^1 x C for e2, C^2 ∪ C for e3, empty for e4.
    let kinds = |l: &str| degeneracy_locus(&gen(spec, l)).unwrap().kind_multiset();
    c.check(kinds("e1") == vec![ComponentKind::FiberPlane], "e1 locus is a plane");
    c.check(
        kinds("e2") == vec![ComponentKind::LineBundleSurface { twist: 0 }],
        "e2 locus is P^1 x C",
    );
    c.check(
        kinds("e3") == vec![ComponentKind::FiberPlane, ComponentKind::Curve],
        "e3 locus is a plane plus a line",
    );
    c.check(
        degeneracy_locus(&gen(spec, "e4")).unwrap().is_empty(),
        "e4 locus is empty",
    );
}

fn case_degeneracy_w3_alphas(c: &mut Case) {
    let spec = catalog::w3();
    for expected in catalog::expected_loci(spec).unwrap() {
        if ["e1", "e2"].contains(&expected.gen) {
            check_locus(c, spec, expected);
        }
    }
    let count = |l: &str| {
        let locus = degeneracy_locus(&gen(spec, l)).unwrap();
        locus.u_pieces.len() + locus.v_pieces.len()
    };
    c.check(count("e1") == 3, "D(e1) displays three chart pieces");
    c.check(count("e2") == 4, "D(e2) displays four chart pieces");
}

fn case_degeneracy_w3_betas(c: &mut Case) {
    let spec = catalog::w3();
    for expected in catalog::expected_loci(spec).unwrap() {
        if ["e3", "e4", "e5", "e10", "e11"].contains(&expected.gen) {
            check_locus(c, spec, expected);
        }
    }
    let locus = degeneracy_locus(&gen(spec, "e11")).unwrap();
    c.check(
        locus.u_pieces.len() + locus.v_pieces.len() == 4,
        "D(e11) displays four chart pieces (three glued components)",
    );
    c.check(locus.components.len() == 3, "D(e11) has three glued components");
    // Pairwise distinction of the betas via their loci.
    let labels = ["e3", "e4", "e5", "e10", "e11"];
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            let v = crate::analysis::distinguish_by_locus(&gen(spec, a), &gen(spec, b)).unwrap();
            c.check(
                matches!(v, crate::analysis::LocusVerdict::Distinguished { .. }),
                &format!("{a} and {b} distinguished by locus"),
            );
        }
    }
}

fn case_degeneracy_w3_gammas(c: &mut Case) {
    let spec = catalog::w3();
    for expected in catalog::expected_loci(spec).unwrap() {
        if ["e7", "e8", "e13"].contains(&expected.gen) {
            check_locus(c, spec, expected);
        }
    }
    let labels = ["e7", "e8", "e13"];
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            let v = crate::analysis::distinguish_by_locus(&gen(spec, a), &gen(spec, b)).unwrap();
            c.check(
                matches!(v, crate::analysis::LocusVerdict::Distinguished { .. }),
                &format!("{a} and {b} distinguished by locus"),
            );
        }
    }
}

fn check_casimir(c: &mut Case, spec: ThreefoldSpec, label: &str, var: &str) {
    let cas = casimirs(&gen(spec, label), 4).unwrap();
    let got = cas
        .independent_variables
        .clone()
        .map(|s| s.into_iter().collect::<Vec<_>>().join(","))
        .unwrap_or_else(|| "-".into());
    c.check(
        got == var,
        &format!("Casimirs of {label} on {spec}: f = f({got}), expected f({var})"),
    );
    c.check(cas.stable, &format!("{label} Casimir kernel stable between bounds 3 and 4"));
}

fn case_casimirs_w1(c: &mut Case) {
    check_casimir(c, catalog::w1(), "e2", "u2");
}

fn case_casimirs_w2(c: &mut Case) {
    for (label, var) in catalog::expected_casimirs(catalog::w2()).unwrap() {
        check_casimir(c, catalog::w2(), label, var);
    }
    // Only constants among global functions realize f(z) on W2.
    let cas = casimirs(&gen(catalog::w2(), "e2"), 4).unwrap();
    c.check(
        cas.global_basis == vec![Poly::one()],
        "global Casimirs of e2 are the constants",
    );
    c.info("e2: local description f = f(z), truncated global basis {1}".into());
}

fn case_casimirs_w3(c: &mut Case) {
    let spec = catalog::w3();
    for (label, var) in catalog::expected_casimirs(spec).unwrap() {
        check_casimir(c, spec, label, var);
    }
    let structures: Vec<BivectorField> = catalog::w3_casimir_partition()
        .iter()
        .flat_map(|g| g.iter().map(|l| gen(spec, l)))
        .collect();
    let mut groups = crate::analysis::classify_by_casimir(&structures, 3).unwrap();
    for g in &mut groups {
        g.sort();
    }
    groups.sort();
    let mut expected: Vec<Vec<String>> = catalog::w3_casimir_partition()
        .iter()
        .map(|g| {
            let mut v: Vec<String> = g.iter().map(|s| s.to_string()).collect();
            v.sort();
            v
        })
        .collect();
    expected.sort();
    c.check(groups == expected, "three Casimir classes as displayed");
    c.info(
        "e1, e2 have local description f = f(z); among global functions only constants \
         realize it"
            .into(),
    );
}

fn case_foliations(c: &mut Case) {
    let r = crate::analysis::foliation_report(&gen(catalog::w1(), "e2"), 3).unwrap();
    c.check(
        r.zero_dim_leaves.contains("xi v2"),
        "W1 e2: point leaves on the line xi = v2 = 0",
    );
    c.check(
        r.generic_leaves.contains("u2"),
        "W1 e2: generic leaves are levels of u2",
    );
    let r = crate::analysis::foliation_report(&gen(catalog::w2(), "e4"), 3).unwrap();
    c.check(r.locus.is_empty(), "W2 e4 has no point leaves");
    c.check(
        r.generic_leaves.contains("u2"),
        "W2 e4: leaves are levels of u2",
    );
    let r = crate::analysis::foliation_report(&gen(catalog::w3(), "e3"), 3).unwrap();
    c.check(
        r.locus.v_piece_names() == vec!["xi".to_string()],
        "W3 e3: point leaves over xi = 0",
    );
    c.check(
        r.generic_leaves.contains("u1"),
        "W3 e3: leaves are levels of u1",
    );
}

fn case_symmetry_w1(c: &mut Case) {
    let spec = catalog::w1();
    let s0 = ThreefoldMap::fiber_swap(spec).unwrap();
    let s1 = ThreefoldMap::chart_swap(spec);
    let minus_one = -Scalar::one();
    c.check(
        certify(&s0, &gen(spec, "e2"), &gen(spec, "e1")) == Some(minus_one.clone()),
        "e1 = s0-pullback of e2 up to sign",
    );
    c.check(
        certify(&s1, &gen(spec, "e2"), &gen(spec, "e4")) == Some(minus_one.clone()),
        "e4 = s1-pullback of e2 up to sign",
    );
    let comp = ThreefoldMap::compose(spec, vec![BasicMap::FiberSwap, BasicMap::ChartSwap]).unwrap();
    c.check(
        certify(&comp, &gen(spec, "e2"), &gen(spec, "e3")) == Some(Scalar::one()),
        "e3 = (s1 after s0)-pullback of e2",
    );
    // All four structures are pairwise connected by certificates.
    let gens = catalog::reference_generators(spec).unwrap();
    let certs = crate::symmetries::isomorphism_catalog(spec, &gens);
    c.check(certs.len() == 12, "every ordered pair certified");
    // Pullbacks are involutions on the generators.
    for g in &gens {
        let twice = s1.pullback(&s1.pullback(g).unwrap()).unwrap();
        c.check(twice.u_coeffs == g.u_coeffs, "s1 is an involution");
    }
}

fn case_symmetry_w2(c: &mut Case) {
    let spec = catalog::w2();
    let s1 = ThreefoldMap::chart_swap(spec);
    let image = s1.pullback(&gen(spec, "e1")).unwrap();
    c.check(
        image.u_coeffs == gen(spec, "e5").scale(&-Scalar::one()).u_coeffs,
        "chart swap sends e1 to -e5",
    );
    let v = gen(spec, "e1").v_coeffs().unwrap();
    let expected = [
        crate::exactpoly::parse_v("-2*xi*v1").unwrap(),
        crate::exactpoly::parse_v("-xi^2").unwrap(),
        Poly::zero(),
    ];
    c.check(v == expected, "V-data of e1 is (-2 xi v1, -xi^2, 0)");
    c.check(
        ThreefoldMap::fiber_swap(spec).is_err(),
        "fiber swap unavailable on W2",
    );
}

fn case_symmetry_w3(c: &mut Case) {
    let spec = catalog::w3();
    let s1 = ThreefoldMap::chart_swap(spec);
    for (a, b) in [("e3", "e6"), ("e7", "e9"), ("e10", "e12")] {
        c.check(
            certify(&s1, &gen(spec, a), &gen(spec, b)) == Some(-Scalar::one()),
            &format!("{a} and {b} exchanged by the chart swap"),
        );
    }
    // Integrability and loci transport along the swap.
    for l in ["e3", "e7", "e10"] {
        let img = s1.pullback(&gen(spec, l)).unwrap();
        c.check(is_integrable(&img), &format!("swap of {l} integrable"));
    }
    let locus_e3 = degeneracy_locus(&gen(spec, "e3")).unwrap();
    let locus_e6 = degeneracy_locus(&gen(spec, "e6")).unwrap();
    c.check(
        locus_e3.v_piece_names() == vec!["xi".to_string()]
            && locus_e6.u_piece_names() == vec!["z".to_string()],
        "the swap carries the locus of e3 to the locus of e6",
    );
}

fn case_surface_catalogs(c: &mut Case) {
    for (k, expected_len) in [(1i64, 2usize), (2, 1), (3, 3), (0, 3), (-1, 4)] {
        let cat = surface_catalog(k).unwrap();
        c.check(cat.len() == expected_len, &format!("Z_{k} has {expected_len} structures"));
        for s in &cat {
            c.check(
                s.transition_consistent(),
                &format!("Z_{k} structure {} satisfies the surface transition", s.label),
            );
            c.check(
                crate::symmetries::surface_self_bracket(s).is_zero(),
                "surface structures are trivially integrable",
            );
        }
        if catalog::surface_table_has_printed_sign_slip(k) {
            c.note_discrepancy(format!(
                "the displayed fourth structure on Z_{k} is printed as (z^3, 1); the \
                 transition validating the other three forces (z^3, -1)"
            ));
        }
    }
}

fn case_embeddings_w1(c: &mut Case) {
    let spec = catalog::w1();
    let emb1 = SurfaceEmbedding::new(spec, EmbeddingSlot::FirstSummand);
    let pi = surface_catalog(1).unwrap();
    let r = restrict_to_surface(&gen(spec, "e2"), emb1).unwrap();
    c.check(
        r.u_coeff == pi[0].u_coeff && r.v_coeff == pi[0].v_coeff,
        "e2 restricts to pi0 on the first-summand surface",
    );
    let emb2 = SurfaceEmbedding::new(spec, EmbeddingSlot::SecondSummand);
    let r = restrict_to_surface(&gen(spec, "e1"), emb2).unwrap();
    c.check(
        r.u_coeff == pi[0].u_coeff && r.v_coeff == pi[0].v_coeff,
        "e1 restricts to pi0 on the second-summand surface",
    );
    let r = restrict_to_surface(&gen(spec, "e3"), emb2).unwrap();
    c.check(
        r.u_coeff == pi[1].u_coeff && r.v_coeff == pi[1].v_coeff,
        "e3 restricts to pi1 on the second-summand surface",
    );
    let report = verify_generation(spec, &cached_presentation(spec).generators);
    c.check(report.all_reached(), "all four generators witnessed");
    c.info(
        "the four principal embeddings of (Z_1, pi0) reach every generator via the \
         s0/s1 transports; the proof's symbols γ1 and s·π0 are never defined and are \
         matched here by explicit structures (pi1 = z·pi0 and the fiber swap image)"
            .into(),
    );
}

fn case_embeddings_w2(c: &mut Case) {
    let spec = catalog::w2();
    let emb1 = SurfaceEmbedding::new(spec, EmbeddingSlot::FirstSummand);
    let z2 = surface_catalog(2).unwrap();
    let r = restrict_to_surface(&gen(spec, "e4"), emb1).unwrap();
    c.check(
        r.u_coeff == z2[0].u_coeff && r.v_coeff == z2[0].v_coeff,
        "e4 restricts to pi0 on Z_2",
    );
    let emb2 = SurfaceEmbedding::new(spec, EmbeddingSlot::SecondSummand);
    let z0 = surface_catalog(0).unwrap();
    let r = restrict_to_surface(&gen(spec, "e1"), emb2).unwrap();
    c.check(
        r.u_coeff == z0[0].u_coeff && r.v_coeff == z0[0].v_coeff,
        "e1 restricts to pi0 on Z_0",
    );
    let r = restrict_to_surface(&gen(spec, "e3"), emb2).unwrap();
    c.check(
        r.u_coeff == z0[1].u_coeff && r.v_coeff == z0[1].v_coeff,
        "e3 restricts to pi1 on Z_0",
    );
    // e2 is the constant extension of the fiber structure u·∂u∧∂v at the
    // fiber z = xi = 1.
    let emb0 = SurfaceEmbedding::new(spec, EmbeddingSlot::FiberPlane);
    let fiber = restrict_to_fiber(&gen(spec, "e2"), emb0);
    c.check(
        fiber == Poly::var(Var::U1),
        "e2 restricts to u·∂u∧∂v on the fiber plane",
    );
    let report = verify_generation(spec, &cached_presentation(spec).generators);
    c.check(report.all_reached(), "all five generators witnessed");
    for (label, w) in &report.items {
        if label == "e5" {
            c.check(
                matches!(w, Witness::Transport { of, .. } if of == "e1"),
                "e5 witnessed as the chart-swap transport of e1",
            );
        }
    }
}

fn case_embeddings_w3(c: &mut Case) {
    let spec = catalog::w3();
    let emb1 = SurfaceEmbedding::new(spec, EmbeddingSlot::FirstSummand);
    let z3 = surface_catalog(3).unwrap();
    for (label, idx) in [("e7", 0usize), ("e8", 1), ("e9", 2)] {
        let r = restrict_to_surface(&gen(spec, label), emb1).unwrap();
        c.check(
            r.u_coeff == z3[idx].u_coeff && r.v_coeff == z3[idx].v_coeff,
            &format!("{label} restricts to pi{idx} on Z_3"),
        );
    }
    let emb2 = SurfaceEmbedding::new(spec, EmbeddingSlot::SecondSummand);
    let zm1 = surface_catalog(-1).unwrap();
    for (label, idx) in [("e3", 0usize), ("e4", 1), ("e5", 2), ("e6", 3)] {
        let r = restrict_to_surface(&gen(spec, label), emb2).unwrap();
        c.check(
            r.u_coeff == zm1[idx].u_coeff && r.v_coeff == zm1[idx].v_coeff,
            &format!("{label} restricts to pi{idx} on Z_(-1)"),
        );
    }
    // e10, e11: scaled by the tautological multiplier g (u upstairs,
    // xi^-1 v downstairs; g alone has a pole at xi = 0, the products are
    // honest structures).
    let g_u = Poly::var(Var::U1);
    let g_v = Poly::from_monomial(crate::exactpoly::Monomial::new(-1, 1, 0), Scalar::one());
    for (label, idx) in [("e10", 0usize), ("e11", 1)] {
        let r = restrict_to_surface(&gen(spec, label), emb2).unwrap();
        let scaled = zm1[idx].scaled(&g_u, &g_v, "g-scaled");
        c.check(
            r.u_coeff == scaled.u_coeff && r.v_coeff == scaled.v_coeff,
            &format!("{label} restricts to g·pi{idx} on Z_(-1)"),
        );
    }
    c.info(
        "the multiplier g (u on U, xi^-1·v on V) is not itself holomorphic on Z_(-1); \
         the scaled products are"
            .into(),
    );
    // e1, e2: fiber-plane witnesses at z = 0.
    let emb0 = SurfaceEmbedding::new(spec, EmbeddingSlot::FiberPlane);
    c.check(
        restrict_to_fiber(&gen(spec, "e1"), emb0) == Poly::var(Var::U1),
        "e1 is (j0)-push of u",
    );
    c.check(
        restrict_to_fiber(&gen(spec, "e2"), emb0)
            == Poly::var(Var::U1).mul(&Poly::var(Var::U2)),
        "e2 is (j0)-push of u·v",
    );
    // Full coverage, including the u2-saturated extra generators.
    let pres = cached_presentation(spec);
    let report = verify_generation(spec, &pres.generators);
    c.check(report.all_reached(), "all computed generators witnessed");
    for (label, w) in &report.items {
        if label == "e13" {
            c.check(
                matches!(w, Witness::Ambient { .. }),
                "e13 = u2·e7 (ambient multiplier; u2 is not global, the product is)",
            );
        }
        if label == "e12" {
            c.check(
                matches!(w, Witness::Transport { .. }),
                "e12 reached by chart-swap transport",
            );
        }
    }
}

fn case_bracket_covariance(c: &mut Case) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for spec in [catalog::w1(), catalog::w2(), catalog::w3()] {
        let gens = catalog::reference_generators(spec).unwrap();
        for _ in 0..20 {
            let mut q = BivectorField::zero(spec);
            for g in &gens {
                let coeff = rng.gen_range(-2i64..=2);
                if coeff != 0 {
                    q = q.add(&g.mul_poly(&random_global_poly(&mut rng, spec, 1, 2).scale(&scalar(coeff))));
                }
            }
            if !q.is_global() {
                c.check(false, "random module element is global");
                continue;
            }
            let sb = self_bracket(&q);
            c.check(
                spec.is_global_function(&sb.coeff),
                &format!("self-bracket of a global bivector is global on {spec}"),
            );
            let v = q.v_coeffs().unwrap();
            let qv = BivectorField::new(spec, v);
            let sb_v = self_bracket(&qv);
            c.check(
                sb_v.coeff == sb.v_coeff(),
                "V-chart bracket equals the transported U-chart bracket",
            );
        }
    }
    c.info("60 random global bivectors checked in both charts".into());
}

fn case_express_examples(c: &mut Case) {
    let w1 = catalog::w1();
    let pres = cached_presentation(w1);
    let q = parse_triple(w1, ["u1^2", "0", "0"]);
    match express_in_generators(&q, pres) {
        Ok(coeffs) => {
            c.check(
                coeffs[0] == parse_u("-z*u1").unwrap()
                    && coeffs[2] == parse_u("u1").unwrap()
                    && coeffs[1].is_zero()
                    && coeffs[3].is_zero(),
                "u1^2·b0 = u1·e3 - z·u1·e1",
            );
        }
        Err(e) => c.check(false, &format!("u1^2·b0 expressible: {e}")),
    }
    let w2 = catalog::w2();
    let pres2 = cached_presentation(w2);
    let q = parse_triple(w2, ["0", "z^3*u1", "0"]);
    match express_in_generators(&q, pres2) {
        Ok(coeffs) => {
            let back = contract_relation(&coeffs, &pres2.generators);
            c.check(back.u_coeffs == q.u_coeffs, "re-expansion reproduces (0, z^3 u1, 0)");
        }
        Err(e) => c.check(false, &format!("(0, z^3*u1, 0) expressible: {e}")),
    }
    // Failure modes are told apart.
    let bad = parse_triple(w1, ["1", "0", "0"]);
    c.check(
        matches!(
            express_in_generators(&bad, pres),
            Err(crate::sections::ExpressFailure::NotGlobal(_))
        ),
        "non-global input rejected as such",
    );
    let deep = gen(w1, "e1").mul_poly(&parse_u("u1^4*u2").unwrap());
    c.check(
        matches!(
            express_in_generators(&deep, pres),
            Err(crate::sections::ExpressFailure::DegreeBoundExceeded { .. })
        ),
        "inputs beyond the presentation bound rejected as such",
    );
}
