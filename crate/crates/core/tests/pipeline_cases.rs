mod common;

use cremona::fixtures;
use cremona::pipeline::{
    classify_case, run_pipeline, CaseLabel, FieldMode, Hints, Mode, Options, Status, SurfaceInput,
};
use cremona::poly::default_var_names;
use cremona::report::{verify_document, ReportDocument};
use cremona::Error;

use common::*;

fn status_of(input: &SurfaceInput) -> (CaseLabel, Status) {
    let r = run_pipeline(input).unwrap();
    (r.label, r.status)
}

#[test]
fn named_surfaces_reach_their_expected_ends() {
    let cases = [
        (fixtures::quadric().unwrap(), CaseLabel::LowDegree, Status::Certified),
        (fixtures::tangent_developable().unwrap(), CaseLabel::TwistedCubic, Status::Certified),
        (fixtures::dupin_cyclide().unwrap(), CaseLabel::CyclideExtraNode, Status::Certified),
        (fixtures::double_line().unwrap(), CaseLabel::DoubleLine, Status::CertifiedByCorollary),
        (fixtures::elliptic_type1().unwrap(), CaseLabel::EllipticType1, Status::CertifiedByCorollary),
        (fixtures::double_conic().unwrap(), CaseLabel::DoubleConic, Status::CertifiedByCorollary),
        (fixtures::quadric_cone().unwrap(), CaseLabel::Cone, Status::OutOfScope),
    ];
    for (input, label, status) in cases {
        assert_eq!(status_of(&input), (label, status), "{}", input.equation.to_string_with(&input.variables));
    }
}

#[test]
fn quartic_monoids_are_certified_exactly() {
    for seed in 0..4 {
        let input = fixtures::random_monoid(4, seed).unwrap();
        let r = run_pipeline(&input).unwrap();
        assert_eq!((r.label, r.status), (CaseLabel::Monoid, Status::Certified));
        assert_eq!(r.field_mode, FieldMode::ExactQ);
        assert!(r.final_cert.plane_form.is_some());
    }
}

#[test]
fn monoid_point_off_the_coordinate_vertex_is_found() {
    // s(A x) moves the triple point from e_0 to A^{-1} e_0 = [1, -1, 0, 0]
    let base = fixtures::random_monoid(4, 9).unwrap();
    let a = vec![
        vec![q(1), q(0), q(0), q(0)],
        vec![q(1), q(1), q(0), q(0)],
        vec![q(0), q(0), q(1), q(0)],
        vec![q(0), q(0), q(0), q(1)],
    ];
    let moved = base.equation.linear_substitute(&a).unwrap();
    let input = SurfaceInput::new(moved, default_var_names(4), Hints::default(), Options::default()).unwrap();
    let r = run_pipeline(&input).unwrap();
    assert_eq!(r.status, Status::Certified);
    assert_eq!(r.coordinate_changes.len(), 1);
    let back = r.coordinate_changes[0].to_primed(&[q(1), q(-1), q(0), q(0)]);
    assert!(back[1..].iter().all(|c| *c == q(0)), "change does not send the point to e_0: {back:?}");
}

#[test]
fn type_two_normal_form_stops_at_the_degree_ledger() {
    let s = fixtures::parse_x(
        "x0^2*x1^2 + x0*(x2^3 + x1*x3^2 + x1*x2*x3) + x3^4 + x1*x2^3 - x1^4 + x2^2*x3^2",
    )
    .unwrap();
    let hints = Hints {
        singular_points: vec![vec![q(1), q(0), q(0), q(0)]],
        ..Hints::default()
    };
    let options = Options {
        mode: Mode::Certificate,
        ..Options::default()
    };
    let input = SurfaceInput::new(s, default_var_names(4), hints, options).unwrap();
    let r = run_pipeline(&input).unwrap();
    assert_eq!(r.label, CaseLabel::EllipticType2);
    assert_eq!(r.status, Status::Inconclusive);
    assert!(r.notes.iter().any(|n| n.contains("degree")), "{:?}", r.notes);
}

#[test]
fn double_conic_without_a_rational_point_asks_for_one() {
    let s = fixtures::parse_x("(x0*x1 - x2^2)^2 + x3^2*(x0^2 + 2*x1^2 + x0*x2 + 3*x3^2)").unwrap();
    let mut hints = fixtures::double_conic().unwrap().hints;
    hints.general_points.clear();
    let input = SurfaceInput::new(s, default_var_names(4), hints, Options::default()).unwrap();
    let r = run_pipeline(&input).unwrap();
    assert_eq!((r.label, r.status), (CaseLabel::DoubleConic, Status::Inconclusive));
    assert!(r.notes.iter().any(|n| n.contains("general_points")), "{:?}", r.notes);
}

#[test]
fn false_hints_are_rejected() {
    let base = fixtures::dupin_cyclide().unwrap();
    let mut hints = base.hints.clone();
    hints.singular_points = vec![vec![q(1), q(1), q(0), q(1)]];
    let r = SurfaceInput::new(base.equation.clone(), base.variables.clone(), hints, Options::default());
    assert!(matches!(r, Err(Error::HintRejected(_))), "{r:?}");

    let base = fixtures::double_line().unwrap();
    let mut hints = base.hints.clone();
    hints.singular_curves[0].equations[0] = fixtures::parse_x("x2 - x0").unwrap();
    let r = SurfaceInput::new(base.equation.clone(), base.variables.clone(), hints, Options::default());
    assert!(matches!(r, Err(Error::HintRejected(_))), "{r:?}");
}

#[test]
fn case_override_is_respected() {
    let mut input = fixtures::random_monoid(3, 2).unwrap();
    assert_eq!(classify_case(&input).unwrap(), CaseLabel::LowDegree);
    input.hints.case_override = Some(CaseLabel::Monoid);
    assert_eq!(classify_case(&input).unwrap(), CaseLabel::Monoid);
    assert_eq!(run_pipeline(&input).unwrap().status, Status::Certified);
}

#[test]
fn reports_round_trip_and_verify() {
    for input in [
        fixtures::tangent_developable().unwrap(),
        fixtures::dupin_cyclide().unwrap(),
        fixtures::double_line().unwrap(),
        fixtures::elliptic_type1().unwrap(),
    ] {
        let doc = ReportDocument::from_report(&run_pipeline(&input).unwrap());
        let json = doc.to_json();
        let back = ReportDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), json);
        let v = verify_document(&input, &back, 50).unwrap();
        assert!(v.verified, "{:?}", v.checks);
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let input = fixtures::elliptic_type1().unwrap();
    let a = ReportDocument::from_report(&run_pipeline(&input).unwrap()).to_json();
    let b = ReportDocument::from_report(&run_pipeline(&input).unwrap()).to_json();
    assert_eq!(a, b);
}

#[test]
fn tampered_report_fails_verification() {
    let input = fixtures::dupin_cyclide().unwrap();
    let mut doc = ReportDocument::from_report(&run_pipeline(&input).unwrap());
    let plane = doc.final_.plane_form.clone().unwrap();
    doc.final_.plane_form = Some(format!("{plane} + y1"));
    let v = verify_document(&input, &doc, 50).unwrap();
    assert!(!v.verified);
}
