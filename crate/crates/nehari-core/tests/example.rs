//! End-to-end audits of the built-in 2x2 example against its closed-form
//! data: singular values, index, E-space dimensions, and the construction.

use nehari_core::hankel::{self, SingularData};
use nehari_core::index::{self, CheckStatus};
use nehari_core::symalg::MatrixSymbol;
use nehari_core::{corpus, superopt};

const GRID: usize = 512;

fn status<'a>(checks: &'a [index::Check], name: &str) -> &'a CheckStatus {
    &checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("missing check {name}"))
        .status
}

#[test]
fn hankel_singular_values_match_the_closed_form() {
    let a = hankel::build_hankel(&corpus::example_2x2());
    assert_eq!((a.nrows(), a.ncols()), (10, 10));
    let sd = SingularData::new(&a).unwrap();
    let expected = [
        10f64.sqrt() / 3.0,
        1.0,
        1.0,
        1.0,
        0.5f64.sqrt(),
        1.0 / 3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ];
    for (i, &e) in expected.iter().enumerate() {
        assert!(
            (sd.value(i) - e).abs() <= 1e-8,
            "sv {i}: {} vs {e}",
            sd.value(i)
        );
    }
    assert_eq!(sd.multiplicity(1), 3);
}

#[test]
fn candidate_certificate_passes_with_the_published_levels() {
    let cert =
        superopt::verify_candidate(&corpus::example_2x2(), &corpus::example_candidate(), 1, GRID)
            .unwrap();
    assert!(cert.verdict, "checks: {:?}", cert.checks);
    assert_eq!(cert.t_values.len(), 2);
    assert!((cert.t_values[0] - 1.0).abs() <= 1e-9);
    assert!((cert.t_values[1] - 1.0 / 3.0).abs() <= 1e-9);
}

#[test]
fn index_audit_matches_the_published_numbers() {
    let audit = index::index_audit(&corpus::example_2x2(), &corpus::example_candidate(), 1, GRID)
        .unwrap();
    assert_eq!(audit.ind, 6);
    assert_eq!(audit.dim_ker, 6);
    assert_eq!(audit.dim_coker, 0);
    assert_eq!(audit.winding_det, -6);
    assert_eq!(audit.mu, 3);
    assert_eq!(audit.dim_e_plain, 5);
    assert_eq!(audit.dim_e_j, 4);
    // Only the J-reading of E balances the index here.
    assert_eq!(*status(&audit.checks, "C1"), CheckStatus::Pass);
    assert_eq!(*status(&audit.checks, "C2"), CheckStatus::Pass);
    assert_eq!(*status(&audit.checks, "C3"), CheckStatus::Fail);
    assert_eq!(*status(&audit.checks, "C4"), CheckStatus::Pass);
    assert_eq!(*status(&audit.checks, "C5"), CheckStatus::Fail);
    assert_eq!(*status(&audit.checks, "C6"), CheckStatus::NotApplicable);
    assert_eq!(*status(&audit.checks, "E_J-in-E_plain"), CheckStatus::Pass);
}

#[test]
fn schmidt_audit_confirms_the_characterization() {
    let audit = index::schmidt_characterization_audit(
        &corpus::example_2x2(),
        &corpus::example_candidate(),
        1,
        GRID,
    )
    .unwrap();
    assert_eq!(audit.mu, 3);
    assert_eq!(audit.dim_r, 3);
    assert!(audit.coincide);
}

#[test]
fn sandwiched_error_is_very_bad() {
    let es = index::build_u(&corpus::example_2x2(), &corpus::example_candidate(), 1, GRID)
        .unwrap();
    let report = index::very_bad_audit(&es.u, GRID).unwrap();
    assert!(report.passed, "checks: {:?}", report.checks);
    assert_eq!(report.dim_ker, Some(4));
    assert_eq!(report.t_values.len(), 2);
    assert!((report.t_values[0] - 1.0).abs() <= 1e-9);
    assert!((report.t_values[1] - 1.0 / 3.0).abs() <= 1e-9);
}

#[test]
fn construction_recovers_the_superoptimal_approximant() {
    let built = superopt::py_construct_2x2(&corpus::example_2x2(), 1, GRID).unwrap();
    assert!(built.certificate.verdict);
    assert!((built.factorization.s - 1.0).abs() <= 1e-10);
    let diff = built
        .q
        .to_rational()
        .sub(&corpus::example_candidate().to_rational())
        .unwrap();
    let dev = MatrixSymbol::from(diff).sup_norm().unwrap();
    assert!(dev <= 1e-8, "construction drifts from the oracle by {dev:.3e}");
}
