mod common;

use common::*;
use proptest::prelude::*;
use tscalc_core::{darboux_sums, id_integral, id_integral_with, ir_integral, make_lemma1_division, refine, Error, IdOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn darboux_sums_bracket_and_tighten(seed in any::<u64>()) {
        let mut r = rng(seed);
        let kind = random_kind(&mut r);
        let ts = random_scale(&mut r, kind);
        let f = random_continuous(&mut r);
        let (a, b) = (ts.min(), ts.max());
        let mut d = make_lemma1_division(&ts, a, b, (b - a) / 4.0).unwrap();
        let mut prev = darboux_sums(&f, &ts, &d).unwrap();
        prop_assert!(prev.lower <= prev.upper);
        for _ in 0..4 {
            d = refine(&ts, &d);
            let next = darboux_sums(&f, &ts, &d).unwrap();
            prop_assert!(next.lower <= next.upper);
            prop_assert!(next.lower >= prev.lower - 1e-12 * prev.lower.abs().max(1.0));
            prop_assert!(next.upper <= prev.upper + 1e-12 * prev.upper.abs().max(1.0));
            prev = next;
        }
    }

    #[test]
    fn darboux_bracket_contains_quadrature(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ts = random_scale(&mut r, ScaleKind::Mixed);
        let f = random_continuous(&mut r);
        let (a, b) = (ts.min(), ts.max());
        let q = ir_integral(&f, &ts, a, b, 1e-11).unwrap().value;
        let opts = IdOptions { force_darboux: true, max_rounds: 5, max_cells: 1 << 12 };
        let bracket = match id_integral_with(&f, &ts, a, b, 1e-11, opts) {
            Ok(res) => res.value,
            Err(Error::NonConvergence { bracket, .. }) => bracket,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(subset_tol(q, bracket, 1e-9), "{} not in {}", q, bracket);
    }

    #[test]
    fn id_and_ir_agree_for_continuous(seed in any::<u64>()) {
        let mut r = rng(seed);
        let kind = random_kind(&mut r);
        let ts = random_scale(&mut r, kind);
        let f = random_continuous(&mut r);
        let tol = 1e-8;
        let id = id_integral(&f, &ts, ts.min(), ts.max(), tol).unwrap();
        let ir = ir_integral(&f, &ts, ts.min(), ts.max(), tol).unwrap();
        prop_assert!(id.value.hausdorff_dist(&ir.value) <= 10.0 * tol);
        prop_assert!(id.error_estimate >= 0.0);
    }
}

#[test]
fn id_properties() {
    integral_property_suite(60, 3, false, 1e-8).unwrap();
}

#[test]
fn ir_properties() {
    integral_property_suite(60, 5, true, 1e-8).unwrap();
}

#[test]
fn single_cell_values() {
    assert_eq!(single_cell_suite(10, 50, 9).unwrap(), 50);
}
