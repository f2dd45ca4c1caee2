mod common;

use common::checks::{gaussian_counts, rational_root_completeness};
use common::gen::rng;
use common::p;
use meroshare::constants::SymConst;
use meroshare::region::{locate_candidates, multiplicity_by_winding, Region};
use meroshare::verdict::same_point_set;
use rug::Rational;

#[test]
fn planted_rational_roots_are_found_exactly() {
    let t = rational_root_completeness(&mut rng(41), 200);
    assert!(t.failures.is_empty(), "{}\n{}", t.summary(), t.failures.join("\n"));
}

#[test]
fn counts_gaussian_integer_roots() {
    let t = gaussian_counts(&mut rng(42), 40);
    assert!(t.failures.is_empty(), "{}\n{}", t.summary(), t.failures.join("\n"));
}

#[test]
fn candidates_do_not_depend_on_argument_order() {
    let r: Region = "-4,4,-2,2".parse().unwrap();
    for (f, g, a) in [
        ("1/z + exp(z)", "1/z + z*exp(z)", "1/z"),
        ("z^2*(z - 1/2)", "(z + 3/2)^3/(z - 1)", "z/(z - 2)"),
        ("sin(z)", "sin(z)*exp(z)", "z^2 + 1"),
    ] {
        let x = locate_candidates(&p(f), &p(g), &p(a), &r).unwrap();
        let y = locate_candidates(&p(g), &p(f), &p(a), &r).unwrap();
        let pts = |c: &meroshare::region::CandidateSet| c.points.iter().map(|c| c.point.clone()).collect::<Vec<_>>();
        assert!(same_point_set(&pts(&x), &pts(&y)), "{f}, {g}, {a}");
    }
}

#[test]
fn winding_multiplicities_of_small_circles() {
    let cases = [("z^2", "0", 2), ("z^3*exp(z)", "0", 3), ("sin(z)", "pi", 1), ("1/(z - 1/3)^2", "1/3", 2)];
    for (e, c, m) in cases {
        let z0 = SymConst::from_expr(&p(c)).unwrap();
        assert_eq!(multiplicity_by_winding(&p(e), &z0, &Rational::from((1, 2))).unwrap(), m, "{e}");
    }
}
