mod common;

use common::checks::{derivative_consistency, exp_inverse, inversion_consistency, order_additivity, Tally};
use common::gen::rng;
use common::p;
use meroshare::constants::SymConst;
use meroshare::laurent::{expand, local_order, LocalOrder};

fn check(t: Tally) {
    assert!(t.failures.is_empty(), "{}\n{}", t.summary(), t.failures.join("\n"));
    assert!(t.decisive_rate() >= 0.95, "{}", t.summary());
}

#[test]
fn orders_add_under_products() {
    check(order_additivity(&mut rng(11), 60));
}

#[test]
fn derivative_commutes_with_expansion() {
    check(derivative_consistency(&mut rng(12), 60));
}

#[test]
fn reciprocal_negates_order() {
    check(inversion_consistency(&mut rng(13), 60));
}

#[test]
fn exp_times_exp_of_negative_is_one() {
    check(exp_inverse(&mut rng(14), 60));
}

#[test]
fn reciprocal_series_inverts() {
    let z0 = SymConst::zero();
    let s = expand(&p("1/(z + z^2*exp(z))"), &z0, 6).unwrap();
    let d = expand(&p("z + z^2*exp(z)"), &z0, 8).unwrap();
    let prod = s.mul(&d);
    assert_eq!(prod.coefficient(0).unwrap().to_string(), "1");
    for k in 1..=6 {
        assert!(prod.coefficient(k).unwrap().is_literal_zero() || prod.coefficient(k).unwrap().to_string() == "0");
    }
    assert_eq!(s.coefficient(-1).unwrap().to_string(), "1");
    assert_eq!(s.coefficient(0).unwrap().to_string(), "-1");
}

#[test]
fn identically_zero_is_reported_with_depth() {
    let o = local_order(&p("sin(z)^2 + cos(z)^2 - 1"), &SymConst::zero());
    assert!(matches!(o, LocalOrder::VanishesToDepth(_)), "{o}");
}
