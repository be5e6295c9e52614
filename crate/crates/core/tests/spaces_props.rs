use diskop::spaces::{
    little_space_membership, space_norm, Exactness, FunctionHandle, NormConfig, SpaceDescriptor,
};
use diskop::weights::Weight;
use diskop::TaylorSeries;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn norm(space: &str, f: &FunctionHandle) -> f64 {
    space_norm(&SpaceDescriptor::from_name(space).unwrap(), f, &NormConfig::default())
        .unwrap()
        .value
}

fn poly(coeffs: Vec<Complex64>) -> FunctionHandle {
    FunctionHandle::from_series(TaylorSeries::polynomial(coeffs).unwrap())
}

#[test]
fn point_evaluation_examples() {
    let h2 = SpaceDescriptor::from_name("hardy:2").unwrap();
    let e = h2.point_eval_norm(c(0.5, 0.0)).unwrap();
    assert!((e.value - 0.75f64.powf(-0.5)).abs() < 1e-15);
    assert_eq!(e.exactness, Exactness::Exact);

    let a2 = SpaceDescriptor::from_name("bergman:2:0").unwrap();
    let e = a2.point_eval_norm(c(0.0, 0.5)).unwrap();
    assert!((e.value - 1.0 / 0.75).abs() < 1e-15);

    let g = SpaceDescriptor::from_name("growth:power:1").unwrap();
    let e = g.point_eval_norm_at_radius(0.5).unwrap();
    assert!((e.value - 1.0 / 0.75).abs() < 1e-15);

    let b = SpaceDescriptor::from_name("bloch:power:1").unwrap();
    assert_eq!(b.point_eval_norm_at_radius(0.5).unwrap().exactness, Exactness::UpToConstants);

    assert!(h2.point_eval_norm_at_radius(1.0).is_err());
}

#[test]
fn names_and_parameters() {
    assert!(SpaceDescriptor::from_name("hardy:1").is_err());
    assert!(SpaceDescriptor::from_name("bergman:2:-1").is_err());
    assert!(SpaceDescriptor::from_name("hardy:2:little").is_err());
    assert!(SpaceDescriptor::from_name("growth:power:1:little").unwrap().is_little());
    assert!(SpaceDescriptor::from_name("bloch:log").is_ok());
    assert!(Weight::power(-1.0).is_err());
}

#[test]
fn norm_examples() {
    assert!((norm("hardy:2", &FunctionHandle::parse("1").unwrap()) - 1.0).abs() < 1e-12);
    // |1/(1 - z/2)|_{H^2}^2 = sum 4^-k = 4/3
    let f = FunctionHandle::parse("1/(1-0.5*z)").unwrap();
    assert!((norm("hardy:2", &f) - (4.0f64 / 3.0).sqrt()).abs() < 1e-10);
    assert!((norm("bloch:power:1", &FunctionHandle::parse("z").unwrap()) - 1.0).abs() < 1e-12);
    // sup (1-r^2)/(1-r) = 2 is approached at the boundary
    let g = FunctionHandle::parse("1/(1-z)").unwrap();
    assert!((norm("growth:power:1", &g) - 2.0).abs() < 1e-9);
}

#[test]
fn unbounded_functions_are_flagged() {
    let g = FunctionHandle::parse("1/(1-z)").unwrap();
    let est = space_norm(
        &SpaceDescriptor::from_name("growth:power:0.5").unwrap(),
        &g,
        &NormConfig::default(),
    )
    .unwrap();
    let exponent = est.unbounded.expect("flagged").exponent.unwrap();
    assert!((exponent + 0.5).abs() < 0.02, "{exponent}");
}

#[test]
fn bergman_monomials() {
    for k in 0..=12 {
        let mut coeffs = vec![c(0.0, 0.0); k + 1];
        coeffs[k] = c(1.0, 0.0);
        let got = norm("bergman:2:0", &poly(coeffs));
        let want = (k as f64 + 1.0).powf(-0.5);
        assert!((got - want).abs() < 1e-6, "z^{k}: {got} vs {want}");
    }
}

#[test]
fn hardy_kernels_have_unit_norm() {
    for w in [0.5, 0.9, 0.99] {
        let text = format!("(1-{}^2)^0.5/(1-{w}*z)", w);
        let f = FunctionHandle::parse(&text).unwrap();
        let cfg = NormConfig {
            extra_radii: vec![w],
            ..NormConfig::default()
        };
        let est = space_norm(&SpaceDescriptor::from_name("hardy:2").unwrap(), &f, &cfg).unwrap();
        assert!((est.value - 1.0).abs() < 1e-8, "w = {w}: {}", est.value);
    }
}

#[test]
fn little_space_examples() {
    let fit = Default::default();
    let little = SpaceDescriptor::from_name("growth:power:1:little").unwrap();
    let z = FunctionHandle::parse("z").unwrap();
    assert!(little_space_membership(&z, &little, &fit).unwrap().is_member());
    let pole = FunctionHandle::parse("1/(1-z)").unwrap();
    assert!(!little_space_membership(&pole, &little, &fit).unwrap().is_member());
    let log = FunctionHandle::parse("log(1/(1-z))").unwrap();
    assert!(little_space_membership(&log, &little, &fit).unwrap().is_member());
    let bloch = SpaceDescriptor::from_name("bloch:power:1:little").unwrap();
    assert!(!little_space_membership(&log, &bloch, &fit).unwrap().is_member());
    let big = SpaceDescriptor::from_name("growth:power:1").unwrap();
    assert!(little_space_membership(&z, &big, &fit).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hardy_two_norm_is_coefficient_norm(
        a in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=33)
    ) {
        let coeffs: Vec<Complex64> = a.iter().map(|&(x, y)| c(x, y)).collect();
        let want = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let got = norm("hardy:2", &poly(coeffs));
        prop_assert!((got - want).abs() <= 1e-8 * want.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn weights_are_radial(beta in 0.01..3.0f64, r in 0.0..0.999f64, theta in 0.0..std::f64::consts::TAU) {
        for v in [Weight::power(beta).unwrap(), Weight::log()] {
            let a = v.value(Complex64::from_polar(r, theta)).unwrap();
            let b = v.value_at_radius(r).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * b.max(1.0));
        }
    }

    #[test]
    fn power_weights_match_closed_form(beta in 0.01..3.0f64, r in 0.0..0.999999f64) {
        let v = Weight::power(beta).unwrap().value_at_radius(r).unwrap();
        let want = (1.0 - r * r).powf(beta);
        prop_assert!((v - want).abs() <= 1e-9 * want, "{v} vs {want}");
    }

    #[test]
    fn sup_norms_grow_under_refinement(s in 0.05..0.95f64, j in 5u32..30) {
        let f = FunctionHandle::parse(&format!("(1-z)^(-{s})")).unwrap();
        let x = SpaceDescriptor::from_name("growth:power:1").unwrap();
        let coarse = NormConfig { max_j: j, rays: 32, ..NormConfig::default() };
        let fine = NormConfig { max_j: j + 5, rays: 32, ..NormConfig::default() };
        let a = space_norm(&x, &f, &coarse).unwrap().value;
        let b = space_norm(&x, &f, &fine).unwrap().value;
        prop_assert!(b >= a, "{b} < {a}");
    }

    #[test]
    fn point_evaluations_bound_norms(r in 0.0..0.9f64, k in 0usize..8) {
        // |f(z)| <= |delta_z| |f| for the Hardy space and monomials
        let mut coeffs = vec![c(0.0, 0.0); k + 1];
        coeffs[k] = c(1.0, 0.0);
        let f = poly(coeffs);
        let h2 = SpaceDescriptor::from_name("hardy:2").unwrap();
        let delta = h2.point_eval_norm_at_radius(r).unwrap().value;
        let lhs = f.eval(c(r, 0.0)).unwrap().norm();
        prop_assert!(lhs <= delta * norm("hardy:2", &f) * (1.0 + 1e-12));
    }
}
