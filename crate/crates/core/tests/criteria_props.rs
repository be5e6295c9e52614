use diskop::criteria::{
    boundedness_verdict, closed_form_verdict, compactness_verdict, criterion_profile,
    kernel_lower_bound, predict_power_family, Bound, Boundedness, Compactness, CriterionProfile,
    ProfileGrid, Tolerances,
};
use diskop::operators::OperatorSymbol;
use diskop::parse;
use diskop::spaces::{NormConfig, SpaceDescriptor};
use proptest::prelude::*;

const SMALL: ProfileGrid = ProfileGrid { rays: 16, max_j: 40 };

fn space(name: &str) -> SpaceDescriptor {
    SpaceDescriptor::from_name(name).unwrap()
}

fn g_s(s: f64) -> String {
    format!("(1-z)^(-{s})")
}

fn profile(op: &OperatorSymbol, x: &str, y: &str, grid: ProfileGrid) -> CriterionProfile {
    criterion_profile(op, &space(x), &space(y), grid, &Tolerances::default()).unwrap()
}

fn same_verdict(a: &Boundedness, b: &Boundedness) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

fn same_compact(a: &Compactness, b: &Compactness) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn profiles_are_nonnegative_and_dominated_by_the_sup(s in 0.05..1.2f64, beta in 0.5..3.0f64) {
        let op = OperatorSymbol::volterra(parse(&g_s(s)).unwrap()).unwrap();
        let p = profile(&op, "hardy:2", &format!("bloch:power:{beta}"), SMALL);
        prop_assert_eq!(p.samples.len(), SMALL.rays * SMALL.max_j as usize);
        prop_assert!(p.samples.iter().all(|x| x.value >= 0.0 && x.unweighted >= 0.0));
        match p.sup_estimate {
            Bound::Finite { value } => prop_assert!(value >= p.max_sampled()),
            Bound::Infinite { max_sampled, .. } => prop_assert_eq!(max_sampled, p.max_sampled()),
        }
    }

    #[test]
    fn compact_implies_bounded(s in 0.05..1.2f64, beta in 0.5..3.0f64) {
        let op = OperatorSymbol::volterra(parse(&g_s(s)).unwrap()).unwrap();
        let p = profile(&op, "hardy:2", &format!("bloch:power:{beta}"), SMALL);
        let tol = Tolerances::default();
        if compactness_verdict(&p, &tol).is_yes() {
            prop_assert!(boundedness_verdict(&p, &tol).is_yes());
        }
    }

    #[test]
    fn cesaro_and_volterra_share_verdicts(s in 0.05..1.2f64, beta in 0.5..3.0f64) {
        let g = parse(&g_s(s)).unwrap();
        let target = format!("bloch:power:{beta}");
        let tol = Tolerances::default();
        let v = profile(&OperatorSymbol::volterra(g.clone()).unwrap(), "hardy:2", &target, SMALL);
        let c = profile(&OperatorSymbol::cesaro(g).unwrap(), "hardy:2", &target, SMALL);
        prop_assert!(same_verdict(&boundedness_verdict(&v, &tol), &boundedness_verdict(&c, &tol)));
        prop_assert!(same_compact(&compactness_verdict(&v, &tol), &compactness_verdict(&c, &tol)));
    }

    #[test]
    fn volterra_into_bloch_is_multiplication_into_growth(s in 0.05..1.2f64, beta in 0.5..3.0f64) {
        let g = parse(&g_s(s)).unwrap();
        let v = profile(&OperatorSymbol::volterra(g.clone()).unwrap(), "bergman:2:0",
                        &format!("bloch:power:{beta}"), SMALL);
        let m = profile(&OperatorSymbol::multiplication(g.differentiate()), "bergman:2:0",
                        &format!("growth:power:{beta}"), SMALL);
        for (a, b) in v.samples.iter().zip(&m.samples) {
            prop_assert!((a.value - b.value).abs() <= 1e-12 * b.value.max(1.0), "{} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn profiles_scale_with_the_symbol(s in 0.05..1.2f64, k in 0.1..10.0f64) {
        let g = parse(&g_s(s)).unwrap();
        let kg = parse(&format!("{k}*{}", g_s(s))).unwrap();
        let a = profile(&OperatorSymbol::volterra(g).unwrap(), "hardy:2", "bloch:power:2", SMALL);
        let b = profile(&OperatorSymbol::volterra(kg).unwrap(), "hardy:2", "bloch:power:2", SMALL);
        for (x, y) in a.samples.iter().zip(&b.samples) {
            prop_assert!((k * x.value - y.value).abs() <= 1e-12 * y.value.max(1.0));
        }
    }

    #[test]
    fn verdicts_follow_the_power_family_prediction(s in 0.05..1.2f64) {
        // Hardy(2) -> Bloch(power:2): the table exponent is 3/2, critical at s = 1/2.
        prop_assume!((s - 0.5).abs() > 0.1);
        let g = parse(&g_s(s)).unwrap();
        let op = OperatorSymbol::volterra(g).unwrap();
        let (x, y) = (space("hardy:2"), space("bloch:power:2"));
        let record = closed_form_verdict(op.kind(), &x, &y).unwrap();
        let prediction = predict_power_family(&record, s);
        let p = criterion_profile(&op, &x, &y, ProfileGrid::default(), &Tolerances::default()).unwrap();
        let tol = Tolerances::default();
        prop_assert_eq!(boundedness_verdict(&p, &tol).is_yes(), prediction.bounded);
        prop_assert_eq!(compactness_verdict(&p, &tol).is_yes(), prediction.compact);
    }
}

#[test]
fn kernel_bounds_never_exceed_the_upper_estimate() {
    let tol = Tolerances::default();
    let cases = [
        ("log(1/(1-z))", "hardy:2", "bloch:power:1.5"),
        ("(1-z)^(-0.25)", "hardy:2", "bloch:power:2"),
        ("(1-z)^(-0.5)", "hardy:2", "bloch:power:2"),
        ("log(1/(1-z))", "bergman:2:0", "bloch:power:2"),
    ];
    for (g, x, y) in cases {
        let op = OperatorSymbol::volterra(parse(g).unwrap()).unwrap();
        let p = profile(&op, x, y, ProfileGrid::default());
        let Bound::Finite { value: upper } = p.sup_estimate else {
            panic!("{g}: expected a finite sup");
        };
        let lower = kernel_lower_bound(&op, &space(x), &space(y), &[0.5, 0.9, 0.99], &NormConfig::default(), &tol)
            .unwrap();
        assert!(lower.value <= upper * (1.0 + 1e-6), "{g}: {} > {upper}", lower.value);
        assert!(lower.value > 0.0);
    }
}
