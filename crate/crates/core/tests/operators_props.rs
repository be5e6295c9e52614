use diskop::operators::{shift_relation_residual, OperatorSymbol};
use diskop::spaces::FunctionHandle;
use diskop::{parse, Expr, TaylorSeries};
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn to_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn random_rational_poly(rng: &mut ChaCha8Rng, degree: usize) -> Vec<Rational64> {
    (0..=degree)
        .map(|_| Rational64::new(rng.gen_range(-9..=9), rng.gen_range(1..=8)))
        .collect()
}

fn poly_text(a: &[Rational64]) -> String {
    let terms: Vec<String> = a
        .iter()
        .enumerate()
        .map(|(k, q)| format!("({}/{})*z^{k}", q.numer(), q.denom()))
        .collect();
    terms.join("+")
}

/// Exact coefficients of `T_g f = int_0^z f g'` for polynomials.
fn volterra_exact(f: &[Rational64], g: &[Rational64]) -> Vec<Rational64> {
    let zero = Rational64::from_integer(0);
    let gp: Vec<Rational64> = (1..g.len())
        .map(|k| g[k] * Rational64::from_integer(k as i64))
        .collect();
    let mut product = vec![zero; (f.len() + gp.len()).max(1)];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in gp.iter().enumerate() {
            product[i + j] += a * b;
        }
    }
    let mut out = vec![zero];
    out.extend(
        product
            .iter()
            .enumerate()
            .map(|(n, p)| p / Rational64::from_integer(n as i64 + 1)),
    );
    out
}

fn coeff(h: &FunctionHandle, k: usize) -> Complex64 {
    h.series()
        .unwrap()
        .coeffs()
        .get(k)
        .copied()
        .unwrap_or(c(0.0, 0.0))
}

#[test]
fn shift_relation_against_exact_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..50 {
        let df = rng.gen_range(0..=16);
        let dg = rng.gen_range(1..=16);
        let f = random_rational_poly(&mut rng, df);
        let g = random_rational_poly(&mut rng, dg);
        let exact = volterra_exact(&f, &g);

        let fh = FunctionHandle::from_series(
            TaylorSeries::polynomial_real(&f.iter().map(|q| to_f64(*q)).collect::<Vec<_>>()).unwrap(),
        );
        let ge = parse(&poly_text(&g)).unwrap();
        let volterra = OperatorSymbol::volterra(ge.clone()).unwrap().apply(&fh).unwrap();
        let cesaro = OperatorSymbol::cesaro(ge.clone()).unwrap().apply(&fh).unwrap();
        let scale = exact.iter().map(|q| to_f64(*q).abs()).fold(1.0, f64::max);
        for (k, q) in exact.iter().enumerate() {
            let want = to_f64(*q);
            let v = coeff(&volterra, k);
            assert!((v - c(want, 0.0)).norm() <= 1e-12 * scale, "trial {trial}, T_g coeff {k}: {v} vs {want}");
            if k > 0 {
                let w = coeff(&cesaro, k - 1);
                assert!((w - c(want, 0.0)).norm() <= 1e-12 * scale, "trial {trial}, C_g coeff {}: {w} vs {want}", k - 1);
            }
        }
        // no stray mass past the exact degree
        for k in exact.len()..exact.len() + 8 {
            assert!(coeff(&volterra, k).norm() <= 1e-12 * scale);
        }
        let residual = shift_relation_residual(&ge, &fh).unwrap();
        assert!(residual <= 1e-12 * scale, "trial {trial}: residual {residual}");
    }
}

const SYMBOLS: [&str; 5] = ["z", "log(1/(1-z))", "(1-z)^(-0.5)", "exp(z)", "z^3-2*z"];

fn symbol() -> impl Strategy<Value = Expr> {
    prop::sample::select(SYMBOLS.to_vec()).prop_map(|s| parse(s).unwrap())
}

fn poly_handle(a: &[(f64, f64)]) -> FunctionHandle {
    FunctionHandle::from_series(
        TaylorSeries::polynomial(a.iter().map(|&(x, y)| c(x, y)).collect()).unwrap(),
    )
}

fn coeff_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..12)
}

fn point() -> impl Strategy<Value = Complex64> {
    (0.0..0.9f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operators_are_linear(g in symbol(), a in coeff_strategy(), b in coeff_strategy(),
                            alpha in -2.0..2.0f64, z in point()) {
        let (f1, f2) = (poly_handle(&a), poly_handle(&b));
        let combo = FunctionHandle::linear_combination(&[(c(alpha, 0.0), f1.clone()), (c(1.0, 0.0), f2.clone())]);
        for op in [
            OperatorSymbol::volterra(g.clone()).unwrap(),
            OperatorSymbol::cesaro(g.clone()).unwrap(),
            OperatorSymbol::multiplication(g.clone()),
            OperatorSymbol::differentiation(),
        ] {
            let lhs = op.apply(&combo).unwrap().eval(z).unwrap();
            let rhs = alpha * op.apply(&f1).unwrap().eval(z).unwrap() + op.apply(&f2).unwrap().eval(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()), "{op}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn volterra_images_vanish_at_zero(g in symbol(), a in coeff_strategy()) {
        let v = OperatorSymbol::volterra(g).unwrap().apply(&poly_handle(&a)).unwrap();
        prop_assert_eq!(coeff(&v, 0), c(0.0, 0.0));
        prop_assert_eq!(v.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn derivative_of_volterra_is_multiplication_by_g_prime(g in symbol(), a in coeff_strategy(), z in point()) {
        let f = poly_handle(&a);
        let op = OperatorSymbol::volterra(g.clone()).unwrap();
        let lhs = OperatorSymbol::differentiation().apply(&op.apply(&f).unwrap()).unwrap().eval(z).unwrap();
        let rhs = OperatorSymbol::multiplication(g.differentiate()).apply(&f).unwrap().eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn cesaro_is_volterra_over_z(g in symbol(), a in coeff_strategy(), z in point()) {
        prop_assume!(z.norm() > 1e-3);
        let f = poly_handle(&a);
        let v = OperatorSymbol::volterra(g.clone()).unwrap().apply(&f).unwrap().eval(z).unwrap();
        let w = OperatorSymbol::cesaro(g).unwrap().apply(&f).unwrap().eval(z).unwrap();
        prop_assert!((v - z * w).norm() <= 1e-9 * (1.0 + v.norm()), "{v} vs {}", z * w);
    }

    #[test]
    fn composition_with_identity_symbol_is_multiplication(a in coeff_strategy(), z in point()) {
        let f = poly_handle(&a);
        let u = parse("1+z^2").unwrap();
        let w = OperatorSymbol::weighted_composition(u.clone(), parse("z").unwrap()).unwrap();
        let m = OperatorSymbol::multiplication(u);
        let lhs = w.apply(&f).unwrap().eval(z).unwrap();
        let rhs = m.apply(&f).unwrap().eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

#[test]
fn non_self_maps_are_rejected() {
    assert!(OperatorSymbol::weighted_composition(parse("1").unwrap(), parse("2*z").unwrap()).is_err());
    assert!(OperatorSymbol::weighted_composition(parse("1").unwrap(), parse("(1+z)/2").unwrap()).is_ok());
}
