// Taylor expansion at 0 by recursive series arithmetic on the tree.

use num_complex::Complex64;

use super::{is_integer_exponent, Expr, ExprError, Node};
use crate::series::{cauchy_product, SeriesError, TaylorSeries};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

type Coeffs = Vec<Complex64>;

impl Expr {
    /// Taylor coefficients at 0 up to degree `n`.
    ///
    /// Polynomial expressions of degree at most `n` give an exact series;
    /// anything else is a truncation whose valid radius is estimated from the
    /// trailing coefficients.
    pub fn to_series(&self, n: usize) -> Result<TaylorSeries, ExprError> {
        let coeffs = expand(self.root(), n)?;
        let series = match self.polynomial_degree() {
            Some(d) if d <= n => TaylorSeries::polynomial(coeffs),
            _ => TaylorSeries::truncated(coeffs),
        };
        series.map_err(|e: SeriesError| ExprError::NotAnalyticAtZero(e.to_string()))
    }
}

fn singular(what: &str) -> ExprError {
    ExprError::NotAnalyticAtZero(what.to_string())
}

fn expand(node: &Node, n: usize) -> Result<Coeffs, ExprError> {
    let mut out = vec![ZERO; n + 1];
    match node {
        Node::Const(c) => out[0] = *c,
        Node::Var => {
            if n >= 1 {
                out[1] = Complex64::new(1.0, 0.0);
            }
        }
        Node::Neg(a) => return Ok(expand(a, n)?.into_iter().map(|c| -c).collect()),
        Node::Add(a, b) => {
            let (a, b) = (expand(a, n)?, expand(b, n)?);
            return Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect());
        }
        Node::Sub(a, b) => {
            let (a, b) = (expand(a, n)?, expand(b, n)?);
            return Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect());
        }
        Node::Mul(a, b) => return Ok(cauchy_product(&expand(a, n)?, &expand(b, n)?, n)),
        Node::Div(a, b) => return divide(&expand(a, n)?, &expand(b, n)?),
        Node::Pow(a, p) => return power(&expand(a, n)?, *p),
        Node::Log(a) => return log(&expand(a, n)?),
        Node::Exp(a) => return Ok(exp(&expand(a, n)?)),
    }
    Ok(out)
}

fn divide(a: &[Complex64], b: &[Complex64]) -> Result<Coeffs, ExprError> {
    let b0 = b[0];
    if b0 == ZERO {
        return Err(singular("denominator vanishes at 0"));
    }
    let mut w: Coeffs = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let s: Complex64 = (1..=k).map(|j| b[j] * w[k - j]).sum();
        w.push((a[k] - s) / b0);
    }
    Ok(w)
}

// w = u^p with u_0 != 0:  k u_0 w_k = sum_{j=1..k} ((p+1) j - k) u_j w_{k-j}
fn power(u: &[Complex64], p: f64) -> Result<Coeffs, ExprError> {
    let n = u.len() - 1;
    let u0 = u[0];
    if u0 == ZERO {
        if p >= 0.0 && is_integer_exponent(p) {
            return Ok(integer_power(u, p as u32, n));
        }
        return Err(singular("non-integer or negative power of a function vanishing at 0"));
    }
    let w0 = if is_integer_exponent(p) {
        u0.powi(p as i32)
    } else {
        (u0.ln() * p).exp()
    };
    let mut w = Vec::with_capacity(n + 1);
    w.push(w0);
    for k in 1..=n {
        let s: Complex64 = (1..=k)
            .map(|j| u[j] * w[k - j] * ((p + 1.0) * j as f64 - k as f64))
            .sum();
        w.push(s / (u0 * k as f64));
    }
    Ok(w)
}

fn integer_power(u: &[Complex64], mut e: u32, n: usize) -> Coeffs {
    let mut result = vec![ZERO; n + 1];
    result[0] = Complex64::new(1.0, 0.0);
    let mut base = u.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = cauchy_product(&result, &base, n);
        }
        e >>= 1;
        if e > 0 {
            base = cauchy_product(&base, &base, n);
        }
    }
    result
}

// u w' = u'  =>  k u_0 w_k = k u_k - sum_{j=1..k-1} j w_j u_{k-j}
fn log(u: &[Complex64]) -> Result<Coeffs, ExprError> {
    let u0 = u[0];
    if u0 == ZERO {
        return Err(singular("logarithm of a function vanishing at 0"));
    }
    let n = u.len() - 1;
    let mut w = Vec::with_capacity(n + 1);
    w.push(u0.ln());
    for k in 1..=n {
        let s: Complex64 = (1..k).map(|j| w[j] * u[k - j] * j as f64).sum();
        w.push((u[k] * k as f64 - s) / (u0 * k as f64));
    }
    Ok(w)
}

// w' = u' w  =>  k w_k = sum_{j=1..k} j u_j w_{k-j}
fn exp(u: &[Complex64]) -> Coeffs {
    let n = u.len() - 1;
    let mut w = Vec::with_capacity(n + 1);
    w.push(u[0].exp());
    for k in 1..=n {
        let s: Complex64 = (1..=k).map(|j| u[j] * w[k - j] * j as f64).sum();
        w.push(s / k as f64);
    }
    w
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn reals(text: &str, n: usize) -> Vec<f64> {
        let s = parse(text).unwrap().to_series(n).unwrap();
        s.coeffs()
            .iter()
            .map(|c| {
                assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-15);
                c.re
            })
            .collect()
    }

    #[test]
    fn series_examples() {
        assert_eq!(reals("1/(1-z)", 3), vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(reals("z^2", 4), vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(parse("z^2").unwrap().to_series(4).unwrap().is_exact());
        // termwise integral of the geometric series
        let log = reals("log(1/(1-z))", 4);
        for (got, want) in log.iter().zip([0.0, 1.0, 0.5, 1.0 / 3.0, 0.25]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn binomial_and_exponential_coefficients() {
        // (1-z)^(-1/2): binomial(2k, k) / 4^k
        let c = reals("(1-z)^(-0.5)", 6);
        let mut expected = 1.0;
        for (k, got) in c.iter().enumerate() {
            assert_abs_diff_eq!(*got, expected, epsilon = 1e-14);
            expected *= (2.0 * k as f64 + 1.0) / (2.0 * k as f64 + 2.0);
        }
        let e = reals("exp(z)", 8);
        let mut fact = 1.0;
        for (k, got) in e.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert_abs_diff_eq!(*got, 1.0 / fact, epsilon = 1e-15);
        }
    }

    #[test]
    fn singular_at_origin_is_error() {
        assert!(parse("1/z").unwrap().to_series(4).is_err());
        assert!(parse("log(z)").unwrap().to_series(4).is_err());
        assert!(parse("z^0.5").unwrap().to_series(4).is_err());
        assert!(parse("(z+z^2)^3").unwrap().to_series(4).is_ok());
    }

    #[test]
    fn agrees_with_pointwise_evaluation() {
        for text in [
            "1/(1-z)",
            "log(1/(1-z))",
            "(1-z)^(-0.75)",
            "exp(z)/(2-z)",
            "log(1+z/2)*(1+z)^3",
        ] {
            let e = parse(text).unwrap();
            let s = e.to_series(256).unwrap();
            for k in 0..24 {
                let z = Complex64::from_polar(0.5, 0.3 * k as f64);
                let diff = (s.eval(z).unwrap() - e.eval(z).unwrap()).norm();
                assert!(diff < 1e-10, "{text} at {z}: {diff}");
            }
        }
    }
}
