// Symbolic differentiation with light constant folding.

use std::sync::Arc;

use num_complex::Complex64;

use super::Node;

fn constant(node: &Node) -> Option<Complex64> {
    match node {
        Node::Const(c) => Some(*c),
        _ => None,
    }
}

fn konst(c: Complex64) -> Arc<Node> {
    Arc::new(Node::Const(c))
}

fn real(x: f64) -> Arc<Node> {
    konst(Complex64::new(x, 0.0))
}

fn is(node: &Node, value: f64) -> bool {
    constant(node) == Some(Complex64::new(value, 0.0))
}

pub(crate) fn mk_add(a: Arc<Node>, b: Arc<Node>) -> Arc<Node> {
    match (constant(&a), constant(&b)) {
        (Some(x), Some(y)) => konst(x + y),
        _ if is(&a, 0.0) => b,
        _ if is(&b, 0.0) => a,
        _ => Arc::new(Node::Add(a, b)),
    }
}

pub(crate) fn mk_sub(a: Arc<Node>, b: Arc<Node>) -> Arc<Node> {
    match (constant(&a), constant(&b)) {
        (Some(x), Some(y)) => konst(x - y),
        _ if is(&b, 0.0) => a,
        _ if is(&a, 0.0) => mk_neg(b),
        _ => Arc::new(Node::Sub(a, b)),
    }
}

pub(crate) fn mk_neg(a: Arc<Node>) -> Arc<Node> {
    match a.as_ref() {
        Node::Const(c) => konst(-c),
        Node::Neg(inner) => inner.clone(),
        _ => Arc::new(Node::Neg(a)),
    }
}

pub(crate) fn mk_mul(a: Arc<Node>, b: Arc<Node>) -> Arc<Node> {
    match (constant(&a), constant(&b)) {
        (Some(x), Some(y)) => konst(x * y),
        _ if is(&a, 0.0) || is(&b, 0.0) => real(0.0),
        _ if is(&a, 1.0) => b,
        _ if is(&b, 1.0) => a,
        _ if is(&a, -1.0) => mk_neg(b),
        _ if is(&b, -1.0) => mk_neg(a),
        _ => Arc::new(Node::Mul(a, b)),
    }
}

pub(crate) fn mk_div(a: Arc<Node>, b: Arc<Node>) -> Arc<Node> {
    match (constant(&a), constant(&b)) {
        (Some(x), Some(y)) if y != Complex64::new(0.0, 0.0) => konst(x / y),
        _ if is(&a, 0.0) => real(0.0),
        _ if is(&b, 1.0) => a,
        _ => Arc::new(Node::Div(a, b)),
    }
}

fn mk_pow(a: Arc<Node>, p: f64) -> Arc<Node> {
    if p == 0.0 {
        return real(1.0);
    }
    if p == 1.0 {
        return a;
    }
    Arc::new(Node::Pow(a, p))
}

pub(crate) fn derivative(node: &Arc<Node>) -> Arc<Node> {
    match node.as_ref() {
        Node::Const(_) => real(0.0),
        Node::Var => real(1.0),
        Node::Neg(a) => mk_neg(derivative(a)),
        Node::Add(a, b) => mk_add(derivative(a), derivative(b)),
        Node::Sub(a, b) => mk_sub(derivative(a), derivative(b)),
        Node::Mul(a, b) => mk_add(
            mk_mul(derivative(a), b.clone()),
            mk_mul(a.clone(), derivative(b)),
        ),
        Node::Div(a, b) => {
            let (da, db) = (derivative(a), derivative(b));
            if is(&db, 0.0) {
                return mk_div(da, b.clone());
            }
            mk_div(
                mk_sub(mk_mul(da, b.clone()), mk_mul(a.clone(), db)),
                mk_mul(b.clone(), b.clone()),
            )
        }
        Node::Pow(a, p) => mk_mul(
            mk_mul(real(*p), mk_pow(a.clone(), p - 1.0)),
            derivative(a),
        ),
        Node::Log(a) => mk_div(derivative(a), a.clone()),
        Node::Exp(a) => mk_mul(node.clone(), derivative(a)),
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn derivative_examples() {
        let d = parse("log(1/(1-z))").unwrap().differentiate();
        assert_abs_diff_eq!(d.eval(re(0.5)).unwrap().re, 2.0, epsilon = 1e-14);

        let d = parse("3").unwrap().differentiate();
        assert_eq!(d.as_constant(), Some(re(0.0)));

        // 0.5 (1-z)^(-1.5) at 0
        let d = parse("(1-z)^(-0.5)").unwrap().differentiate();
        assert_abs_diff_eq!(d.eval(re(0.0)).unwrap().re, 0.5, epsilon = 1e-15);
        let at = re(0.36);
        let expected = 0.5 * 0.64_f64.powf(-1.5);
        assert_abs_diff_eq!(d.eval(at).unwrap().re, expected, epsilon = 1e-13);
    }

    #[test]
    fn constant_folding_keeps_trees_small() {
        let d = parse("z^2").unwrap().differentiate();
        assert_eq!(d.to_string(), "(2.0*z)");
        let d = parse("exp(z)").unwrap().differentiate();
        assert_eq!(d.to_string(), "exp(z)");
    }
}
