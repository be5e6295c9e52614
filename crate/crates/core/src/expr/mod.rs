//! Closed-form symbols in one complex variable.
//!
//! Expressions are parsed into an immutable tree of [`Node`]s shared through
//! `Arc`, so substitution and differentiation reuse subtrees. Evaluation uses
//! principal branches for `log` and real powers and reports any non-finite
//! intermediate as a singularity instead of returning it.

mod diff;
mod parse;
mod to_series;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub use parse::{parse, parse_in};
pub(crate) use parse::probe_points;

// Integer exponents up to this size are applied with `powi`.
const MAX_POWI: f64 = 1024.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("denominator `{denominator}` vanishes at every probe point")]
    ZeroDenominator { denominator: String },
    #[error("expression is singular at z = {z}")]
    Singularity { z: Complex64 },
    #[error("expression is not analytic at 0: {0}")]
    NotAnalyticAtZero(String),
    #[error("symbol is not a self-map of the disk: |phi| reaches {max_modulus} at z = {at}")]
    NotSelfMap { max_modulus: f64, at: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Complex64),
    Var,
    Neg(Arc<Node>),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Pow(Arc<Node>, f64),
    Log(Arc<Node>),
    Exp(Arc<Node>),
}

/// A parsed expression together with the text it came from.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Arc<Node>,
    source: String,
    var: char,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.var == other.var
    }
}

impl Expr {
    /// Wraps a tree built programmatically. The source text is the printed form.
    pub fn from_node(root: Node) -> Self {
        Self::from_arc(Arc::new(root), 'z')
    }

    pub(crate) fn from_arc(root: Arc<Node>, var: char) -> Self {
        let source = Printer { node: &root, var }.to_string();
        Self { root, source, var }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_node(Node::Const(c))
    }

    pub fn variable() -> Self {
        Self::from_node(Node::Var)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn source_text(&self) -> &str {
        &self.source
    }

    pub fn variable_name(&self) -> char {
        self.var
    }

    /// True when the tree is the bare variable.
    pub fn is_identity(&self) -> bool {
        matches!(*self.root, Node::Var)
    }

    /// The constant value when the tree has no variable, after folding.
    pub fn as_constant(&self) -> Option<Complex64> {
        match *self.root {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, ExprError> {
        eval_node(&self.root, z)
    }

    /// Evaluation at a real argument (used for radial weight profiles).
    pub fn eval_real(&self, t: f64) -> Result<Complex64, ExprError> {
        self.eval(Complex64::new(t, 0.0))
    }

    /// Symbolic derivative with respect to the variable.
    pub fn differentiate(&self) -> Expr {
        Self::from_arc(diff::derivative(&self.root), self.var)
    }

    /// `self(inner(z))`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        Self::from_arc(substitute(&self.root, &inner.root), inner.var)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        Self::from_arc(diff::mk_mul(self.root.clone(), other.root.clone()), self.var)
    }

    pub fn add(&self, other: &Expr) -> Expr {
        Self::from_arc(diff::mk_add(self.root.clone(), other.root.clone()), self.var)
    }

    pub fn scale(&self, c: Complex64) -> Expr {
        Self::from_arc(
            diff::mk_mul(Arc::new(Node::Const(c)), self.root.clone()),
            self.var,
        )
    }

    /// Degree when the tree is a polynomial in the variable.
    pub fn polynomial_degree(&self) -> Option<usize> {
        polynomial_degree(&self.root)
    }

    /// Checks `|phi(z)| < 1 + tol` on a 64 x 64 polar grid reaching `1 - 2^-40`.
    pub fn check_self_map(&self, tol: f64) -> Result<f64, ExprError> {
        let mut worst = (0.0_f64, Complex64::new(0.0, 0.0));
        for j in 0..64 {
            let r = 1.0 - (-40.0 * (j + 1) as f64 / 64.0).exp2();
            for k in 0..64 {
                let theta = std::f64::consts::TAU * k as f64 / 64.0;
                let z = Complex64::from_polar(r, theta);
                let m = self.eval(z)?.norm();
                if m > worst.0 {
                    worst = (m, z);
                }
            }
        }
        if worst.0 >= 1.0 + tol {
            return Err(ExprError::NotSelfMap {
                max_modulus: worst.0,
                at: worst.1,
            });
        }
        Ok(worst.0)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            node: &self.root,
            var: self.var,
        }
        .fmt(f)
    }
}

fn checked(value: Complex64, z: Complex64) -> Result<Complex64, ExprError> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(ExprError::Singularity { z })
    }
}

fn eval_node(node: &Node, z: Complex64) -> Result<Complex64, ExprError> {
    let value = match node {
        Node::Const(c) => *c,
        Node::Var => z,
        Node::Neg(a) => -eval_node(a, z)?,
        Node::Add(a, b) => eval_node(a, z)? + eval_node(b, z)?,
        Node::Sub(a, b) => eval_node(a, z)? - eval_node(b, z)?,
        Node::Mul(a, b) => eval_node(a, z)? * eval_node(b, z)?,
        Node::Div(a, b) => {
            let den = eval_node(b, z)?;
            if den == Complex64::new(0.0, 0.0) {
                return Err(ExprError::Singularity { z });
            }
            eval_node(a, z)? / den
        }
        Node::Pow(a, p) => real_power(eval_node(a, z)?, *p, z)?,
        Node::Log(a) => {
            let u = eval_node(a, z)?;
            if u == Complex64::new(0.0, 0.0) {
                return Err(ExprError::Singularity { z });
            }
            u.ln()
        }
        Node::Exp(a) => eval_node(a, z)?.exp(),
    };
    checked(value, z)
}

pub(crate) fn is_integer_exponent(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() <= MAX_POWI
}

/// Principal branch `u^p = exp(p log u)`; integer exponents use repeated products.
fn real_power(u: Complex64, p: f64, z: Complex64) -> Result<Complex64, ExprError> {
    if u == Complex64::new(0.0, 0.0) {
        return match p {
            p if p > 0.0 => Ok(u),
            p if p == 0.0 => Ok(Complex64::new(1.0, 0.0)),
            _ => Err(ExprError::Singularity { z }),
        };
    }
    if is_integer_exponent(p) {
        return Ok(u.powi(p as i32));
    }
    Ok((u.ln() * p).exp())
}

fn substitute(node: &Arc<Node>, inner: &Arc<Node>) -> Arc<Node> {
    let s = |a: &Arc<Node>| substitute(a, inner);
    match node.as_ref() {
        Node::Const(_) => node.clone(),
        Node::Var => inner.clone(),
        Node::Neg(a) => Arc::new(Node::Neg(s(a))),
        Node::Add(a, b) => Arc::new(Node::Add(s(a), s(b))),
        Node::Sub(a, b) => Arc::new(Node::Sub(s(a), s(b))),
        Node::Mul(a, b) => Arc::new(Node::Mul(s(a), s(b))),
        Node::Div(a, b) => Arc::new(Node::Div(s(a), s(b))),
        Node::Pow(a, p) => Arc::new(Node::Pow(s(a), *p)),
        Node::Log(a) => Arc::new(Node::Log(s(a))),
        Node::Exp(a) => Arc::new(Node::Exp(s(a))),
    }
}

fn polynomial_degree(node: &Node) -> Option<usize> {
    match node {
        Node::Const(_) => Some(0),
        Node::Var => Some(1),
        Node::Neg(a) => polynomial_degree(a),
        Node::Add(a, b) | Node::Sub(a, b) => {
            Some(polynomial_degree(a)?.max(polynomial_degree(b)?))
        }
        Node::Mul(a, b) => Some(polynomial_degree(a)? + polynomial_degree(b)?),
        Node::Div(a, b) => match polynomial_degree(b)? {
            0 => polynomial_degree(a),
            _ => None,
        },
        Node::Pow(a, p) if *p >= 0.0 && is_integer_exponent(*p) => {
            Some(polynomial_degree(a)? * (*p as usize))
        }
        _ => None,
    }
}

struct Printer<'a> {
    node: &'a Node,
    var: char,
}

impl Printer<'_> {
    fn child<'b>(&self, node: &'b Node) -> Printer<'b> {
        Printer {
            node,
            var: self.var,
        }
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x < 0.0 {
        write!(f, "(-{:?})", -x)
    } else {
        write!(f, "{x:?}")
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Const(c) if c.im == 0.0 => write_real(f, c.re),
            Node::Const(c) => {
                write!(f, "(")?;
                write_real(f, c.re)?;
                write!(f, "+")?;
                write_real(f, c.im)?;
                write!(f, "*i)")
            }
            Node::Var => write!(f, "{}", self.var),
            Node::Neg(a) => write!(f, "(-{})", self.child(a)),
            Node::Add(a, b) => write!(f, "({}+{})", self.child(a), self.child(b)),
            Node::Sub(a, b) => write!(f, "({}-{})", self.child(a), self.child(b)),
            Node::Mul(a, b) => write!(f, "({}*{})", self.child(a), self.child(b)),
            Node::Div(a, b) => write!(f, "({}/{})", self.child(a), self.child(b)),
            Node::Pow(a, p) => {
                write!(f, "({})^", self.child(a))?;
                if *p < 0.0 {
                    write!(f, "(-{:?})", -p)
                } else {
                    write!(f, "{p:?}")
                }
            }
            Node::Log(a) => write!(f, "log({})", self.child(a)),
            Node::Exp(a) => write!(f, "exp({})", self.child(a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn parse_and_eval_examples() {
        assert_eq!(parse("1/(1-z)").unwrap().eval(re(0.0)).unwrap(), re(1.0));
        assert_eq!(parse("log(1/(1-z))").unwrap().eval(re(0.0)).unwrap(), re(0.0));
        // 0.25^(-1/2) = 2
        let v = parse("(1-z)^(-0.5)").unwrap().eval(re(0.75)).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0);
    }

    #[test]
    fn eval_examples() {
        let z = Complex64::new(0.3, 0.4);
        assert_eq!(parse("z").unwrap().eval(z).unwrap(), z);
        let v = parse("1/(1-z)").unwrap().eval(re(0.99)).unwrap();
        assert_abs_diff_eq!(v.re, 100.0, epsilon = 1e-10);
        assert_eq!(parse("exp(z)").unwrap().eval(re(0.0)).unwrap(), re(1.0));
    }

    #[test]
    fn singularities_are_errors() {
        let e = parse("1/(1-z)").unwrap();
        assert!(matches!(e.eval(re(1.0)), Err(ExprError::Singularity { .. })));
        let l = parse("log(z)").unwrap();
        assert!(matches!(l.eval(re(0.0)), Err(ExprError::Singularity { .. })));
        let p = parse("z^(-0.5)").unwrap();
        assert!(matches!(p.eval(re(0.0)), Err(ExprError::Singularity { .. })));
    }

    #[test]
    fn imaginary_unit() {
        let e = parse("i*i").unwrap();
        assert_eq!(e.eval(re(0.2)).unwrap(), re(-1.0));
        let e = parse("z + 2*i").unwrap();
        assert_eq!(e.eval(re(0.5)).unwrap(), Complex64::new(0.5, 2.0));
    }

    #[test]
    fn principal_branch_on_disk() {
        // 1 - z has positive real part on the disk, so the cut is never crossed.
        let e = parse("(1-z)^(-0.5)").unwrap();
        let z = Complex64::from_polar(0.999, 3.0);
        let direct = (Complex64::new(1.0, 0.0) - z).powf(-0.5);
        let v = e.eval(z).unwrap();
        assert_abs_diff_eq!((v - direct).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn substitution() {
        let f = parse("1+z").unwrap();
        let phi = parse("z^2").unwrap();
        let comp = f.substitute(&phi);
        assert_eq!(comp.eval(re(0.5)).unwrap(), re(1.25));
    }

    #[test]
    fn polynomial_degrees() {
        assert_eq!(parse("1+z^3").unwrap().polynomial_degree(), Some(3));
        assert_eq!(parse("(z+1)*(z-1)/2").unwrap().polynomial_degree(), Some(2));
        assert_eq!(parse("1/(1-z)").unwrap().polynomial_degree(), None);
        assert_eq!(parse("z^0.5").unwrap().polynomial_degree(), None);
    }

    #[test]
    fn self_map_check() {
        assert!(parse("z").unwrap().check_self_map(1e-9).is_ok());
        assert!(parse("z^2/2 + 0.25").unwrap().check_self_map(1e-9).is_ok());
        assert!(matches!(
            parse("1.01*z").unwrap().check_self_map(1e-9),
            Err(ExprError::NotSelfMap { .. })
        ));
    }
}
