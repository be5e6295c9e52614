// Recursive-descent parser for the symbol grammar:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' real)?
//   base   := number | 'i' | VAR | 'log' '(' expr ')' | 'exp' '(' expr ')' | '(' expr ')'
//   real   := ['-'] number | '(' ['-'] number ')'

use std::sync::Arc;

use num_complex::Complex64;

use super::{eval_node, Expr, ExprError, Node};

const PROBE_POINTS: usize = 16;

/// Parses an expression in the variable `z`.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    parse_in(text, 'z')
}

/// Parses an expression in the given single-letter variable.
pub fn parse_in(text: &str, var: char) -> Result<Expr, ExprError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        var,
    };
    let root = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    check_denominators(&root, var)?;
    Ok(Expr {
        root,
        source: text.to_string(),
        var,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    var: char,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Arc<Node>, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Arc::new(Node::Add(lhs, self.term()?));
            } else if self.eat(b'-') {
                lhs = Arc::new(Node::Sub(lhs, self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Arc<Node>, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Arc::new(Node::Mul(lhs, self.factor()?));
            } else if self.eat(b'/') {
                lhs = Arc::new(Node::Div(lhs, self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Arc<Node>, ExprError> {
        if self.eat(b'-') {
            return Ok(Arc::new(Node::Neg(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let p = self.real()?;
            return Ok(Arc::new(Node::Pow(base, p)));
        }
        Ok(base)
    }

    fn real(&mut self) -> Result<f64, ExprError> {
        let parenthesized = self.eat(b'(');
        let negative = self.eat(b'-');
        self.skip_ws();
        let magnitude = self
            .number()?
            .ok_or_else(|| self.error("expected a real exponent"))?;
        if parenthesized {
            self.expect(b')')?;
        }
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn number(&mut self) -> Result<Option<f64>, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Ok(None);
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // Not an exponent; leave the letter for the caller.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>()
            .map(Some)
            .map_err(|_| ExprError::Syntax {
                pos: start,
                message: format!("malformed number `{text}`"),
            })
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Arc<Node>, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let value = self
                    .number()?
                    .ok_or_else(|| self.error("expected a number"))?;
                Ok(Arc::new(Node::Const(Complex64::new(value, 0.0))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let pos = self.pos;
                let name = self.identifier();
                match name.as_str() {
                    "i" => Ok(Arc::new(Node::Const(Complex64::new(0.0, 1.0)))),
                    "log" | "exp" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(Arc::new(if name == "log" {
                            Node::Log(arg)
                        } else {
                            Node::Exp(arg)
                        }))
                    }
                    _ if name.len() == 1 && name.starts_with(self.var) => Ok(Arc::new(Node::Var)),
                    _ => Err(ExprError::UnknownIdentifier { pos, name }),
                }
            }
            Some(_) => Err(self.error("expected a number, variable, function or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Deterministic probe points spread over `|z| <= 0.9` (golden-angle spiral).
pub(crate) fn probe_points() -> impl Iterator<Item = Complex64> {
    (0..PROBE_POINTS).map(|k| {
        let r = 0.9 * ((k as f64 + 0.5) / PROBE_POINTS as f64).sqrt();
        Complex64::from_polar(r, 2.399_963_229_728_653 * k as f64 + 0.1)
    })
}

fn check_denominators(node: &Arc<Node>, var: char) -> Result<(), ExprError> {
    match node.as_ref() {
        Node::Const(_) | Node::Var => Ok(()),
        Node::Neg(a) | Node::Pow(a, _) | Node::Log(a) | Node::Exp(a) => {
            check_denominators(a, var)
        }
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
            check_denominators(a, var)?;
            check_denominators(b, var)
        }
        Node::Div(a, b) => {
            check_denominators(a, var)?;
            check_denominators(b, var)?;
            let nonzero = probe_points()
                .any(|z| matches!(eval_node(b, z), Ok(v) if v != Complex64::new(0.0, 0.0)));
            if nonzero {
                Ok(())
            } else {
                Err(ExprError::ZeroDenominator {
                    denominator: Expr::from_arc(b.clone(), var).to_string(),
                })
            }
        }
    }
}
