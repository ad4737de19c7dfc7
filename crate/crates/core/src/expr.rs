//! Arithmetic expressions for boundary data.
//!
//! Grammar: `+  -  *  /  ^` with the usual precedence, unary minus, the
//! functions `abs(e)`, `max(a, b)`, `min(a, b)`, parentheses, numeric
//! literals, and the variables `x1 x2 x3 t`. `^` is right associative and
//! binds tighter than unary minus. The unicode minus and times signs are
//! accepted as synonyms for `-` and `*`.

use crate::scalar::Real;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at byte {pos}")]
    UnexpectedChar { pos: usize, ch: char },

    #[error("expression ends in the middle of a term")]
    UnexpectedEnd,

    #[error("unknown name {0:?}: variables are x1 x2 x3 t, functions abs max min")]
    UnknownName(String),

    #[error("unparseable number {0:?}")]
    BadNumber(String),

    #[error("trailing input starting at byte {0}")]
    TrailingInput(usize),

    #[error("{name} takes {need} argument(s), got {got}")]
    WrongArity { name: String, need: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    /// Spatial coordinate, 0-based axis.
    Var(usize),
    Time,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Abs(Box<Node>),
    Max(Box<Node>, Box<Node>),
    Min(Box<Node>, Box<Node>),
}

/// A parsed expression in the variables `x1 x2 x3 t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    src: String,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut p = Parser { chars: &chars, at: 0 };
        p.skip_ws();
        let root = p.add()?;
        p.skip_ws();
        if p.at < p.chars.len() {
            return Err(ParseError::TrailingInput(p.chars[p.at].0));
        }
        Ok(Expr { root, src: src.to_string() })
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    /// Whether the expression mentions `t`.
    pub fn uses_time(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Time => true,
                Node::Num(_) | Node::Var(_) => false,
                Node::Neg(a) | Node::Abs(a) => walk(a),
                Node::Add(a, b)
                | Node::Sub(a, b)
                | Node::Mul(a, b)
                | Node::Div(a, b)
                | Node::Pow(a, b)
                | Node::Max(a, b)
                | Node::Min(a, b) => walk(a) || walk(b),
            }
        }
        walk(&self.root)
    }

    pub fn eval<T: Real>(&self, x: &[T; 3], t: T) -> T {
        fn go<T: Real>(n: &Node, x: &[T; 3], t: T) -> T {
            match n {
                Node::Num(c) => T::of(*c),
                Node::Var(k) => x[*k],
                Node::Time => t,
                Node::Neg(a) => -go(a, x, t),
                Node::Add(a, b) => go(a, x, t) + go(b, x, t),
                Node::Sub(a, b) => go(a, x, t) - go(b, x, t),
                Node::Mul(a, b) => go(a, x, t) * go(b, x, t),
                Node::Div(a, b) => go(a, x, t) / go(b, x, t),
                Node::Pow(a, b) => go(a, x, t).powf(go(b, x, t)),
                Node::Abs(a) => go(a, x, t).abs(),
                Node::Max(a, b) => go(a, x, t).max(go(b, x, t)),
                Node::Min(a, b) => go(a, x, t).min(go(b, x, t)),
            }
        }
        go(&self.root, x, t)
    }
}

struct Parser<'a> {
    chars: &'a [(usize, char)],
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.at += 1;
                Ok(())
            }
            Some(c) => Err(ParseError::UnexpectedChar { pos: self.chars[self.at].0, ch: c }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn add(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.mul()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.mul()?));
                }
                Some('-') | Some('\u{2212}') => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.mul()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn mul(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') | Some('\u{d7}') => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some('/') => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('-') | Some('\u{2212}') => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            // right associative, exponent may carry its own sign
            let exp = self.unary()?;
            Ok(Node::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ParseError::UnexpectedEnd),
            Some('(') => {
                self.bump();
                let inner = self.add()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.name(),
            Some(c) => Err(ParseError::UnexpectedChar { pos: self.chars[self.at].0, ch: c }),
        }
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.bump();
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            let mark = self.at;
            self.bump();
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.bump();
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
            } else {
                // not an exponent after all, e.g. "2e" cut short
                self.at = mark;
            }
        }
        let text: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        text.parse::<f64>()
            .map(Node::Num)
            .map_err(|_| ParseError::BadNumber(text))
    }

    fn name(&mut self) -> Result<Node, ParseError> {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        let word: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        match word.as_str() {
            "x1" => Ok(Node::Var(0)),
            "x2" => Ok(Node::Var(1)),
            "x3" => Ok(Node::Var(2)),
            "t" => Ok(Node::Time),
            "abs" => {
                let args = self.args(&word)?;
                self.arity(&word, 1, args.len())?;
                let mut it = args.into_iter();
                Ok(Node::Abs(Box::new(it.next().unwrap())))
            }
            "max" | "min" => {
                let args = self.args(&word)?;
                self.arity(&word, 2, args.len())?;
                let mut it = args.into_iter();
                let a = Box::new(it.next().unwrap());
                let b = Box::new(it.next().unwrap());
                Ok(if word == "max" { Node::Max(a, b) } else { Node::Min(a, b) })
            }
            _ => Err(ParseError::UnknownName(word)),
        }
    }

    fn args(&mut self, _name: &str) -> Result<Vec<Node>, ParseError> {
        self.expect('(')?;
        let mut out = vec![self.add()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                    out.push(self.add()?);
                }
                Some(')') => {
                    self.bump();
                    return Ok(out);
                }
                Some(c) => {
                    return Err(ParseError::UnexpectedChar {
                        pos: self.chars[self.at].0,
                        ch: c,
                    })
                }
                None => return Err(ParseError::UnexpectedEnd),
            }
        }
    }

    fn arity(&self, name: &str, need: usize, got: usize) -> Result<(), ParseError> {
        if need == got {
            Ok(())
        } else {
            Err(ParseError::WrongArity { name: name.to_string(), need, got })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ev(src: &str, x: [f64; 3], t: f64) -> f64 {
        Expr::parse(src).unwrap().eval(&x, t)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2+3*4", [0.0; 3], 0.0), 14.0);
        assert_eq!(ev("2*3+4", [0.0; 3], 0.0), 10.0);
        assert_eq!(ev("2^3^2", [0.0; 3], 0.0), 512.0);
        assert_eq!(ev("-2^2", [0.0; 3], 0.0), -4.0);
        assert_eq!(ev("(2+3)*4", [0.0; 3], 0.0), 20.0);
        assert_eq!(ev("8/4/2", [0.0; 3], 0.0), 1.0);
        assert_eq!(ev("2^-1", [0.0; 3], 0.0), 0.5);
    }

    #[test]
    fn variables_and_functions() {
        assert_abs_diff_eq!(
            ev("x1^2/2 + x2*x3 - t", [3.0, 2.0, 5.0], 1.0),
            4.5 + 10.0 - 1.0
        );
        assert_eq!(ev("abs(-3)", [0.0; 3], 0.0), 3.0);
        assert_eq!(ev("max(0, x1 - 0.5)", [0.3, 0.0, 0.0], 0.0), 0.0);
        assert_eq!(ev("max(0, x1 - 0.5)", [0.9, 0.0, 0.0], 0.0), 0.4);
        assert_eq!(ev("min(x1, x2)", [0.9, 0.2, 0.0], 0.0), 0.2);
        assert_eq!(ev("1.5e-1 + 2E2", [0.0; 3], 0.0), 200.15);
    }

    #[test]
    fn unicode_operators_are_synonyms() {
        assert_eq!(ev("x1 \u{d7} 2 \u{2212} 1", [3.0, 0.0, 0.0], 0.0), 5.0);
        assert_eq!(ev("\u{2212}x1", [3.0, 0.0, 0.0], 0.0), -3.0);
    }

    #[test]
    fn time_detection() {
        assert!(Expr::parse("x1 + t^2").unwrap().uses_time());
        assert!(!Expr::parse("x1 + x2").unwrap().uses_time());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(Expr::parse("foo(2)"), Err(ParseError::UnknownName(_))));
        assert!(matches!(Expr::parse("2 +"), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(Expr::parse("(1"), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(Expr::parse("1 2"), Err(ParseError::TrailingInput(_))));
        assert!(matches!(Expr::parse("max(1)"), Err(ParseError::WrongArity { .. })));
        assert!(matches!(Expr::parse("abs(1, 2)"), Err(ParseError::WrongArity { .. })));
        assert!(matches!(Expr::parse("#"), Err(ParseError::UnexpectedChar { .. })));
    }
}
