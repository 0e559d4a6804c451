//! Text syntax: `+ - * / ^`, parentheses, integer and `p/q` constants,
//! identifiers with optional trailing primes (`u'`, `v''`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::polynomial::Poly;
use super::vars::{normalize_primes, VarTable};
use super::PolyError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>, PolyError> {
    let text = normalize_primes(text);
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Num(digits.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(PolyError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = if self.eat('-') { -self.term()? } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let divisor = self.power()?;
                let c = divisor
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| PolyError::Parse("division by a non-constant or zero".into()))?;
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(PolyError::Parse("exponent must be a nonnegative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        let n = self.vars.len();
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Poly::constant(n, BigRational::from_integer(v)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Poly::var(n, self.vars.require(&name)?))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(PolyError::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            other => Err(PolyError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` over the variables of `vars`.
pub fn parse_poly(text: &str, vars: &VarTable) -> Result<Poly, PolyError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, vars };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(PolyError::Parse(format!("trailing input in `{text}`")));
    }
    Ok(p)
}

/// Identifiers appearing in `text`, in order of first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>, PolyError> {
    let mut out: Vec<String> = Vec::new();
    for t in tokenize(text)? {
        if let Token::Ident(name) = t {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::polynomial::rat;

    #[test]
    fn parses_and_prints() {
        let vars = VarTable::new("t", &["a", "c", "u", "v", "v'"]).unwrap();
        let p = parse_poly("u - a + c*v", &vars).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(parse_poly(&p.display(&vars), &vars).unwrap(), p);
        let q = parse_poly("(a+c)^2 - 2*a*c - 1/2*v′", &vars).unwrap();
        assert_eq!(q, parse_poly("a^2 + c^2 - v'/2", &vars).unwrap());
        assert_eq!(q.eval(&[rat(1), rat(1), rat(0), rat(0), rat(2)]), rat(1));
    }

    #[test]
    fn rejects_bad_input() {
        let vars = VarTable::new("t", &["x"]).unwrap();
        assert!(matches!(parse_poly("x + y", &vars), Err(PolyError::UnknownVariable(_))));
        assert!(parse_poly("x / x", &vars).is_err());
        assert!(parse_poly("(x", &vars).is_err());
        assert_eq!(identifiers("u'' - a*c").unwrap(), vec!["u''", "a", "c"]);
    }
}
