//! Coefficient expressions: rationals, coordinates, `+ - *`, division by
//! constants, integer powers, parentheses and `cos(θ)`, `sin(θ)` of circle
//! coordinates.

use num_traits::{One, Zero};
use srgeom::coordfield::{Chart, SymExpr, VarKind};
use srgeom::exact::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based character column within the expression.
    pub column: usize,
    pub message: String,
}

pub fn parse_expr(text: &str, chart: &Chart) -> Result<SymExpr, ExprError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        chart,
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<SymExpr, ExprError> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<SymExpr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::one() / c)),
                    Some(_) => {
                        return Err(ExprError {
                            column: at + 1,
                            message: "division by zero".into(),
                        })
                    }
                    None => {
                        return Err(ExprError {
                            column: at + 1,
                            message: "division by a non-constant expression".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SymExpr, ExprError> {
        if self.eat('-') {
            let e = self.unary()?;
            return Ok(&SymExpr::zero() - &e);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymExpr, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let exp: u32 = digits.parse().map_err(|_| ExprError {
            column: start + 1,
            message: "expected a non-negative integer exponent".into(),
        })?;
        let mut out = SymExpr::one();
        for _ in 0..exp {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<SymExpr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<SymExpr, ExprError> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c == '.' || c == 'e' || c == 'E')
        {
            return Err(ExprError {
                column: start + 1,
                message: "non-rational literal; write exact values as p/q".into(),
            });
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let value = parse_rational(&digits).map_err(|e| ExprError {
            column: start + 1,
            message: e.to_string(),
        })?;
        Ok(SymExpr::constant(value))
    }

    fn identifier(&mut self) -> Result<SymExpr, ExprError> {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        let at = |message: String| ExprError {
            column: start + 1,
            message,
        };
        if name == "cos" || name == "sin" {
            if !self.eat('(') {
                return Err(self.error(format!("expected '(' after {name}")));
            }
            self.skip_ws();
            let arg_start = self.pos;
            while self
                .chars
                .get(self.pos)
                .is_some_and(|&c| c.is_alphanumeric() || c == '_')
            {
                self.pos += 1;
            }
            let arg: String = self.chars[arg_start..self.pos].iter().collect();
            let i = match self.chart.index_of(&arg) {
                Some(i) if self.chart.kinds[i] == VarKind::Angle => i,
                _ => {
                    return Err(ExprError {
                        column: arg_start + 1,
                        message: format!("{name} takes a circle coordinate, found {arg:?}"),
                    })
                }
            };
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(if name == "cos" {
                SymExpr::var(i)
            } else {
                SymExpr::sin(i)
            });
        }
        match self.chart.index_of(&name) {
            Some(i) if self.chart.kinds[i] == VarKind::Line => Ok(SymExpr::var(i)),
            Some(_) => Err(at(format!(
                "circle coordinate {name} may only appear as cos({name}) or sin({name})"
            ))),
            None => Err(at(format!("unknown coordinate {name:?}"))),
        }
    }
}
