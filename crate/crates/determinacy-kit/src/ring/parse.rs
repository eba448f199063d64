//! Recursive-descent parser for the polynomial grammar: integer literals,
//! declared variable names, `+ - * ^ ( )`, with `^` tighter than `*` tighter
//! than `+`/`-`. An explicit `*` is required between factors; unary minus is
//! allowed. Rational literals may be written `a/b` over the rationals.

use super::{Poly, RingCtx, RingError};
use num_bigint::BigInt;
use num_traits::Zero;

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    ctx: &'a RingCtx,
}

pub fn parse_poly(text: &str, ctx: &RingCtx) -> Result<Poly, RingError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        ctx,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> RingError {
        RingError::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && (self.text[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ctx.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ctx.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, RingError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ctx.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, RingError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(self.ctx.neg(&f));
        }
        let mut base = self.base()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent must be a nonnegative integer"))?;
            base = self.power(&base, e);
        }
        Ok(base)
    }

    fn power(&self, f: &Poly, e: u32) -> Poly {
        let mut acc = self.ctx.constant(self.ctx.field.one());
        for _ in 0..e {
            acc = self.ctx.mul(&acc, f);
        }
        acc
    }

    fn base(&mut self) -> Result<Poly, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                // optional `a/b` rational literal
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let dpos = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(RingError::SyntaxError {
                            pos: dpos,
                            msg: "zero denominator".into(),
                        });
                    }
                    let num = self.ctx.field.from_bigint(&n);
                    let den = self.ctx.field.from_bigint(&d);
                    let q = num.div(&den).map_err(|_| RingError::SyntaxError {
                        pos: dpos,
                        msg: "denominator vanishes in this field".into(),
                    })?;
                    return Ok(self.ctx.constant(q));
                }
                Ok(self.ctx.constant(self.ctx.field.from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    /// Matches the longest declared variable name at the current position.
    /// Declared names may contain parentheses (e.g. `u(3)`), so plain
    /// identifier scanning is only used to report unknown names.
    fn variable(&mut self) -> Result<Poly, RingError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let mut best: Option<(usize, usize)> = None; // (length, var index)
        for (i, v) in self.ctx.vars.iter().enumerate() {
            let vb = v.as_bytes();
            if rest.starts_with(vb) && best.map(|(l, _)| vb.len() > l).unwrap_or(true) {
                best = Some((vb.len(), i));
            }
        }
        match best {
            Some((len, i)) => {
                self.pos += len;
                Ok(self.ctx.var_poly(i))
            }
            None => {
                let start = self.pos;
                let mut end = self.pos;
                while end < self.text.len()
                    && ((self.text[end] as char).is_ascii_alphanumeric() || self.text[end] == b'_')
                {
                    end += 1;
                }
                Err(RingError::UnknownVariable {
                    name: String::from_utf8_lossy(&self.text[start..end]).into_owned(),
                    pos: start,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::ring::Ordering;

    fn ctx_gf2() -> RingCtx {
        RingCtx::new(
            FieldSpec::prime(2).unwrap(),
            vec!["x".into(), "y".into()],
            Ordering::local(),
        )
        .unwrap()
    }

    #[test]
    fn parses_cusp() {
        let ctx = ctx_gf2();
        let f = parse_poly("x^2 + y^3", &ctx).unwrap();
        assert_eq!(ctx.render_poly(&f), "x^2+y^3");
    }

    #[test]
    fn coefficients_reduce_into_field() {
        let ctx = ctx_gf2();
        let f = parse_poly("3*y^2", &ctx).unwrap();
        assert_eq!(ctx.render_poly(&f), "y^2");
        assert!(parse_poly("2*x", &ctx).unwrap().is_zero());
    }

    #[test]
    fn error_positions() {
        let ctx = ctx_gf2();
        match parse_poly("x + ", &ctx) {
            Err(RingError::SyntaxError { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_poly("x + z", &ctx) {
            Err(RingError::UnknownVariable { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown variable, got {other:?}"),
        }
    }

    #[test]
    fn implicit_exponents_rejected() {
        let ctx = ctx_gf2();
        assert!(parse_poly("x2", &ctx).is_err());
        assert!(parse_poly("x y", &ctx).is_err());
    }

    #[test]
    fn parenthesized_variable_names() {
        let ctx = RingCtx::new(
            FieldSpec::Rationals,
            vec!["x".into(), "u(3)".into()],
            Ordering::global(),
        )
        .unwrap();
        let f = parse_poly("u(3)*x + x*(u(3)+1)", &ctx).unwrap();
        assert_eq!(ctx.render_poly(&f), "2*x*u(3)+x");
    }

    #[test]
    fn unary_minus_and_precedence() {
        let ctx = RingCtx::new(
            FieldSpec::Rationals,
            vec!["x".into(), "y".into()],
            Ordering::global(),
        )
        .unwrap();
        let f = parse_poly("-x^2 + 2*x*y^2", &ctx).unwrap();
        let g = parse_poly("2*x*y^2 - x^2", &ctx).unwrap();
        assert_eq!(f, g);
        // ^ binds tighter than *
        let h = parse_poly("2*x^2", &ctx).unwrap();
        assert_eq!(ctx.render_poly(&h), "2*x^2");
    }

    #[test]
    fn rational_literals() {
        let ctx = RingCtx::new(
            FieldSpec::Rationals,
            vec!["x".into()],
            Ordering::global(),
        )
        .unwrap();
        let f = parse_poly("1/3*x + 2/3*x", &ctx).unwrap();
        assert_eq!(ctx.render_poly(&f), "x");
    }

    #[test]
    fn render_parse_round_trip() {
        let ctx = ctx_gf2();
        for text in ["x^2+y^3", "x*y+y^2", "1", "0", "x^2+x*y+y^2"] {
            let f = parse_poly(text, &ctx).unwrap();
            let g = parse_poly(&ctx.render_poly(&f), &ctx).unwrap();
            assert_eq!(f, g);
        }
    }
}
