//! Recursive-descent parser for polynomial expressions: `+ - * ^ ( )`,
//! integer and `p/q` literals, variable names. Accepts everything the
//! canonical text form produces.

use crate::error::{AlgebraError, Result};
use crate::poly::Poly;
use crate::ring::RingContext;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(AlgebraError::Parse(format!("{msg} at offset {}", self.pos)))
    }
}

pub fn parse_poly(ctx: &RingContext, text: &str) -> Result<Poly> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let p = expr(ctx, &mut cur)?;
    if cur.peek().is_some() {
        return cur.err("trailing input");
    }
    Ok(p)
}

fn expr(ctx: &RingContext, cur: &mut Cursor) -> Result<Poly> {
    let mut acc = if cur.peek() == Some(b'-') {
        cur.bump();
        ctx.neg(&term(ctx, cur)?)
    } else {
        if cur.peek() == Some(b'+') {
            cur.bump();
        }
        term(ctx, cur)?
    };
    loop {
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                let t = term(ctx, cur)?;
                acc = ctx.add(&acc, &t);
            }
            Some(b'-') => {
                cur.bump();
                let t = term(ctx, cur)?;
                acc = ctx.sub(&acc, &t);
            }
            _ => return Ok(acc),
        }
    }
}

fn term(ctx: &RingContext, cur: &mut Cursor) -> Result<Poly> {
    let mut acc = power(ctx, cur)?;
    loop {
        match cur.peek() {
            Some(b'*') => {
                cur.bump();
                let p = power(ctx, cur)?;
                acc = ctx.mul(&acc, &p);
            }
            // implicit multiplication before '(' or an identifier
            Some(c) if c == b'(' || c.is_ascii_alphabetic() || c == b'_' => {
                let p = power(ctx, cur)?;
                acc = ctx.mul(&acc, &p);
            }
            _ => return Ok(acc),
        }
    }
}

fn power(ctx: &RingContext, cur: &mut Cursor) -> Result<Poly> {
    let base = atom(ctx, cur)?;
    if cur.peek() == Some(b'^') {
        cur.bump();
        let n = integer(cur)?;
        if n < 0 {
            return cur.err("negative exponent");
        }
        return Ok(ctx.pow(&base, n as u32));
    }
    Ok(base)
}

fn atom(ctx: &RingContext, cur: &mut Cursor) -> Result<Poly> {
    match cur.peek() {
        Some(b'(') => {
            cur.bump();
            let p = expr(ctx, cur)?;
            if cur.peek() != Some(b')') {
                return cur.err("expected `)`");
            }
            cur.bump();
            Ok(p)
        }
        Some(b'-') => {
            cur.bump();
            Ok(ctx.neg(&atom(ctx, cur)?))
        }
        Some(c) if c.is_ascii_digit() => {
            let n = integer(cur)?;
            if cur.peek() == Some(b'/') {
                cur.bump();
                let d = integer(cur)?;
                let ratio = ctx.field().from_ratio(n, d)?;
                Ok(ctx.constant(ratio))
            } else {
                Ok(ctx.int(n))
            }
        }
        Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
            let name = ident(cur);
            ctx.var(&name)
        }
        _ => cur.err("expected polynomial atom"),
    }
}

fn integer(cur: &mut Cursor) -> Result<i64> {
    cur.skip_ws();
    let start = cur.pos;
    if cur.bytes.get(cur.pos) == Some(&b'-') {
        cur.pos += 1;
    }
    while cur
        .bytes
        .get(cur.pos)
        .map(|b| b.is_ascii_digit())
        .unwrap_or(false)
    {
        cur.pos += 1;
    }
    if cur.pos == start || (cur.pos == start + 1 && cur.bytes[start] == b'-') {
        return cur.err("expected integer");
    }
    std::str::from_utf8(&cur.bytes[start..cur.pos])
        .unwrap()
        .parse::<i64>()
        .map_err(|e| AlgebraError::Parse(e.to_string()))
}

fn ident(cur: &mut Cursor) -> String {
    cur.skip_ws();
    let start = cur.pos;
    while cur
        .bytes
        .get(cur.pos)
        .map(|b| b.is_ascii_alphanumeric() || *b == b'_')
        .unwrap_or(false)
    {
        cur.pos += 1;
    }
    String::from_utf8_lossy(&cur.bytes[start..cur.pos]).to_string()
}

#[cfg(test)]
mod tests {
    use crate::field::FieldSpec;
    use crate::poly::MonomialOrder;
    use crate::ring::RingContext;

    #[test]
    fn roundtrip_canonical_form() {
        let ctx =
            RingContext::new(FieldSpec::Rationals, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        for s in ["3*x^2*y - 1/2", "x^2*y - x + 1", "0", "-x", "2/3"] {
            let p = ctx.parse_poly(s).unwrap();
            assert_eq!(ctx.render(&p), s);
        }
    }

    #[test]
    fn parses_expressions() {
        let ctx =
            RingContext::new(FieldSpec::Rationals, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let p = ctx.parse_poly("(x + y)^2 - x^2 - y^2").unwrap();
        assert_eq!(ctx.render(&p), "2*x*y");
        assert!(ctx.parse_poly("x + ").is_err());
        assert!(ctx.parse_poly("z").is_err());
    }
}
