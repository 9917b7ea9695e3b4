//! Polynomial input: an expression grammar and a `j i c` monomial list, both
//! with an optional `p <modulus>` header line and `#` comments.

use crate::error::{Error, Result};
use crate::ffield::PrimeField;
use crate::slopecore::BiPoly;

/// A parsed input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDocument {
    pub modulus: u64,
    pub polynomial: BiPoly,
    pub monomial_list: bool,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn strip_comment(l: &str) -> &str {
    l.split('#').next().unwrap_or("")
}

/// Parses a whole document. `modulus` overrides or supplies the header.
pub fn parse_document(text: &str, modulus: Option<u64>) -> Result<PolyDocument> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(n, l)| (n + 1, strip_comment(l))).filter(|(_, l)| !l.trim().is_empty()).collect();
    let mut body = &lines[..];
    let mut header = None;
    if let Some(&(n, l)) = lines.first() {
        let mut words = l.split_whitespace();
        if words.next() == Some("p") {
            let v = words.next().ok_or_else(|| perr(n, 1, "missing modulus after 'p'"))?;
            let p: u64 = v.parse().map_err(|_| perr(n, 3, format!("bad modulus '{v}'")))?;
            if words.next().is_some() {
                return Err(perr(n, 1, "trailing text after modulus"));
            }
            header = Some(p);
            body = &lines[1..];
        }
    }
    let p = modulus.or(header).ok_or_else(|| perr(1, 1, "no modulus: add a 'p <modulus>' line or pass -p"))?;
    let field = PrimeField::new(p)?;
    let is_list = !body.is_empty()
        && body.iter().all(|(_, l)| {
            let w: Vec<&str> = l.split_whitespace().collect();
            w.len() == 3 && w.iter().all(|t| t.parse::<i64>().is_ok())
        });
    let polynomial = if is_list {
        parse_monomial_list(field, body)?
    } else {
        let mut acc = BiPoly::zero(field);
        // Expression lines are joined; a line may continue the previous one.
        let mut src = String::new();
        let mut starts = Vec::new();
        for (n, l) in body {
            starts.push((src.len(), *n));
            src.push_str(l);
            src.push('\n');
        }
        if !src.trim().is_empty() {
            acc = Parser::new(field, &src, &starts).parse_all()?;
        }
        acc
    };
    Ok(PolyDocument { modulus: p, polynomial, monomial_list: is_list })
}

fn parse_monomial_list(field: PrimeField, body: &[(usize, &str)]) -> Result<BiPoly> {
    let mut f = BiPoly::zero(field);
    for &(n, l) in body {
        let w: Vec<i64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
        let (j, i, c) = (w[0], w[1], w[2]);
        if i < 0 {
            return Err(perr(n, 1, "negative y-exponent"));
        }
        f.add_term(i, j, field.from_i64(c));
    }
    Ok(f)
}

/// Parses a single expression.
pub fn parse_poly(text: &str, field: PrimeField) -> Result<BiPoly> {
    Parser::new(field, text, &[(0, 1)]).parse_all()
}

/// One `j i c` line per term, coefficients in `[0, p)`.
pub fn to_monomial_list(f: &BiPoly) -> String {
    let mut s = format!("p {}\n", f.field().modulus());
    for ((i, j), c) in f.terms().rev() {
        s.push_str(&format!("{j} {i} {c}\n"));
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i128),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Parser<'a> {
    field: PrimeField,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    src: &'a str,
    starts: &'a [(usize, usize)],
}

impl<'a> Parser<'a> {
    fn new(field: PrimeField, src: &'a str, starts: &'a [(usize, usize)]) -> Self {
        Parser { field, toks: Vec::new(), pos: 0, src, starts }
    }

    fn locate(&self, off: usize) -> (usize, usize) {
        let (start, line) = self.starts.iter().rev().find(|(s, _)| *s <= off).copied().unwrap_or((0, 1));
        let before = &self.src[start..off];
        match before.rfind('\n') {
            Some(k) => (line + before[..k].matches('\n').count() + 1, off - start - k),
            None => (line, off - start + 1),
        }
    }

    fn err_at(&self, off: usize, msg: impl Into<String>) -> Error {
        let (l, c) = self.locate(off);
        perr(l, c, msg)
    }

    fn lex(&mut self) -> Result<()> {
        let b = self.src.as_bytes();
        let mut k = 0;
        while k < b.len() {
            let c = b[k] as char;
            let tok = match c {
                ' ' | '\t' | '\r' | '\n' => {
                    k += 1;
                    continue;
                }
                '0'..='9' => {
                    let s = k;
                    while k < b.len() && b[k].is_ascii_digit() {
                        k += 1;
                    }
                    let v: i128 = self.src[s..k].parse().map_err(|_| self.err_at(s, "number too large"))?;
                    self.toks.push((Tok::Num(v), s));
                    continue;
                }
                'x' | 'X' => Tok::X,
                'y' | 'Y' => Tok::Y,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(self.err_at(k, format!("unexpected character '{c}'"))),
            };
            self.toks.push((tok, k));
            k += 1;
        }
        Ok(())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.trim_end().len(), |t| t.1)
    }

    fn parse_all(mut self) -> Result<BiPoly> {
        self.lex()?;
        let f = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(self.err_at(self.offset(), "unexpected token"));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.peek() {
            Some(Tok::Num(v)) => *v,
            _ => return Err(self.err_at(self.offset(), "expected an integer exponent")),
        };
        self.pos += 1;
        if e > i64::MAX as i128 / 2 {
            return Err(self.err_at(at, "exponent too large"));
        }
        let e = e as i64;
        if !neg {
            return self.pow_nonneg(&base, e, at);
        }
        // Negative powers are allowed for x-monomials only.
        let mut terms = base.terms();
        match (terms.next(), terms.next()) {
            (Some(((0, j), c)), None) => {
                let inv = self.field.inv(c);
                let ce = self.field.pow(inv, e as u64);
                Ok(BiPoly::monomial(self.field, 0, -j * e, ce))
            }
            _ => Err(self.err_at(at, "negative exponent on something other than a power of x")),
        }
    }

    fn pow_nonneg(&self, base: &BiPoly, e: i64, at: usize) -> Result<BiPoly> {
        let mut terms = base.terms();
        if let (Some(((i, j), c)), None) = (terms.next(), terms.next()) {
            return Ok(BiPoly::monomial(self.field, i * e, j * e, self.field.pow(c, e as u64)));
        }
        if e > 4096 {
            return Err(self.err_at(at, "exponent too large for a non-monomial base"));
        }
        Ok(base.pow(e as u32))
    }

    fn atom(&mut self) -> Result<BiPoly> {
        let at = self.offset();
        let f = self.field;
        let t = self.peek().cloned();
        self.pos += 1;
        match t {
            Some(Tok::Num(v)) => Ok(BiPoly::constant(f, f.from_i128(v))),
            Some(Tok::X) => Ok(BiPoly::x(f)),
            Some(Tok::Y) => Ok(BiPoly::y(f)),
            Some(Tok::Minus) => Ok(self.power()?.neg()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err_at(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                Err(self.err_at(at, "expected a number, x, y or '('"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn expression_example() {
        let g = parse_poly("y^2 + (1+1)*x*y + x", f(5)).unwrap();
        assert_eq!(g, BiPoly::from_terms(f(5), [(2, 0, 1), (1, 1, 2), (0, 1, 1)]));
    }

    #[test]
    fn monomial_list_example() {
        let d = parse_document("p 5\n3 7 4\n0 0 1\n", None).unwrap();
        assert!(d.monomial_list);
        assert_eq!(d.polynomial, BiPoly::from_terms(f(5), [(7, 3, 4), (0, 0, 1)]));
    }

    #[test]
    fn header_comments_and_negative_exponents() {
        let d = parse_document("# a comment\np 7\nx^-2*y + 3 # trailing\n - x\n", None).unwrap();
        assert_eq!(d.modulus, 7);
        assert_eq!(d.polynomial, BiPoly::from_terms(f(7), [(1, -2, 1), (0, 0, 3), (0, 1, -1)]));
        assert_eq!(parse_document("y - 1", Some(3)).unwrap().polynomial, BiPoly::from_terms(f(3), [(1, 0, 1), (0, 0, 2)]));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_document("p 7\ny + $", None).unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 5, msg: "unexpected character '$'".into() });
        assert!(matches!(parse_document("p 8\ny", None), Err(Error::ModulusNotPrime(8))));
        assert!(matches!(parse_document("y", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("y^-1", f(7)), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(y + 1", f(7)), Err(Error::Parse { .. })));
    }

    #[test]
    fn print_parse_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let field = f([2, 101, 65537][rng.gen_range(0..3)]);
            let mut g = BiPoly::zero(field);
            for _ in 0..rng.gen_range(0..8) {
                g.add_term(rng.gen_range(0..6), rng.gen_range(-3..6), rng.gen_range(0..field.modulus()));
            }
            assert_eq!(parse_poly(&g.to_string(), field).unwrap(), g);
            assert_eq!(parse_document(&to_monomial_list(&g), None).unwrap().polynomial, g);
        }
    }
}
