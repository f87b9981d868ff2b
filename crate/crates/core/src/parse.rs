//! Concrete syntax for commutator expressions.
//!
//! ```text
//! expr     := factor { "*" factor } ;
//! factor   := base [ "^" exponent ] ;
//! base     := GENERATOR | "[" expr "," expr "]" | "(" expr ")" ;
//! exponent := "-"? INTEGER | base ;
//! ```
//!
//! An integer exponent is a power, a base exponent is conjugation. Whitespace
//! is insignificant. Generators must be declared in the [`Alphabet`].

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, CommExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Star,
    Caret,
    Minus,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '-' => Some(Tok::Minus),
            ',' => Some(Tok::Comma),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_alphabetic() {
            let len = rest
                .find(|ch: char| !ch.is_ascii_alphanumeric())
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        if c.is_ascii_digit() {
            let len = rest
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(rest.len());
            self.pos += len;
            let n = rest[..len].parse().map_err(|_| Error::Syntax {
                offset: start,
                expected: "an integer exponent that fits in 64 bits".into(),
            })?;
            return Ok((Tok::Int(n), start));
        }
        Err(Error::Syntax {
            offset: start,
            expected: format!("a token, found `{c}`"),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    alphabet: &'a Alphabet,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.at,
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if self.tok == tok {
            self.bump()
        } else {
            self.fail(expected)
        }
    }

    fn expr(&mut self) -> Result<CommExpr> {
        let mut factors = vec![self.factor()?];
        while self.tok == Tok::Star {
            self.bump()?;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            CommExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<CommExpr> {
        let base = self.base()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        match self.tok {
            Tok::Minus => {
                self.bump()?;
                match self.tok {
                    Tok::Int(n) => {
                        self.bump()?;
                        Ok(CommExpr::pow(base, -n))
                    }
                    _ => self.fail("an integer after `^-`"),
                }
            }
            Tok::Int(n) => {
                self.bump()?;
                Ok(CommExpr::pow(base, n))
            }
            _ => {
                let g = self.base()?;
                Ok(CommExpr::conj(base, g))
            }
        }
    }

    fn base(&mut self) -> Result<CommExpr> {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Ident(name) => {
                let Some(g) = self.alphabet.get(&name) else {
                    return Err(Error::UnknownGenerator {
                        name,
                        offset: self.at,
                    });
                };
                self.bump()?;
                Ok(CommExpr::Leaf(g))
            }
            Tok::LBracket => {
                self.bump()?;
                let x = self.expr()?;
                self.expect(Tok::Comma, "`,` inside commutator")?;
                let y = self.expr()?;
                self.expect(Tok::RBracket, "`]` closing commutator")?;
                Ok(CommExpr::comm(x, y))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            other => {
                self.tok = other;
                self.fail("a generator, `[` or `(`")
            }
        }
    }
}

/// Parses `text` against the declared generators.
pub fn parse_expr(text: &str, alphabet: &Alphabet) -> Result<CommExpr> {
    let mut p = Parser {
        lexer: Lexer { src: text, pos: 0 },
        alphabet,
        tok: Tok::End,
        at: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail("`*` or end of input");
    }
    Ok(e)
}

impl CommExpr {
    /// Renders the expression in the grammar accepted by [`parse_expr`].
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> ExprDisplay<'a> {
        ExprDisplay {
            expr: self,
            alphabet,
        }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a CommExpr,
    alphabet: &'a Alphabet,
}

impl ExprDisplay<'_> {
    fn write_expr(&self, e: &CommExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match e {
            CommExpr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    if matches!(x, CommExpr::Product(_)) {
                        self.write_paren(x, f)?;
                    } else {
                        self.write_expr(x, f)?;
                    }
                }
                Ok(())
            }
            CommExpr::Inverse(x) => {
                self.write_base(x, f)?;
                f.write_str("^-1")
            }
            CommExpr::Power(x, n) => {
                self.write_base(x, f)?;
                write!(f, "^{n}")
            }
            CommExpr::Conjugate(x, g) => {
                self.write_base(x, f)?;
                f.write_str("^")?;
                self.write_base(g, f)
            }
            CommExpr::Leaf(g) => f.write_str(self.alphabet.name(*g)),
            CommExpr::Commutator(x, y) => {
                f.write_str("[")?;
                self.write_expr(x, f)?;
                f.write_str(",")?;
                self.write_expr(y, f)?;
                f.write_str("]")
            }
        }
    }

    fn write_base(&self, e: &CommExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match e {
            CommExpr::Leaf(_) | CommExpr::Commutator(..) => self.write_expr(e, f),
            _ => self.write_paren(e, f),
        }
    }

    fn write_paren(&self, e: &CommExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        self.write_expr(e, f)?;
        f.write_str(")")
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_expr(self.expr, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Generator;

    fn alpha() -> Alphabet {
        Alphabet::new(["m2", "m3", "m4", "m5", "m6", "a", "b"]).unwrap()
    }

    fn leaf(a: &Alphabet, n: &str) -> CommExpr {
        CommExpr::leaf(a.get(n).unwrap())
    }

    #[test]
    fn simple_commutator() {
        let a = alpha();
        assert_eq!(
            parse_expr("[m3,m4]", &a).unwrap(),
            CommExpr::comm(leaf(&a, "m3"), leaf(&a, "m4"))
        );
    }

    #[test]
    fn hopf_word_tree() {
        let a = alpha();
        let l = |n| leaf(&a, n);
        let expected = CommExpr::comm(
            CommExpr::product(vec![
                CommExpr::comm(l("m3"), CommExpr::product(vec![l("m4"), l("b")])),
                CommExpr::comm(l("b"), l("m4")),
            ]),
            CommExpr::product(vec![l("m2"), l("a")]),
        );
        assert_eq!(parse_expr("[[m3,m4*b]*[b,m4],m2*a]", &a).unwrap(), expected);
    }

    #[test]
    fn nested_commutator() {
        let a = alpha();
        let l = |n| leaf(&a, n);
        let expected = CommExpr::comm(
            l("m2"),
            CommExpr::comm(
                CommExpr::comm(l("m3"), l("m4")),
                CommExpr::comm(l("m5"), l("m6")),
            ),
        );
        assert_eq!(
            parse_expr(" [ m2 , [[m3,m4],[m5,m6]] ] ", &a).unwrap(),
            expected
        );
    }

    #[test]
    fn exponents_bind_tighter_than_product() {
        let a = alpha();
        let e = parse_expr("m2*m3^-1*m4^m5*m6^3", &a).unwrap();
        assert_eq!(
            e,
            CommExpr::product(vec![
                leaf(&a, "m2"),
                CommExpr::inv(leaf(&a, "m3")),
                CommExpr::conj(leaf(&a, "m4"), leaf(&a, "m5")),
                CommExpr::pow(leaf(&a, "m6"), 3),
            ])
        );
    }

    #[test]
    fn errors_carry_offsets() {
        let a = alpha();
        assert_eq!(
            parse_expr("[m2,m3", &a),
            Err(Error::Syntax {
                offset: 6,
                expected: "`]` closing commutator".into()
            })
        );
        assert_eq!(
            parse_expr("[m2,q9]", &a),
            Err(Error::UnknownGenerator {
                name: "q9".into(),
                offset: 4
            })
        );
        assert!(matches!(
            parse_expr("m2^-m3", &a),
            Err(Error::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse_expr("", &a),
            Err(Error::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expr("m2 m3", &a),
            Err(Error::Syntax { offset: 3, .. })
        ));
    }

    #[test]
    fn printer_round_trips() {
        let a = alpha();
        for text in [
            "[[m3,m4*b]*[b,m4],m2*a]",
            "(m2*m3)^-1*(m4^m5)^(m6*a)",
            "[m2,m3]^[a,b]*m2^-4",
            "((m2*m3)*m4)^2",
        ] {
            let e = parse_expr(text, &a).unwrap();
            let printed = e.display(&a).to_string();
            assert_eq!(parse_expr(&printed, &a).unwrap(), e, "{text} -> {printed}");
        }
        let e = CommExpr::inv(CommExpr::inv(CommExpr::leaf(Generator(0))));
        assert_eq!(e.display(&a).to_string(), "(m2^-1)^-1");
    }
}
