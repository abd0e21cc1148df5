//! Infix concrete syntax.
//!
//! ```text
//! or     := and ('|' or)?
//! and    := until ('&' and)?
//! until  := unary ('U' until)?
//! unary  := '!' unary | ('X' | 'F' | 'G') unary | atom
//! atom   := 'true' | 'false' | ident | '(' or ')'
//! ```
//!
//! All binary operators are right-associative. `X`, `F` and `G` are
//! operators when an operand follows them and propositions otherwise, so
//! `F G` is "eventually G".

use crate::error::{Error, Result};

use super::{is_valid_name, Formula, Proposition, Vocabulary};

/// How [`parse_with`] treats propositions missing from the vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    /// Register unseen propositions in the vocabulary.
    Extend,
    /// Reject unseen propositions.
    Strict,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Not,
    And,
    Or,
    Until,
    True,
    False,
    /// Identifier; `X`, `F` and `G` included.
    Ident(String),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "U" => Tok::Until,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

fn is_unary_keyword(word: &str) -> bool {
    matches!(word, "X" | "F" | "G")
}

struct Parser<'v> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vocab: Option<(&'v mut Vocabulary, ParseMode)>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn starts_operand(tok: Option<&Tok>) -> bool {
        matches!(
            tok,
            Some(Tok::LParen | Tok::Not | Tok::True | Tok::False | Tok::Ident(_))
        )
    }

    fn or(&mut self) -> Result<Formula> {
        let left = self.and()?;
        if self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            return Ok(Formula::or(left, self.or()?));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula> {
        let left = self.until()?;
        if self.peek() == Some(&Tok::And) {
            self.pos += 1;
            return Ok(Formula::and(left, self.and()?));
        }
        Ok(left)
    }

    fn until(&mut self) -> Result<Formula> {
        let left = self.unary()?;
        if self.peek() == Some(&Tok::Until) {
            self.pos += 1;
            return Ok(Formula::until(left, self.until()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(word))
                if is_unary_keyword(&word)
                    && Self::starts_operand(self.toks.get(self.pos + 1).map(|(t, _)| t)) =>
            {
                self.pos += 1;
                let child = self.unary()?;
                Ok(match word.as_str() {
                    "X" => Formula::next(child),
                    "F" => Formula::eventually(child),
                    _ => Formula::always(child),
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(name)) => {
                if !is_valid_name(&name) {
                    return self.error(format!("invalid proposition `{name}`"));
                }
                let p = Proposition::new(&name)?;
                if let Some((vocab, mode)) = self.vocab.as_mut() {
                    match mode {
                        ParseMode::Extend => {
                            vocab.insert(p.clone());
                        }
                        ParseMode::Strict if !vocab.contains(&p) => {
                            return Err(Error::UnknownProposition(name));
                        }
                        ParseMode::Strict => {}
                    }
                }
                self.pos += 1;
                Ok(Formula::Prop(p))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(tok) => self.error(format!("expected operand, found {}", describe(&tok))),
            None => self.error("unexpected end of input"),
        }
    }
}

fn describe(tok: &Tok) -> &'static str {
    match tok {
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::Not => "`!`",
        Tok::And => "`&`",
        Tok::Or => "`|`",
        Tok::Until => "`U`",
        Tok::True => "`true`",
        Tok::False => "`false`",
        Tok::Ident(_) => "identifier",
    }
}

fn run(text: &str, vocab: Option<(&mut Vocabulary, ParseMode)>) -> Result<Formula> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        vocab,
    };
    let f = parser.or()?;
    if parser.pos != parser.toks.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(f)
}

/// Parses infix text without a vocabulary.
pub fn parse(text: &str) -> Result<Formula> {
    run(text, None)
}

/// Parses infix text, extending or validating against `vocab`.
pub fn parse_with(text: &str, vocab: &mut Vocabulary, mode: ParseMode) -> Result<Formula> {
    run(text, Some((vocab, mode)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Formula {
        Formula::p(n)
    }

    #[test]
    fn eventually_sequence() {
        assert_eq!(
            parse("F (R & F G)").unwrap(),
            Formula::eventually(Formula::and(p("R"), Formula::eventually(p("G"))))
        );
    }

    #[test]
    fn unary_binds_tighter_than_until() {
        assert_eq!(
            parse("! a U b").unwrap(),
            Formula::until(Formula::not(p("a")), p("b"))
        );
    }

    #[test]
    fn leading_until_is_error_at_zero() {
        match parse("U a") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("a | b & c").unwrap(),
            Formula::or(p("a"), Formula::and(p("b"), p("c")))
        );
        assert_eq!(
            parse("a U b U c").unwrap(),
            Formula::until(p("a"), Formula::until(p("b"), p("c")))
        );
        assert_eq!(
            parse("a & b & c").unwrap(),
            Formula::and(p("a"), Formula::and(p("b"), p("c")))
        );
        assert_eq!(
            parse("a U b & c").unwrap(),
            Formula::and(Formula::until(p("a"), p("b")), p("c"))
        );
        assert_eq!(parse("X !a").unwrap(), Formula::next(Formula::not(p("a"))));
    }

    #[test]
    fn keywords_as_propositions() {
        assert_eq!(parse("G").unwrap(), p("G"));
        assert_eq!(parse("G U F").unwrap(), Formula::until(p("G"), p("F")));
        assert_eq!(parse("G G").unwrap(), Formula::always(p("G")));
        assert_eq!(parse("!X").unwrap(), Formula::not(p("X")));
        assert_eq!(
            parse("G !B").unwrap(),
            Formula::always(Formula::not(p("B")))
        );
    }

    #[test]
    fn error_offsets() {
        let at = |s: &str| match parse(s) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("{s}: expected syntax error, got {other:?}"),
        };
        assert_eq!(at(""), 0);
        assert_eq!(at("a &"), 3);
        assert_eq!(at("(a"), 2);
        assert_eq!(at("a b"), 2);
        assert_eq!(at("a $ b"), 2);
        assert_eq!(at("a )"), 2);
    }

    #[test]
    fn strict_mode_rejects_unknown() {
        let mut v = Vocabulary::new(["a"]).unwrap();
        assert!(parse_with("F a", &mut v, ParseMode::Strict).is_ok());
        assert!(matches!(
            parse_with("F b", &mut v, ParseMode::Strict),
            Err(Error::UnknownProposition(n)) if n == "b"
        ));
        parse_with("b U c", &mut v, ParseMode::Extend).unwrap();
        assert_eq!(v.names(), vec!["a", "b", "c"]);
    }
}
