//! Tokens and expression grammar shared by the workspace format and the CLI.
//!
//! ```text
//! epset := term (('+' | '-') term)*
//! term  := 'finite' '(' num* ')' | 'mod' '(' num ':' num+ ')' | name | '(' epset ')'
//! ideal := 'fin' | 'gens' '(' epset (';' epset)* ')' | name
//! ```
//!
//! `+` is union and `-` is difference, applied left to right.

use std::fmt;

use crate::error::Error;
use crate::ideals::Ideal;
use crate::natset::EpSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub column: usize,
}

/// A diagnostic with a 1-based position. `line` is 0 for single-line input
/// such as a command-line argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The library error behind a semantic failure, if any.
    pub cause: Option<Error>,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: 0, column, message: message.into(), cause: None }
    }

    pub fn caused_by(column: usize, cause: Error) -> ParseError {
        ParseError { line: 0, column, message: cause.to_string(), cause: Some(cause) }
    }

    pub fn at_line(mut self, line: usize) -> ParseError {
        self.line = line;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        } else {
            write!(f, "column {}: {}", self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

const SYMBOLS: &str = "{}[]():;=+-@,";

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

/// Splits one line into tokens. `#` starts a comment.
pub fn tokenize(line: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if SYMBOLS.contains(c) {
            out.push(Token { tok: Tok::Sym(c), column: i + 1 });
            i += 1;
        } else if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column: start + 1 });
        } else {
            return Err(ParseError::new(i + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A cursor over one line of tokens.
pub struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Token], line_len: usize) -> Cursor<'a> {
        Cursor { tokens, pos: 0, end_column: line_len + 1 }
    }

    pub fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&'a Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.column(), message)
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        }
    }

    pub fn eat(&mut self, sym: char) -> bool {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, sym: char) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{sym}`, found {}", self.describe())))
        }
    }

    pub fn ident(&mut self) -> Result<(&'a str, usize), ParseError> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), column }) => {
                self.pos += 1;
                Ok((s.as_str(), *column))
            }
            _ => Err(self.error(format!("expected a name, found {}", self.describe()))),
        }
    }

    pub fn is_ident(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)))
    }

    pub fn number(&mut self) -> Result<u64, ParseError> {
        let column = self.column();
        let (s, _) = self.ident().map_err(|_| self.error(format!("expected a number, found {}", self.describe())))?;
        s.parse().map_err(|_| ParseError::new(column, format!("`{s}` is not a natural number")))
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.describe())))
        }
    }

    /// `element@param`
    pub fn point(&mut self) -> Result<(String, usize), ParseError> {
        let (e, column) = self.ident()?;
        self.expect('@')?;
        let (s, _) = self.ident()?;
        Ok((format!("{e}@{s}"), column))
    }

    fn is_call(&self, keyword: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == keyword) && self.peek_at(1) == Some(&Tok::Sym('('))
    }

    fn numbers_until(&mut self, close: char) -> Result<Vec<u64>, ParseError> {
        let mut out = Vec::new();
        while !self.eat(close) {
            if self.at_end() {
                return Err(self.error(format!("expected `{close}`")));
            }
            self.eat(',');
            if self.eat(close) {
                break;
            }
            out.push(self.number()?);
        }
        Ok(out)
    }

    pub fn epset(&mut self, lookup: &dyn Fn(&str) -> Option<EpSet>) -> Result<EpSet, ParseError> {
        let mut acc = self.epset_term(lookup)?;
        loop {
            if self.eat('+') {
                acc = acc.union(&self.epset_term(lookup)?);
            } else if self.eat('-') {
                acc = acc.difference(&self.epset_term(lookup)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn epset_term(&mut self, lookup: &dyn Fn(&str) -> Option<EpSet>) -> Result<EpSet, ParseError> {
        if self.eat('(') {
            let inner = self.epset(lookup)?;
            self.expect(')')?;
            return Ok(inner);
        }
        if self.is_call("finite") {
            self.pos += 2;
            return Ok(EpSet::from_finite(&self.numbers_until(')')?));
        }
        if self.is_call("mod") {
            self.pos += 2;
            let column = self.column();
            let m = self.number()?;
            self.expect(':')?;
            let residues = self.numbers_until(')')?;
            if residues.is_empty() {
                return Err(ParseError::new(column, "mod(...) needs at least one residue"));
            }
            return EpSet::from_residues(m, &residues).map_err(|e| ParseError::caused_by(column, e));
        }
        let (name, column) = self.ident().map_err(|_| self.error(format!("expected a set expression, found {}", self.describe())))?;
        lookup(name).ok_or_else(|| ParseError::new(column, format!("unknown epset `{name}`")))
    }

    pub fn ideal(
        &mut self,
        epsets: &dyn Fn(&str) -> Option<EpSet>,
        ideals: &dyn Fn(&str) -> Option<Ideal>,
    ) -> Result<Ideal, ParseError> {
        let column = self.column();
        if self.is_call("gens") {
            self.pos += 2;
            let mut gens = Vec::new();
            if !self.eat(')') {
                loop {
                    gens.push(self.epset(epsets)?);
                    if self.eat(')') {
                        break;
                    }
                    self.expect(';')?;
                }
            }
            return Ideal::new(gens).map_err(|e| ParseError::caused_by(column, e));
        }
        let (name, column) = self.ident().map_err(|_| self.error(format!("expected an ideal, found {}", self.describe())))?;
        if let Some(i) = ideals(name) {
            return Ok(i);
        }
        if name == "fin" {
            return Ok(Ideal::finite());
        }
        Err(ParseError::new(column, format!("unknown ideal `{name}`")))
    }
}

fn no_epsets(_: &str) -> Option<EpSet> {
    None
}

fn no_ideals(_: &str) -> Option<Ideal> {
    None
}

/// Parses a standalone set expression without name references.
pub fn parse_epset(text: &str) -> Result<EpSet, ParseError> {
    let tokens = tokenize(text)?;
    let mut c = Cursor::new(&tokens, text.chars().count());
    let e = c.epset(&no_epsets)?;
    c.finish()?;
    Ok(e)
}

/// Parses a standalone ideal expression without name references.
pub fn parse_ideal(text: &str) -> Result<Ideal, ParseError> {
    let tokens = tokenize(text)?;
    let mut c = Cursor::new(&tokens, text.chars().count());
    let i = c.ideal(&no_epsets, &no_ideals)?;
    c.finish()?;
    Ok(i)
}

/// Renders an ideal in the syntax accepted by [`parse_ideal`].
pub fn ideal_to_string(i: &Ideal) -> String {
    if i.generators().is_empty() {
        "fin".to_string()
    } else {
        let gens: Vec<String> = i.generators().iter().map(ToString::to_string).collect();
        format!("gens({})", gens.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_expressions() {
        assert_eq!(parse_epset("mod(2:0)").unwrap(), EpSet::from_residues(2, &[0]).unwrap());
        let e = parse_epset("mod(4:2)+finite(1 3)").unwrap();
        assert_eq!(e.members().take(4).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(parse_epset("finite()").unwrap(), EpSet::empty());
        assert_eq!(parse_epset("mod(1:0)-finite(0, 2)").unwrap().members().take(2).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(parse_epset("mod(3: 0 1)").unwrap(), EpSet::from_residues(3, &[0, 1]).unwrap());
        assert_eq!(parse_epset("(mod(2:0)+mod(2:1))").unwrap(), EpSet::naturals());
    }

    #[test]
    fn set_expression_errors() {
        let e = parse_epset("mod(4:7)").unwrap_err();
        assert_eq!(e.cause, Some(Error::BadResidue { modulus: 4, residue: 7 }));
        let e = parse_epset("mod(2:0) + evens").unwrap_err();
        assert_eq!(e.column, 12);
        assert!(parse_epset("finite(1 2").is_err());
        assert!(parse_epset("mod(2:)").is_err());
        assert!(parse_epset("finite(x)").is_err());
        assert!(parse_epset("mod(2:0) )").is_err());
    }

    #[test]
    fn ideal_expressions() {
        assert_eq!(parse_ideal("fin").unwrap(), Ideal::finite());
        assert_eq!(parse_ideal("gens()").unwrap(), Ideal::finite());
        let i = parse_ideal("gens(mod(2:0);finite(1))").unwrap();
        assert_eq!(i.generators().len(), 2);
        assert_eq!(parse_ideal(&ideal_to_string(&i)).unwrap(), i);
        let e = parse_ideal("gens(mod(2:0);mod(2:1))").unwrap_err();
        assert_eq!(e.cause, Some(Error::TrivialIdeal));
        assert!(parse_ideal("nope").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["mod(6: 1 4)+finite(0 2)-finite(1)", "finite(3 9)", "mod(1: 0)"] {
            let e = parse_epset(text).unwrap();
            assert_eq!(parse_epset(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn tokens_and_points() {
        let toks = tokenize("seq W = pattern[x1@s1] # trailing").unwrap();
        assert_eq!(toks.len(), 9);
        let mut c = Cursor::new(&toks[5..8], 0);
        assert_eq!(c.point().unwrap().0, "x1@s1");
        assert!(tokenize("softset $").is_err());
    }
}
