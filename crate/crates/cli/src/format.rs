//! Tokens and lines of the workspace text format.
//!
//! A file is a header line `qbif 1` followed by blocks. A block starts with a
//! line `<kind> <name> [args...]`, holds body lines and closes with `end`.
//! Tokens are separated by whitespace; a token containing whitespace, `#` or
//! `"` is written in double quotes with `\"` and `\\` escapes. `#` starts a
//! comment outside quotes.

use serde::Serialize;
use thiserror::Error;

pub const HEADER: &str = "qbif 1";

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn at(tok: &Token, message: impl Into<String>) -> Self {
        ParseError { line: tok.line, column: tok.column, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
    /// 1-based column of the first character.
    pub column: usize,
}

/// A non-empty line after comment removal.
#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub tokens: Vec<Token>,
}

impl Line {
    pub fn head(&self) -> &str {
        &self.tokens[0].text
    }

    pub fn args(&self) -> &[Token] {
        &self.tokens[1..]
    }

    /// Position just past the last token, for "missing argument" errors.
    pub fn end_position(&self) -> Token {
        let last = self.tokens.last().expect("lines are non-empty");
        Token { text: String::new(), line: self.number, column: last.column + last.text.chars().count() }
    }

    pub fn expect_args(&self, n: usize) -> Result<&[Token], ParseError> {
        let args = self.args();
        if args.len() < n {
            return Err(ParseError::at(&self.end_position(), format!("`{}` expects {n} argument(s)", self.head())));
        }
        if args.len() > n {
            return Err(ParseError::at(&args[n], format!("unexpected argument to `{}`", self.head())));
        }
        Ok(args)
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Line>, ParseError> {
    let mut out = Vec::new();
    for (i, text) in src.lines().enumerate() {
        let number = i + 1;
        let tokens = tokenize_line(text, number)?;
        if !tokens.is_empty() {
            out.push(Line { number, tokens });
        }
    }
    Ok(out)
}

fn tokenize_line(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '"' {
            let column = i + 1;
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(ParseError { line, column, message: "unterminated quoted token".into() }),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(ParseError { line, column: i + 1, message: "invalid escape".into() }),
                        }
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            tokens.push(Token { text: s, line, column });
        } else {
            let column = i + 1;
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '#' && chars[i] != '"' {
                i += 1;
            }
            tokens.push(Token { text: chars[start..i].iter().collect(), line, column });
        }
    }
    Ok(tokens)
}

/// Render a token so that [`tokenize`] reads it back unchanged.
pub fn quote(s: &str) -> String {
    if !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '#' || c == '"' || c == '\\') {
        return s.to_string();
    }
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// A block header, its body and the line of its header.
#[derive(Debug, Clone)]
pub struct Block {
    pub header: Line,
    pub body: Vec<Line>,
}

/// Split a tokenized file into blocks, checking the header line.
pub fn blocks(lines: Vec<Line>) -> Result<Vec<Block>, ParseError> {
    let mut it = lines.into_iter();
    let Some(first) = it.next() else { return Ok(Vec::new()) };
    let texts: Vec<&str> = first.tokens.iter().map(|t| t.text.as_str()).collect();
    if texts != ["qbif", "1"] {
        return Err(ParseError::at(&first.tokens[0], format!("expected header `{HEADER}`")));
    }
    let mut out = Vec::new();
    while let Some(header) = it.next() {
        if header.head() == "end" {
            return Err(ParseError::at(&header.tokens[0], "`end` without an open block"));
        }
        if header.tokens.len() < 2 {
            return Err(ParseError::at(&header.end_position(), format!("block `{}` needs a name", header.head())));
        }
        let mut body = Vec::new();
        loop {
            match it.next() {
                None => return Err(ParseError::at(&header.tokens[0], format!("block `{}` is not closed with `end`", header.tokens[1].text))),
                Some(l) if l.head() == "end" => {
                    if l.tokens.len() > 1 {
                        return Err(ParseError::at(&l.tokens[1], "unexpected token after `end`"));
                    }
                    break;
                }
                Some(l) => body.push(l),
            }
        }
        out.push(Block { header, body });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_round_trips() {
        for s in ["plain", "with space", "a#b", "q\"uote", "back\\slash", ""] {
            let lines = tokenize(&format!("x {}", quote(s))).unwrap();
            assert_eq!(lines[0].tokens[1].text, s);
        }
    }

    #[test]
    fn columns_and_comments() {
        let lines = tokenize("  morphism f a b # trailing\n\n# only comment\nend").unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].tokens[1].column, 12);
        assert_eq!(lines[1].number, 4);
    }

    #[test]
    fn block_errors_carry_positions() {
        let err = blocks(tokenize("qbif 1\ncategory c\nobject a\n").unwrap()).unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        let err = blocks(tokenize("qbif 2\n").unwrap()).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(blocks(Vec::new()).unwrap().is_empty());
    }
}
