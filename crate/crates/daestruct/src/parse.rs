//! Parser for the line-oriented model language.
//!
//! ```text
//! model <ident>
//! var <ident> ("," <ident>)*
//! input <ident> ("," <ident>)*
//! eq <expr> "=" <expr>
//! ```
//!
//! Expressions use infix `+ - * / ^` with the usual precedence, parentheses,
//! integer and decimal literals, `t`, `der(<name>, <n>)`, and the functions
//! `sin cos exp ln`. `der(x,0)` is the same as `x`. A `#` starts a comment
//! that runs to the end of the line.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::expr::{Expr, Func};
use crate::model::Model;

const RESERVED: &[&str] = &[
    "model", "var", "input", "eq", "der", "sin", "cos", "exp", "ln", "t",
];

/// Parses model-language source. Equation and variable order follow
/// declaration order; each equation is normalized to its `lhs - rhs`
/// residual. A non-square system parses successfully and is only rejected by
/// the analysis entry points.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut name: Option<String> = None;
    let mut variables: Vec<String> = Vec::new();
    let mut drivers: Vec<String> = Vec::new();
    let mut equations: Vec<Expr> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = Tokenizer::new(line, line_no);
        let (keyword, kw_col) = match tokens.next()? {
            Some((Token::Ident(w), col)) => (w, col),
            Some((_, col)) => {
                return Err(err(line_no, col, "expected a directive keyword"));
            }
            None => continue,
        };
        match keyword.as_str() {
            "model" => {
                if name.is_some() {
                    return Err(err(line_no, kw_col, "duplicate `model` line"));
                }
                let (ident, _) = expect_ident(&mut tokens, line_no)?;
                expect_end(&mut tokens, line_no)?;
                name = Some(ident);
            }
            "var" | "input" => {
                if name.is_none() {
                    return Err(err(line_no, kw_col, "missing `model` line"));
                }
                let names = ident_list(&mut tokens, line_no)?;
                for (ident, col) in names {
                    if RESERVED.contains(&ident.as_str()) {
                        return Err(err(
                            line_no,
                            col,
                            &format!("`{ident}` is a reserved word"),
                        ));
                    }
                    if variables.contains(&ident) || drivers.contains(&ident) {
                        return Err(err(
                            line_no,
                            col,
                            &format!("duplicate identifier `{ident}`"),
                        ));
                    }
                    if keyword == "var" {
                        variables.push(ident);
                    } else {
                        drivers.push(ident);
                    }
                }
            }
            "eq" => {
                if name.is_none() {
                    return Err(err(line_no, kw_col, "missing `model` line"));
                }
                let mut parser = ExprParser {
                    tokens: &mut tokens,
                    line: line_no,
                    variables: &variables,
                    drivers: &drivers,
                };
                let lhs = parser.expr()?;
                match tokens.next()? {
                    Some((Token::Equals, _)) => {}
                    other => return Err(unexpected(other, line_no, "`=`")),
                }
                let mut parser = ExprParser {
                    tokens: &mut tokens,
                    line: line_no,
                    variables: &variables,
                    drivers: &drivers,
                };
                let rhs = parser.expr()?;
                expect_end(&mut tokens, line_no)?;
                equations.push(lhs - rhs);
            }
            other => {
                return Err(err(
                    line_no,
                    kw_col,
                    &format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    match name {
        Some(name) => Ok(Model { name, variables, drivers, equations }),
        None => Err(err(1, 1, "empty source: missing `model` line")),
    }
}

fn err(line: usize, col: usize, message: &str) -> Error {
    Error::Parse { line, col, message: message.to_string() }
}

fn unexpected(tok: Option<(Token, usize)>, line: usize, wanted: &str) -> Error {
    match tok {
        Some((t, col)) => err(line, col, &format!("expected {wanted}, found {t}")),
        None => err(line, usize::MAX.min(999), &format!("expected {wanted}, found end of line")),
    }
}

fn expect_ident(tokens: &mut Tokenizer, line: usize) -> Result<(String, usize)> {
    match tokens.next()? {
        Some((Token::Ident(w), col)) => Ok((w, col)),
        other => Err(unexpected(other, line, "an identifier")),
    }
}

fn expect_end(tokens: &mut Tokenizer, line: usize) -> Result<()> {
    match tokens.next()? {
        None => Ok(()),
        Some((t, col)) => Err(err(line, col, &format!("unexpected trailing {t}"))),
    }
}

fn ident_list(tokens: &mut Tokenizer, line: usize) -> Result<Vec<(String, usize)>> {
    let mut out = vec![expect_ident(tokens, line)?];
    loop {
        match tokens.next()? {
            None => return Ok(out),
            Some((Token::Comma, _)) => out.push(expect_ident(tokens, line)?),
            Some((t, col)) => return Err(err(line, col, &format!("expected `,`, found {t}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(Rational64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Equals,
}

impl std::fmt::Display for Token {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Token::Ident(w) => write!(f, "`{w}`"),
            Token::Number(_) => write!(f, "a number"),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Slash => write!(f, "`/`"),
            Token::Caret => write!(f, "`^`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Comma => write!(f, "`,`"),
            Token::Equals => write!(f, "`=`"),
        }
    }
}

struct Tokenizer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    peeked: Option<Option<(Token, usize)>>,
}

impl<'a> Tokenizer<'a> {
    fn new(line: &'a str, line_no: usize) -> Tokenizer<'a> {
        Tokenizer { chars: line.char_indices().peekable(), line: line_no, peeked: None }
    }

    fn peek(&mut self) -> Result<Option<&(Token, usize)>> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.as_ref().unwrap().as_ref())
    }

    fn next(&mut self) -> Result<Option<(Token, usize)>> {
        if let Some(tok) = self.peeked.take() {
            return Ok(tok);
        }
        self.lex()
    }

    fn lex(&mut self) -> Result<Option<(Token, usize)>> {
        while let Some((_, c)) = self.chars.peek() {
            if c.is_whitespace() {
                self.chars.next();
            } else {
                break;
            }
        }
        let (pos, c) = match self.chars.peek().copied() {
            Some(x) => x,
            None => return Ok(None),
        };
        let col = pos + 1;
        let simple = |t| Some((t, col));
        match c {
            '+' => {
                self.chars.next();
                Ok(simple(Token::Plus))
            }
            '-' => {
                self.chars.next();
                Ok(simple(Token::Minus))
            }
            '*' => {
                self.chars.next();
                Ok(simple(Token::Star))
            }
            '/' => {
                self.chars.next();
                Ok(simple(Token::Slash))
            }
            '^' => {
                self.chars.next();
                Ok(simple(Token::Caret))
            }
            '(' => {
                self.chars.next();
                Ok(simple(Token::LParen))
            }
            ')' => {
                self.chars.next();
                Ok(simple(Token::RParen))
            }
            ',' => {
                self.chars.next();
                Ok(simple(Token::Comma))
            }
            '=' => {
                self.chars.next();
                Ok(simple(Token::Equals))
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                let mut fraction = String::new();
                while let Some((_, c)) = self.chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(*c);
                        self.chars.next();
                    } else {
                        break;
                    }
                }
                if let Some((_, '.')) = self.chars.peek() {
                    self.chars.next();
                    while let Some((_, c)) = self.chars.peek() {
                        if c.is_ascii_digit() {
                            fraction.push(*c);
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    if fraction.is_empty() {
                        return Err(err(self.line, col, "digits required after decimal point"));
                    }
                }
                if digits.len() + fraction.len() > 18 {
                    return Err(err(self.line, col, "numeric literal too large"));
                }
                let numer: i64 = format!("{digits}{fraction}")
                    .parse()
                    .map_err(|_| err(self.line, col, "invalid numeric literal"))?;
                let denom = 10i64.pow(fraction.len() as u32);
                Ok(Some((Token::Number(Rational64::new(numer, denom)), col)))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some((_, c)) = self.chars.peek() {
                    if c.is_alphanumeric() || *c == '_' {
                        word.push(*c);
                        self.chars.next();
                    } else {
                        break;
                    }
                }
                Ok(Some((Token::Ident(word), col)))
            }
            other => Err(err(self.line, col, &format!("unexpected character `{other}`"))),
        }
    }
}

struct ExprParser<'a, 'b> {
    tokens: &'a mut Tokenizer<'b>,
    line: usize,
    variables: &'a [String],
    drivers: &'a [String],
}

impl ExprParser<'_, '_> {
    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.tokens.peek()? {
                Some((Token::Plus, _)) => {
                    self.tokens.next()?;
                    let rhs = self.term()?;
                    acc = acc + rhs;
                }
                Some((Token::Minus, _)) => {
                    self.tokens.next()?;
                    let rhs = self.term()?;
                    acc = acc - rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.tokens.peek()? {
                Some((Token::Star, _)) => {
                    self.tokens.next()?;
                    let rhs = self.unary()?;
                    acc = acc * rhs;
                }
                Some((Token::Slash, _)) => {
                    self.tokens.next()?;
                    let rhs = self.unary()?;
                    acc = acc / rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some((Token::Minus, _)) = self.tokens.peek()? {
            self.tokens.next()?;
            let inner = self.unary()?;
            return Ok(-inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some((Token::Caret, _)) = self.tokens.peek()? {
            self.tokens.next()?;
            let exp = self.exponent()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    // Integer exponent, optionally negative, optionally parenthesized.
    fn exponent(&mut self) -> Result<i32> {
        let (parenthesized, negated) = match self.tokens.peek()? {
            Some((Token::LParen, _)) => {
                self.tokens.next()?;
                let negated = matches!(self.tokens.peek()?, Some((Token::Minus, _)));
                if negated {
                    self.tokens.next()?;
                }
                (true, negated)
            }
            Some((Token::Minus, _)) => {
                self.tokens.next()?;
                (false, true)
            }
            _ => (false, false),
        };
        let value = match self.tokens.next()? {
            Some((Token::Number(n), col)) => {
                if !n.is_integer() {
                    return Err(err(self.line, col, "exponent must be an integer"));
                }
                i32::try_from(*n.numer())
                    .map_err(|_| err(self.line, col, "exponent out of range"))?
            }
            other => return Err(unexpected(other, self.line, "an integer exponent")),
        };
        if parenthesized {
            match self.tokens.next()? {
                Some((Token::RParen, _)) => {}
                other => return Err(unexpected(other, self.line, "`)`")),
            }
        }
        Ok(if negated { -value } else { value })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tokens.next()? {
            Some((Token::Number(n), _)) => Ok(Expr::Const(n)),
            Some((Token::LParen, _)) => {
                let inner = self.expr()?;
                match self.tokens.next()? {
                    Some((Token::RParen, _)) => Ok(inner),
                    other => Err(unexpected(other, self.line, "`)`")),
                }
            }
            Some((Token::Ident(word), col)) => self.ident(word, col),
            other => Err(unexpected(other, self.line, "an expression")),
        }
    }

    fn ident(&mut self, word: String, col: usize) -> Result<Expr> {
        match word.as_str() {
            "t" => return Ok(Expr::Time),
            "sin" | "cos" | "exp" | "ln" => {
                let func = match word.as_str() {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    _ => Func::Ln,
                };
                match self.tokens.next()? {
                    Some((Token::LParen, _)) => {}
                    other => return Err(unexpected(other, self.line, "`(`")),
                }
                let arg = self.expr()?;
                match self.tokens.next()? {
                    Some((Token::RParen, _)) => {}
                    other => return Err(unexpected(other, self.line, "`)`")),
                }
                return Ok(Expr::call(func, arg));
            }
            "der" => {
                match self.tokens.next()? {
                    Some((Token::LParen, _)) => {}
                    other => return Err(unexpected(other, self.line, "`(`")),
                }
                let (name, name_col) = expect_ident(self.tokens, self.line)?;
                match self.tokens.next()? {
                    Some((Token::Comma, _)) => {}
                    other => return Err(unexpected(other, self.line, "`,`")),
                }
                let order = match self.tokens.next()? {
                    Some((Token::Number(n), ncol)) => {
                        if !n.is_integer() || n.numer().is_negative() {
                            return Err(err(
                                self.line,
                                ncol,
                                "derivative order must be a non-negative integer",
                            ));
                        }
                        u32::try_from(*n.numer())
                            .map_err(|_| err(self.line, ncol, "derivative order out of range"))?
                    }
                    other => return Err(unexpected(other, self.line, "a derivative order")),
                };
                match self.tokens.next()? {
                    Some((Token::RParen, _)) => {}
                    other => return Err(unexpected(other, self.line, "`)`")),
                }
                return self.resolve(&name, name_col, order);
            }
            _ => {}
        }
        self.resolve(&word, col, 0)
    }

    fn resolve(&self, name: &str, col: usize, order: u32) -> Result<Expr> {
        if let Some(pos) = self.variables.iter().position(|v| v == name) {
            return Ok(Expr::var(crate::expr::VarId(pos), order));
        }
        if let Some(pos) = self.drivers.iter().position(|d| d == name) {
            return Ok(Expr::driver(crate::expr::DriverId(pos), order));
        }
        Err(Error::Undeclared { line: self.line, col, name: name.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::VarId;

    #[test]
    fn parses_single_ode() {
        let m = parse_model("model m\nvar x\neq der(x,1) = x\n").unwrap();
        assert_eq!(m.name, "m");
        assert_eq!(m.variables, vec!["x"]);
        assert_eq!(m.equations.len(), 1);
        assert_eq!(
            m.equations[0],
            Expr::var(VarId(0), 1) - Expr::var(VarId(0), 0)
        );
    }

    #[test]
    fn undeclared_identifier_is_reported_with_position() {
        let e = parse_model("model m\nvar x\neq der(y,1) = 0\n").unwrap_err();
        match e {
            Error::Undeclared { line, name, .. } => {
                assert_eq!(line, 3);
                assert_eq!(name, "y");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_square_parses_but_flags() {
        let m = parse_model("model m\nvar x, y\neq x = y\n").unwrap();
        assert!(!m.is_square());
    }

    #[test]
    fn decimal_literals_become_exact_rationals() {
        let m = parse_model("model m\nvar x\neq x = 0.25\n").unwrap();
        assert_eq!(
            m.equations[0],
            Expr::var(VarId(0), 0) - Expr::rational(1, 4)
        );
    }

    #[test]
    fn der_zero_is_the_plain_variable() {
        let m = parse_model("model m\nvar x\neq der(x,0) = 0\n").unwrap();
        assert_eq!(m.equations[0], Expr::var(VarId(0), 0));
    }

    #[test]
    fn reserved_words_cannot_be_declared() {
        assert!(parse_model("model m\nvar t\neq t = 0\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let src = "# cascade\nmodel m\n\nvar x # state\neq x = 1\n";
        let m = parse_model(src).unwrap();
        assert_eq!(m.equations.len(), 1);
    }

    #[test]
    fn print_parse_is_a_fixed_point_on_second_parse() {
        let src = "model m\nvar x, y\ninput Q\neq der(x,1) = Q*(x - y)/2 + sin(t)\neq y = x^2 - 1\n";
        let m1 = parse_model(src).unwrap();
        let printed = m1.print();
        let m2 = parse_model(&printed).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(printed, m2.print());
    }
}
