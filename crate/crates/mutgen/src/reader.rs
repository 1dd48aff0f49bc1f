//! Reader for the S-expression surface syntax.
//!
//! Supported lexical forms: symbols, arbitrary-precision integers, strings,
//! `'x` quote sugar, backquote/comma quasiquotation, `;` line comments, and
//! dotted pairs whose tail is a list (the tail splices, so `(a . nil)` reads
//! as `(a)`). Quasiquote is desugared here, at read time, into plain
//! `cons`/`list`/`quote` construction forms; nothing downstream ever sees a
//! quasiquote node.

use crate::sexpr::SExpr;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ReadError {
    pub line: usize,
    pub col: usize,
    pub kind: ReadErrorKind,
}

#[derive(Debug, Clone, Error)]
pub enum ReadErrorKind {
    #[error("unbalanced parenthesis: this `(` is never closed")]
    UnclosedParen,
    #[error("unbalanced parenthesis: unexpected `)`")]
    UnexpectedClose,
    #[error("unterminated string")]
    UnterminatedString,
    #[error("unknown string escape `\\{0}`")]
    UnknownEscape(char),
    #[error("unquote (`,`) outside quasiquote")]
    UnquoteOutsideQuasiquote,
    #[error("unquote-splicing (`,@`) is not supported")]
    UnquoteSplicing,
    #[error("dotted pair must have exactly one tail element")]
    BadDottedTail,
    #[error("dotted tail must be a list")]
    ImproperTail,
    #[error("misplaced `.`")]
    MisplacedDot,
    #[error("`{0}` expects one following expression")]
    DanglingPrefix(char),
    #[error("expected exactly one expression, found {0}")]
    ExpectedOneForm(usize),
}

/// A toplevel form together with the line/column where it started.
#[derive(Debug, Clone)]
pub struct Located<T> {
    pub value: T,
    pub line: usize,
    pub col: usize,
}

/// Read every S-expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, ReadError> {
    Ok(read_all_located(text)?.into_iter().map(|l| l.value).collect())
}

/// Like [`read_all`], keeping the source position of each toplevel form so
/// that later processing stages can point at the form they choked on.
pub fn read_all_located(text: &str) -> Result<Vec<Located<SExpr>>, ReadError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut forms = Vec::new();
    while let Some(tok) = parser.peek() {
        let (line, col) = (tok.line, tok.col);
        let value = parser.parse_expr(0)?;
        forms.push(Located { value, line, col });
    }
    Ok(forms)
}

/// Read exactly one S-expression.
pub fn read_one(text: &str) -> Result<SExpr, ReadError> {
    let mut forms = read_all(text)?;
    match forms.len() {
        1 => Ok(forms.pop().unwrap()),
        n => Err(ReadError { line: 1, col: 1, kind: ReadErrorKind::ExpectedOneForm(n) }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Quote,
    Quasiquote,
    Unquote,
    Dot,
    Str(String),
    Atom(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, kind: ReadErrorKind) -> ReadError {
        ReadError { line, col, kind }
    }
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '\'' | '`' | ',' | '"' | ';')
}

fn lex(text: &str) -> Result<Vec<Token>, ReadError> {
    let mut lx = Lexer { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut tokens = Vec::new();
    loop {
        // Skip whitespace and comments.
        loop {
            match lx.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    lx.bump();
                }
                Some(';') => {
                    while let Some(c) = lx.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (lx.line, lx.col);
        let Some(c) = lx.bump() else { break };
        let tok = match c {
            '(' => Tok::Open,
            ')' => Tok::Close,
            '\'' => Tok::Quote,
            '`' => Tok::Quasiquote,
            ',' => {
                if lx.chars.peek() == Some(&'@') {
                    return Err(lx.err(line, col, ReadErrorKind::UnquoteSplicing));
                }
                Tok::Unquote
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match lx.bump() {
                        None => return Err(lx.err(line, col, ReadErrorKind::UnterminatedString)),
                        Some('"') => break,
                        Some('\\') => match lx.bump() {
                            None => {
                                return Err(lx.err(line, col, ReadErrorKind::UnterminatedString))
                            }
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('r') => s.push('\r'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            Some(c) => {
                                return Err(lx.err(
                                    lx.line,
                                    lx.col,
                                    ReadErrorKind::UnknownEscape(c),
                                ))
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            c => {
                let mut s = String::new();
                s.push(c);
                while let Some(&n) = lx.chars.peek() {
                    if is_delimiter(n) {
                        break;
                    }
                    s.push(n);
                    lx.bump();
                }
                if s == "." {
                    Tok::Dot
                } else {
                    Tok::Atom(s)
                }
            }
        };
        tokens.push(Token { tok, line, col });
    }
    Ok(tokens)
}

fn atom_to_sexpr(text: &str) -> SExpr {
    if let Ok(i) = text.parse::<BigInt>() {
        // `parse::<BigInt>` accepts what we want: optional sign, digits.
        if text.chars().any(|c| c.is_ascii_digit()) {
            return SExpr::Int(i);
        }
    }
    SExpr::sym(text)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, tok: &Token, kind: ReadErrorKind) -> ReadError {
        ReadError { line: tok.line, col: tok.col, kind }
    }

    /// `qq_depth` counts enclosing quasiquotes: `,` is only legal when it is
    /// positive. The outermost backquote desugars the whole template once
    /// its subtree has been read.
    fn parse_expr(&mut self, qq_depth: u32) -> Result<SExpr, ReadError> {
        let tok = self.next().expect("caller checked peek");
        match tok.tok {
            Tok::Atom(ref s) => Ok(atom_to_sexpr(s)),
            Tok::Str(ref s) => Ok(SExpr::Str(s.clone())),
            Tok::Open => self.parse_list(&tok, qq_depth),
            Tok::Close => Err(self.err_at(&tok, ReadErrorKind::UnexpectedClose)),
            Tok::Dot => Err(self.err_at(&tok, ReadErrorKind::MisplacedDot)),
            Tok::Quote => {
                let arg = self.parse_prefixed('\'', &tok, qq_depth)?;
                Ok(SExpr::list(vec![SExpr::sym("quote"), arg]))
            }
            Tok::Quasiquote => {
                let arg = self.parse_prefixed('`', &tok, qq_depth + 1)?;
                if qq_depth == 0 {
                    Ok(qq_expand(&arg, 1))
                } else {
                    Ok(SExpr::list(vec![SExpr::sym("quasiquote"), arg]))
                }
            }
            Tok::Unquote => {
                if qq_depth == 0 {
                    return Err(self.err_at(&tok, ReadErrorKind::UnquoteOutsideQuasiquote));
                }
                let arg = self.parse_prefixed(',', &tok, qq_depth - 1)?;
                Ok(SExpr::list(vec![SExpr::sym("unquote"), arg]))
            }
        }
    }

    fn parse_prefixed(&mut self, c: char, at: &Token, qq_depth: u32) -> Result<SExpr, ReadError> {
        if self.peek().is_none() {
            return Err(self.err_at(at, ReadErrorKind::DanglingPrefix(c)));
        }
        self.parse_expr(qq_depth)
    }

    fn parse_list(&mut self, open: &Token, qq_depth: u32) -> Result<SExpr, ReadError> {
        let mut items = Vec::new();
        loop {
            let Some(tok) = self.peek().cloned() else {
                return Err(self.err_at(open, ReadErrorKind::UnclosedParen));
            };
            match tok.tok {
                Tok::Close => {
                    self.next();
                    return Ok(SExpr::List(items));
                }
                Tok::Dot => {
                    self.next();
                    if items.is_empty() {
                        return Err(self.err_at(&tok, ReadErrorKind::MisplacedDot));
                    }
                    match self.peek().map(|t| t.tok.clone()) {
                        None => return Err(self.err_at(open, ReadErrorKind::UnclosedParen)),
                        Some(Tok::Close) => {
                            return Err(self.err_at(&tok, ReadErrorKind::BadDottedTail))
                        }
                        _ => {}
                    }
                    let tail = self.parse_expr(qq_depth)?;
                    match self.next() {
                        Some(t) if t.tok == Tok::Close => {}
                        Some(t) => return Err(self.err_at(&t, ReadErrorKind::BadDottedTail)),
                        None => return Err(self.err_at(open, ReadErrorKind::UnclosedParen)),
                    }
                    // A list tail splices: `(a . (b c))` is `(a b c)`.
                    match tail {
                        SExpr::List(rest) => {
                            items.extend(rest);
                            return Ok(SExpr::List(items));
                        }
                        _ => return Err(self.err_at(&tok, ReadErrorKind::ImproperTail)),
                    }
                }
                _ => items.push(self.parse_expr(qq_depth)?),
            }
        }
    }
}

fn unquote_marker(slice: &[SExpr]) -> Option<&SExpr> {
    match slice {
        [head, arg] if head.is_sym("unquote") => Some(arg),
        _ => None,
    }
}

fn quasiquote_marker(slice: &[SExpr]) -> Option<&SExpr> {
    match slice {
        [head, arg] if head.is_sym("quasiquote") => Some(arg),
        _ => None,
    }
}

fn contains_active_unquote(x: &SExpr, depth: u32) -> bool {
    match x {
        SExpr::List(v) => contains_active_in_slice(v, depth),
        _ => false,
    }
}

fn contains_active_in_slice(slice: &[SExpr], depth: u32) -> bool {
    if let Some(arg) = unquote_marker(slice) {
        return depth == 1 || contains_active_unquote(arg, depth - 1);
    }
    if let Some(arg) = quasiquote_marker(slice) {
        return contains_active_unquote(arg, depth + 1);
    }
    match slice {
        [] => false,
        [head, rest @ ..] => {
            contains_active_unquote(head, depth) || contains_active_in_slice(rest, depth)
        }
    }
}

fn quote(x: SExpr) -> SExpr {
    SExpr::list(vec![SExpr::sym("quote"), x])
}

/// Rewrite a quasiquote template into `cons`/`list`/`quote` forms. Nested
/// backquotes rebuild themselves one level down, comma markers splice at
/// depth 1, and subtrees with no active unquote collapse to a constant.
fn qq_expand(x: &SExpr, depth: u32) -> SExpr {
    match x {
        SExpr::List(v) if !v.is_empty() => qq_expand_slice(v, depth),
        _ => quote(x.clone()),
    }
}

fn qq_expand_slice(slice: &[SExpr], depth: u32) -> SExpr {
    if let Some(arg) = unquote_marker(slice) {
        return if depth == 1 {
            arg.clone()
        } else {
            SExpr::list(vec![
                SExpr::sym("list"),
                quote(SExpr::sym("unquote")),
                qq_expand(arg, depth - 1),
            ])
        };
    }
    if let Some(arg) = quasiquote_marker(slice) {
        return SExpr::list(vec![
            SExpr::sym("list"),
            quote(SExpr::sym("quasiquote")),
            qq_expand(arg, depth + 1),
        ]);
    }
    if !contains_active_in_slice(slice, depth) {
        return quote(SExpr::List(slice.to_vec()));
    }
    match slice {
        [] => quote(SExpr::nil()),
        [head, rest @ ..] => SExpr::list(vec![
            SExpr::sym("cons"),
            qq_expand(head, depth),
            qq_expand_slice(rest, depth),
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(text: &str) -> SExpr {
        read_one(text).unwrap()
    }

    #[test]
    fn reads_simple_list() {
        assert_eq!(one("(a b)"), SExpr::list(vec![SExpr::sym("a"), SExpr::sym("b")]));
    }

    #[test]
    fn quote_sugar() {
        assert_eq!(one("'x"), SExpr::list(vec![SExpr::sym("quote"), SExpr::sym("x")]));
    }

    #[test]
    fn nil_reads_as_empty_list() {
        assert_eq!(one("nil"), SExpr::nil());
        assert_eq!(one("()"), SExpr::nil());
        assert_eq!(one("(a . nil)"), one("(a)"));
        assert_eq!(one("(a . (b c))"), one("(a b c)"));
    }

    #[test]
    fn comments_are_discarded() {
        let forms = read_all("(a ; trailing\n b) ; done\n").unwrap();
        assert_eq!(forms, vec![one("(a b)")]);
    }

    #[test]
    fn integers_and_strings() {
        assert_eq!(one("-42"), SExpr::int(-42));
        assert_eq!(
            one("123456789012345678901234567890").to_compact_string(),
            "123456789012345678901234567890"
        );
        assert_eq!(one("\"hi\\\"\""), SExpr::string("hi\""));
        // Sign characters alone are symbols, not numbers.
        assert_eq!(one("-"), SExpr::sym("-"));
        assert_eq!(one("1+"), SExpr::sym("1+"));
    }

    #[test]
    fn quasiquote_desugars_to_construction() {
        assert_eq!(one("`(f ,x)"), one("(cons 'f (cons x 'nil))"));
        // Constant subtrees collapse to a single quote.
        assert_eq!(one("`(f g)"), one("'(f g)"));
        // A dotted unquote splices in tail position.
        assert_eq!(one("`(a . ,b)"), one("(cons 'a b)"));
    }

    #[test]
    fn nested_quasiquote_keeps_inner_levels() {
        let x = one("``(a ,,b)");
        // The inner template survives as data rebuilt with `list`.
        let text = x.to_compact_string();
        assert!(text.contains("quasiquote"), "{text}");
        assert!(text.contains("unquote"), "{text}");
    }

    #[test]
    fn error_positions() {
        let e = read_all("(a\n  (b c)").unwrap_err();
        assert!(matches!(e.kind, ReadErrorKind::UnclosedParen));
        assert_eq!((e.line, e.col), (1, 1));

        let e = read_all("\"abc").unwrap_err();
        assert!(matches!(e.kind, ReadErrorKind::UnterminatedString));

        let e = read_all(",x").unwrap_err();
        assert!(matches!(e.kind, ReadErrorKind::UnquoteOutsideQuasiquote));

        let e = read_all("(a . b c)").unwrap_err();
        assert!(matches!(e.kind, ReadErrorKind::BadDottedTail));

        let e = read_all("(a . b)").unwrap_err();
        assert!(matches!(e.kind, ReadErrorKind::ImproperTail));

        let e = read_all("(a))").unwrap_err();
        assert!(matches!(e.kind, ReadErrorKind::UnexpectedClose));
        assert_eq!((e.line, e.col), (1, 4));
    }

    #[test]
    fn located_forms_carry_positions() {
        let forms = read_all_located("(a)\n  (b)").unwrap();
        assert_eq!((forms[0].line, forms[0].col), (1, 1));
        assert_eq!((forms[1].line, forms[1].col), (2, 3));
    }

    #[test]
    fn non_ascii_symbols_pass_through_verbatim() {
        let x = one("(héllo wörld→x)");
        assert_eq!(x, read_one(&x.to_canonical_string()).unwrap());
        let items = x.as_list().unwrap();
        assert_eq!(items[0].as_symbol().unwrap().text(), "héllo");
    }
}
