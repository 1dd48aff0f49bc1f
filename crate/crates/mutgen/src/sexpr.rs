//! S-expression values: the carrier type for every other module.
//!
//! Symbols compare case-insensitively but print in the case they were
//! constructed with. The empty list and `nil` are the same value and print
//! as `nil`.

use num_bigint::BigInt;
use std::fmt;

/// An interned-by-text symbol. Equality and hashing ignore ASCII case;
/// printing preserves the original spelling. A package prefix such as
/// `acl2::foo` is part of the text and therefore of the identity.
#[derive(Debug, Clone)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(text: impl Into<String>) -> Symbol {
        Symbol(text.into())
    }

    pub fn text(&self) -> &str {
        &self.0
    }

    /// True for `:keyword`-style symbols.
    pub fn is_keyword(&self) -> bool {
        self.0.starts_with(':')
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Symbol) -> bool {
        self.0.eq_ignore_ascii_case(&other.0)
    }
}

impl Eq for Symbol {}

impl PartialEq<str> for Symbol {
    fn eq(&self, other: &str) -> bool {
        self.0.eq_ignore_ascii_case(other)
    }
}

impl PartialEq<&str> for Symbol {
    fn eq(&self, other: &&str) -> bool {
        self.0.eq_ignore_ascii_case(other)
    }
}

impl std::hash::Hash for Symbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for b in self.0.bytes() {
            state.write_u8(b.to_ascii_lowercase());
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Symbol {
        Symbol::new(s)
    }
}

/// The universal syntax tree. Lists are always proper; a dotted tail is
/// only accepted by the reader when it is itself a list, in which case it
/// splices (so `(a . nil)` and `(a)` read to the same value).
#[derive(Debug, Clone)]
pub enum SExpr {
    Symbol(Symbol),
    Int(BigInt),
    Str(String),
    List(Vec<SExpr>),
}

impl SExpr {
    /// The empty list, aka `nil`.
    pub fn nil() -> SExpr {
        SExpr::List(Vec::new())
    }

    pub fn t() -> SExpr {
        SExpr::Symbol(Symbol::new("t"))
    }

    /// A symbol. The spellings `nil`/`NIL` are identified with the empty
    /// list here so that the identification holds for constructed values,
    /// not just read ones.
    pub fn sym(text: impl Into<String>) -> SExpr {
        let text = text.into();
        if text.eq_ignore_ascii_case("nil") {
            SExpr::nil()
        } else {
            SExpr::Symbol(Symbol(text))
        }
    }

    pub fn int(value: i64) -> SExpr {
        SExpr::Int(BigInt::from(value))
    }

    pub fn string(text: impl Into<String>) -> SExpr {
        SExpr::Str(text.into())
    }

    pub fn list(items: Vec<SExpr>) -> SExpr {
        SExpr::List(items)
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, SExpr::List(v) if v.is_empty())
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            SExpr::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(v) => Some(v),
            _ => None,
        }
    }

    /// True when this is the symbol `name` (case-insensitively).
    pub fn is_sym(&self, name: &str) -> bool {
        matches!(self, SExpr::Symbol(s) if s == name)
    }

    /// For lists `(head ...)`, the head symbol if there is one.
    pub fn head_symbol(&self) -> Option<&Symbol> {
        self.as_list()?.first()?.as_symbol()
    }

    /// True when this is a list whose head is the symbol `name`.
    pub fn head_is(&self, name: &str) -> bool {
        self.head_symbol().is_some_and(|h| h == name)
    }

    /// Canonical multi-line rendering (wraps at 80 columns).
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        write_pretty(self, &mut out, 0, 0);
        out
    }

    /// Single-line rendering.
    pub fn to_compact_string(&self) -> String {
        let mut out = String::new();
        write_flat(self, &mut out);
        out
    }
}

/// Structural equality: the `==` on `SExpr` compares symbols
/// case-insensitively and strings case-sensitively, which is the equality
/// every golden test uses.
impl PartialEq for SExpr {
    fn eq(&self, other: &SExpr) -> bool {
        match (self, other) {
            (SExpr::Symbol(a), SExpr::Symbol(b)) => a == b,
            (SExpr::Int(a), SExpr::Int(b)) => a == b,
            (SExpr::Str(a), SExpr::Str(b)) => a == b,
            (SExpr::List(a), SExpr::List(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for SExpr {}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

const WIDTH: usize = 80;

fn escape_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// `(quote x)` prints with its reader sugar.
fn quoted_form(x: &SExpr) -> Option<&SExpr> {
    match x.as_list() {
        Some([head, arg]) if head.is_sym("quote") => Some(arg),
        _ => None,
    }
}

fn write_flat(x: &SExpr, out: &mut String) {
    match x {
        SExpr::Symbol(s) => out.push_str(s.text()),
        SExpr::Int(i) => out.push_str(&i.to_string()),
        SExpr::Str(s) => escape_string(s, out),
        SExpr::List(v) if v.is_empty() => out.push_str("nil"),
        SExpr::List(v) => {
            if let Some(arg) = quoted_form(x) {
                out.push('\'');
                write_flat(arg, out);
                return;
            }
            out.push('(');
            for (i, e) in v.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_flat(e, out);
            }
            out.push(')');
        }
    }
}

fn flat_width(x: &SExpr) -> usize {
    let mut s = String::new();
    write_flat(x, &mut s);
    s.chars().count()
}

/// `trail` is how many characters (closing parens of enclosing forms) will
/// follow on the same line, so the 80-column limit holds for full lines.
fn write_pretty(x: &SExpr, out: &mut String, col: usize, trail: usize) {
    if col + flat_width(x) + trail <= WIDTH {
        write_flat(x, out);
        return;
    }
    match x {
        SExpr::List(v) if !v.is_empty() => {
            if let Some(arg) = quoted_form(x) {
                out.push('\'');
                write_pretty(arg, out, col + 1, trail);
                return;
            }
            out.push('(');
            let mut cur = col + 1;
            let last = v.len() - 1;
            let head_trail = if last == 0 { trail + 1 } else { 0 };
            let head_width = flat_width(&v[0]);
            if cur + head_width + head_trail <= WIDTH {
                write_flat(&v[0], out);
                cur += head_width;
            } else {
                write_pretty(&v[0], out, cur, head_trail);
                cur = WIDTH + 1; // force the rest onto continuation lines
            }
            let is_kw = |e: &SExpr| matches!(e, SExpr::Symbol(s) if s.is_keyword());
            let mut i = 1;
            // Pack as many following elements on the opening line as fit; a
            // keyword is only packed together with its value.
            while i < v.len() {
                let w = flat_width(&v[i]);
                let t = if i == last { trail + 1 } else { 0 };
                if is_kw(&v[i]) && i < last {
                    let vw = flat_width(&v[i + 1]);
                    let vt = if i + 1 == last { trail + 1 } else { 0 };
                    if cur + 1 + w + 1 + vw + vt <= WIDTH {
                        out.push(' ');
                        write_flat(&v[i], out);
                        out.push(' ');
                        write_flat(&v[i + 1], out);
                        cur += 2 + w + vw;
                        i += 2;
                        continue;
                    }
                    break;
                }
                if cur + 1 + w + t <= WIDTH {
                    out.push(' ');
                    write_flat(&v[i], out);
                    cur += 1 + w;
                    i += 1;
                } else {
                    break;
                }
            }
            let indent = |out: &mut String| {
                out.push('\n');
                for _ in 0..col + 2 {
                    out.push(' ');
                }
            };
            let mut j = i;
            while j < v.len() {
                indent(out);
                let t = if j == last { trail + 1 } else { 0 };
                if is_kw(&v[j]) && j < last {
                    let kw_w = flat_width(&v[j]);
                    let vt = if j + 1 == last { trail + 1 } else { 0 };
                    write_flat(&v[j], out);
                    if col + 2 + kw_w + 1 + flat_width(&v[j + 1]) + vt <= WIDTH {
                        out.push(' ');
                        write_flat(&v[j + 1], out);
                    } else {
                        indent(out);
                        write_pretty(&v[j + 1], out, col + 2, vt);
                    }
                    j += 2;
                    continue;
                }
                write_pretty(&v[j], out, col + 2, t);
                j += 1;
            }
            out.push(')');
        }
        _ => write_flat(x, out),
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use crate::reader::read_one;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn symbol_text() -> impl Strategy<Value = String> {
        "[a-z<>?*&=_/$%!:-][a-z0-9<>?*&=_/$%!:.+-]{0,12}"
            .prop_filter("readable back as the same symbol", |s| {
                s.parse::<BigInt>().is_err() && s != "." && !s.eq_ignore_ascii_case("nil")
            })
    }

    fn sexpr_strategy() -> impl Strategy<Value = SExpr> {
        let leaf = prop_oneof![
            symbol_text().prop_map(SExpr::sym),
            any::<i64>().prop_map(SExpr::int),
            "[ -~]{0,12}".prop_map(SExpr::Str),
            Just(SExpr::nil()),
        ];
        leaf.prop_recursive(4, 64, 5, |inner| {
            prop::collection::vec(inner, 0..5).prop_map(SExpr::list)
        })
    }

    proptest! {
        #[test]
        fn read_print_round_trip(value in sexpr_strategy()) {
            let text = value.to_canonical_string();
            prop_assert_eq!(&read_one(&text).unwrap(), &value, "canonical text {:?}", text);
            prop_assert_eq!(&read_one(&value.to_compact_string()).unwrap(), &value);
        }
    }
}
