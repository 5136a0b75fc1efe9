//! The attribute-value record format.
//!
//! Every data file (lexicon entries, morpheme tables, paradigms, weight and
//! run configuration) is a sequence of records:
//!
//! ```text
//! record := '{' (name value)* '}'
//! value  := quoted-string | bare-atom | '(' atom* ')' | record+
//! ```
//!
//! A name followed by several records (`SubjOf {..} {..}`) binds a list of
//! records; a record-valued name repeated later in the same record is merged
//! into that list. Lines starting with `//` are comments.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// A value bound to an attribute name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Atom(String),
    AtomList(Vec<String>),
    Rec(Record),
    RecList(Vec<Record>),
}

/// Borrowed view of one value, with record lists flattened into records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueRef<'a> {
    Atom(&'a str),
    AtomList(&'a [String]),
    Rec(&'a Record),
}

impl<'a> ValueRef<'a> {
    pub fn as_record(self) -> Option<&'a Record> {
        match self {
            ValueRef::Rec(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_atom(self) -> Option<&'a str> {
        match self {
            ValueRef::Atom(a) => Some(a),
            _ => None,
        }
    }
}

/// An ordered sequence of attribute-value pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    attrs: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn attrs(&self) -> &[(String, Value)] {
        &self.attrs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.attrs.iter().map(|(n, v)| (n.as_str(), v))
    }

    /// Appends an attribute without merging.
    pub fn push(&mut self, name: impl Into<String>, value: Value) {
        self.attrs.push((name.into(), value));
    }

    /// Builder form of [`Record::push`].
    pub fn with(mut self, name: impl Into<String>, value: Value) -> Self {
        self.push(name, value);
        self
    }

    pub fn with_atom(self, name: impl Into<String>, atom: impl Into<String>) -> Self {
        self.with(name, Value::Atom(atom.into()))
    }

    /// Adds a record under `name`, keeping the parser's normal form: the first
    /// record is stored as `Rec`, later ones turn it into a `RecList`.
    pub fn push_record(&mut self, name: &str, rec: Record) {
        let slot = self
            .attrs
            .iter_mut()
            .find(|(n, v)| n == name && matches!(v, Value::Rec(_) | Value::RecList(_)));
        match slot {
            Some((_, v)) => {
                let old = core::mem::replace(v, Value::RecList(Vec::new()));
                *v = match old {
                    Value::Rec(first) => Value::RecList(alloc::vec![first, rec]),
                    Value::RecList(mut list) => {
                        list.push(rec);
                        Value::RecList(list)
                    }
                    _ => unreachable!(),
                };
            }
            None => self.attrs.push((name.to_string(), Value::Rec(rec))),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.attrs.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Value> {
        self.attrs.iter_mut().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Every value bound to `name`, in attribute order; record lists are
    /// expanded into their member records.
    pub fn get_all(&self, name: &str) -> Vec<ValueRef<'_>> {
        let mut out = Vec::new();
        for (n, v) in &self.attrs {
            if n != name {
                continue;
            }
            match v {
                Value::Atom(a) => out.push(ValueRef::Atom(a)),
                Value::AtomList(l) => out.push(ValueRef::AtomList(l)),
                Value::Rec(r) => out.push(ValueRef::Rec(r)),
                Value::RecList(rs) => out.extend(rs.iter().map(ValueRef::Rec)),
            }
        }
        out
    }

    /// Records bound to `name`, in order.
    pub fn records<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.attrs
            .iter()
            .filter(move |(n, _)| n == name)
            .flat_map(|(_, v)| match v {
                Value::Rec(r) => core::slice::from_ref(r),
                Value::RecList(rs) => rs.as_slice(),
                _ => &[],
            })
    }

    pub fn records_mut<'a>(&'a mut self, name: &'a str) -> impl Iterator<Item = &'a mut Record> + 'a {
        self.attrs
            .iter_mut()
            .filter(move |(n, _)| n == name)
            .flat_map(|(_, v)| match v {
                Value::Rec(r) => core::slice::from_mut(r),
                Value::RecList(rs) => rs.as_mut_slice(),
                _ => &mut [],
            })
    }

    /// First atom bound to `name`.
    pub fn atom(&self, name: &str) -> Option<&str> {
        self.get_all(name).into_iter().find_map(ValueRef::as_atom)
    }

    /// Atoms bound to `name`, from both scalar atoms and atom lists.
    pub fn atoms(&self, name: &str) -> Vec<&str> {
        let mut out = Vec::new();
        for v in self.get_all(name) {
            match v {
                ValueRef::Atom(a) => out.push(a),
                ValueRef::AtomList(l) => out.extend(l.iter().map(String::as_str)),
                ValueRef::Rec(_) => {}
            }
        }
        out
    }

    /// Replaces the first atom bound to `name`, or appends one.
    pub fn set_atom(&mut self, name: &str, atom: impl Into<String>) {
        match self.get_mut(name) {
            Some(v @ Value::Atom(_)) => *v = Value::Atom(atom.into()),
            _ => self.push(name, Value::Atom(atom.into())),
        }
    }

    pub fn remove_all(&mut self, name: &str) {
        self.attrs.retain(|(n, _)| n != name);
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_record(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnbalancedDelimiter,
    UnterminatedString,
    EmptyAttributeName,
    /// An attribute name directly followed by `}`.
    MissingValue,
    /// A backslash escape other than `\"` or `\\`.
    InvalidEscape,
    /// A token that cannot appear at this position.
    UnexpectedToken,
    /// The input contains no record where one is required.
    ExpectedRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind:?} at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    ListOpen,
    ListClose,
    Quoted(String),
    Bare(String),
    Eof,
}

struct Lexer<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    pos: Pos,
    peeked: Option<(Tok, Pos)>,
}

fn is_delim(c: char) -> bool {
    matches!(c, '{' | '}' | '(' | ')' | '"')
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
            peeked: None,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') => {
                    let mut ahead = self.chars.clone();
                    ahead.next();
                    if ahead.peek() != Some(&'/') {
                        return;
                    }
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn peek(&mut self) -> Result<&(Tok, Pos), ParseError> {
        if self.peeked.is_none() {
            let t = self.lex()?;
            self.peeked = Some(t);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<(Tok, Pos), ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex(),
        }
    }

    fn lex(&mut self) -> Result<(Tok, Pos), ParseError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok((Tok::Eof, start));
        };
        let tok = match c {
            '{' => {
                self.bump();
                Tok::Open
            }
            '}' => {
                self.bump();
                Tok::Close
            }
            '(' => {
                self.bump();
                Tok::ListOpen
            }
            ')' => {
                self.bump();
                Tok::ListClose
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    let at = self.pos;
                    match self.bump() {
                        None => {
                            return Err(error(
                                ParseErrorKind::UnterminatedString,
                                start,
                                "string is never closed",
                            ))
                        }
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            None => {
                                return Err(error(
                                    ParseErrorKind::UnterminatedString,
                                    start,
                                    "string is never closed",
                                ))
                            }
                            Some(_) => {
                                return Err(error(
                                    ParseErrorKind::InvalidEscape,
                                    at,
                                    "only \\\" and \\\\ escapes are allowed",
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Quoted(s)
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = self.chars.peek() {
                    if ch.is_whitespace() || is_delim(ch) {
                        break;
                    }
                    s.push(ch);
                    self.bump();
                }
                Tok::Bare(s)
            }
        };
        Ok((tok, start))
    }
}

fn error(kind: ParseErrorKind, pos: Pos, message: &str) -> ParseError {
    ParseError {
        kind,
        line: pos.line,
        column: pos.column,
        message: message.to_string(),
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

impl Parser<'_> {
    /// Parses the body of a record whose `{` sits at `open`.
    fn body(&mut self, open: Pos) -> Result<Record, ParseError> {
        let mut rec = Record::new();
        loop {
            let (tok, at) = self.lex.next()?;
            let name = match tok {
                Tok::Close => return Ok(rec),
                Tok::Eof => return Err(error(ParseErrorKind::UnbalancedDelimiter, open, "'{' is never closed")),
                Tok::ListClose => {
                    return Err(error(
                        ParseErrorKind::UnbalancedDelimiter,
                        at,
                        "')' without matching '('",
                    ))
                }
                Tok::Quoted(s) if s.is_empty() => {
                    return Err(error(ParseErrorKind::EmptyAttributeName, at, "attribute name is empty"))
                }
                Tok::Bare(s) => s,
                _ => return Err(error(ParseErrorKind::UnexpectedToken, at, "expected an attribute name")),
            };
            self.value(&mut rec, name, open)?;
        }
    }

    fn value(&mut self, rec: &mut Record, name: String, open: Pos) -> Result<(), ParseError> {
        let (tok, at) = self.lex.next()?;
        match tok {
            Tok::Quoted(s) | Tok::Bare(s) => rec.push(name, Value::Atom(s)),
            Tok::ListOpen => {
                let mut atoms = Vec::new();
                loop {
                    let (t, p) = self.lex.next()?;
                    match t {
                        Tok::ListClose => break,
                        Tok::Quoted(s) | Tok::Bare(s) => atoms.push(s),
                        Tok::Eof => return Err(error(ParseErrorKind::UnbalancedDelimiter, at, "'(' is never closed")),
                        Tok::Close => {
                            return Err(error(ParseErrorKind::UnbalancedDelimiter, p, "'}' inside an atom list"))
                        }
                        Tok::Open | Tok::ListOpen => {
                            return Err(error(ParseErrorKind::UnexpectedToken, p, "atom lists hold atoms only"))
                        }
                    }
                }
                rec.push(name, Value::AtomList(atoms));
            }
            Tok::Open => {
                let first = self.body(at)?;
                rec.push_record(&name, first);
                while matches!(self.lex.peek()?.0, Tok::Open) {
                    let (_, p) = self.lex.next()?;
                    let more = self.body(p)?;
                    rec.push_record(&name, more);
                }
            }
            Tok::Close => return Err(error(ParseErrorKind::MissingValue, at, "attribute has no value")),
            Tok::ListClose => {
                return Err(error(
                    ParseErrorKind::UnbalancedDelimiter,
                    at,
                    "')' without matching '('",
                ))
            }
            Tok::Eof => return Err(error(ParseErrorKind::UnbalancedDelimiter, open, "'{' is never closed")),
        }
        Ok(())
    }

    fn top(&mut self) -> Result<Option<Record>, ParseError> {
        let (tok, at) = self.lex.next()?;
        match tok {
            Tok::Eof => Ok(None),
            Tok::Open => self.body(at).map(Some),
            Tok::Close | Tok::ListClose => Err(error(
                ParseErrorKind::UnbalancedDelimiter,
                at,
                "closing delimiter without an opening one",
            )),
            _ => Err(error(ParseErrorKind::UnexpectedToken, at, "expected '{'")),
        }
    }
}

/// Parses exactly one record.
pub fn parse_record(text: &str) -> Result<Record, ParseError> {
    let mut p = Parser { lex: Lexer::new(text) };
    let Some(rec) = p.top()? else {
        return Err(error(
            ParseErrorKind::ExpectedRecord,
            p.lex.pos,
            "input holds no record",
        ));
    };
    let (tok, at) = p.lex.next()?;
    if tok != Tok::Eof {
        return Err(error(
            ParseErrorKind::UnexpectedToken,
            at,
            "input continues after the record",
        ));
    }
    Ok(rec)
}

/// Parses a stream of top-level records.
pub fn parse_records(text: &str) -> Result<Vec<Record>, ParseError> {
    let mut p = Parser { lex: Lexer::new(text) };
    let mut out = Vec::new();
    while let Some(rec) = p.top()? {
        out.push(rec);
    }
    Ok(out)
}

fn needs_quotes_in_list(atom: &str) -> bool {
    atom.is_empty() || atom.starts_with("//") || atom.chars().any(|c| c.is_whitespace() || is_delim(c) || c == '\\')
}

/// Scalar atoms are left bare only when they look like symbols (`Noun`,
/// `SING`, `Noun_Plural`) or integers; lemmas and definitions are quoted.
fn bare_scalar(atom: &str) -> bool {
    let digits = atom.strip_prefix('-').unwrap_or(atom);
    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
        return true;
    }
    let mut chars = atom.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_quoted(out: &mut String, atom: &str) {
    out.push('"');
    for c in atom.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

fn write_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_record(out: &mut String, rec: &Record, level: usize) {
    out.push_str("{\n");
    for (name, value) in &rec.attrs {
        write_indent(out, level + 1);
        out.push_str(name);
        out.push(' ');
        match value {
            Value::Atom(a) if bare_scalar(a) => out.push_str(a),
            Value::Atom(a) => write_quoted(out, a),
            Value::AtomList(list) => {
                out.push('(');
                for (i, a) in list.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    if needs_quotes_in_list(a) {
                        write_quoted(out, a);
                    } else {
                        out.push_str(a);
                    }
                }
                out.push(')');
            }
            Value::Rec(r) => write_record(out, r, level + 1),
            Value::RecList(rs) => {
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    write_record(out, r, level + 1);
                }
            }
        }
        out.push('\n');
    }
    write_indent(out, level);
    out.push('}');
}

/// Canonical text form: two-space indentation, one attribute per line.
pub fn serialize_record(rec: &Record) -> String {
    let mut out = String::new();
    write_record(&mut out, rec, 0);
    out
}

/// Serializes a record stream, one record per block, newline-terminated.
pub fn serialize_records<'a>(recs: impl IntoIterator<Item = &'a Record>) -> String {
    let mut out = String::new();
    for r in recs {
        write_record(&mut out, r, 0);
        out.push('\n');
    }
    out
}
