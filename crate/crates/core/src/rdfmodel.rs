//! RDF value model: IRIs, typed literals, triples and set-semantics graphs,
//! with canonical N-Triples in both directions and Turtle output.
//!
//! Blank nodes and language-tagged literals are not representable; every
//! resource this crate produces has a minted IRI.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::btree_set;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use chrono::{DateTime, SecondsFormat, Utc};
use thiserror::Error;

use crate::decimal::format3;

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: &'static str },
    #[error("{lexical:?} is not a valid lexical form for {datatype}")]
    InvalidLiteral { lexical: String, datatype: &'static str },
    #[error("unsupported literal datatype <{0}>")]
    UnsupportedDatatype(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        match iri_problem(&text) {
            None => Ok(Iri(text)),
            Some(reason) => Err(RdfError::InvalidIri { iri: text, reason }),
        }
    }

    /// For compile-time vocabulary constants known to be valid.
    pub(crate) fn from_static(text: &'static str) -> Self {
        debug_assert!(iri_problem(text).is_none(), "{text}");
        Iri(text.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

fn iri_problem(text: &str) -> Option<&'static str> {
    if text.is_empty() {
        return Some("empty");
    }
    if text
        .chars()
        .any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\".contains(c))
    {
        return Some("contains a character not allowed in IRIs");
    }
    let Some((scheme, _)) = text.split_once(':') else {
        return Some("relative IRI (no scheme)");
    };
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
    if !scheme_ok {
        return Some("malformed scheme");
    }
    None
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    Integer,
    Decimal,
    Double,
    Boolean,
    DateTime,
}

impl Datatype {
    pub const ALL: [Datatype; 6] = [
        Datatype::String,
        Datatype::Integer,
        Datatype::Decimal,
        Datatype::Double,
        Datatype::Boolean,
        Datatype::DateTime,
    ];

    pub fn iri(self) -> &'static str {
        match self {
            Datatype::String => xsd::STRING,
            Datatype::Integer => xsd::INTEGER,
            Datatype::Decimal => xsd::DECIMAL,
            Datatype::Double => xsd::DOUBLE,
            Datatype::Boolean => xsd::BOOLEAN,
            Datatype::DateTime => xsd::DATE_TIME,
        }
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.iri() == iri)
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Datatype::Integer | Datatype::Decimal | Datatype::Double)
    }

    fn accepts(self, lexical: &str) -> bool {
        match self {
            Datatype::String => true,
            Datatype::Integer => is_integer_lexical(lexical),
            Datatype::Decimal => is_decimal_lexical(lexical),
            Datatype::Double => is_double_lexical(lexical),
            Datatype::Boolean => matches!(lexical, "true" | "false"),
            Datatype::DateTime => DateTime::parse_from_rfc3339(lexical).is_ok(),
        }
    }
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_integer_lexical(s: &str) -> bool {
    all_digits(strip_sign(s))
}

fn is_decimal_lexical(s: &str) -> bool {
    let body = strip_sign(s);
    match body.split_once('.') {
        None => all_digits(body),
        Some((int, frac)) => {
            (int.is_empty() || all_digits(int))
                && (frac.is_empty() || all_digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
    }
}

fn is_double_lexical(s: &str) -> bool {
    if matches!(s, "INF" | "+INF" | "-INF" | "NaN") {
        return true;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    is_decimal_lexical(mantissa) && exponent.is_none_or(is_integer_lexical)
}

/// A typed literal whose lexical form is valid for its datatype.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Result<Self, RdfError> {
        let lexical = lexical.into();
        if datatype.accepts(&lexical) {
            Ok(Literal { lexical, datatype })
        } else {
            Err(RdfError::InvalidLiteral {
                lexical,
                datatype: datatype.iri(),
            })
        }
    }

    pub fn string(value: impl Into<String>) -> Self {
        Literal {
            lexical: value.into(),
            datatype: Datatype::String,
        }
    }

    pub fn integer(value: impl Into<i128>) -> Self {
        Literal {
            lexical: value.into().to_string(),
            datatype: Datatype::Integer,
        }
    }

    /// Decimal with exactly three fractional digits.
    pub fn decimal(value: f64) -> Self {
        Literal {
            lexical: format3(value),
            datatype: Datatype::Decimal,
        }
    }

    pub fn double(value: f64) -> Self {
        let lexical = if value.is_nan() {
            "NaN".to_string()
        } else if value.is_infinite() {
            if value > 0.0 { "INF" } else { "-INF" }.to_string()
        } else {
            format!("{value:E}")
        };
        Literal {
            lexical,
            datatype: Datatype::Double,
        }
    }

    pub fn boolean(value: bool) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Datatype::Boolean,
        }
    }

    pub fn date_time(value: DateTime<Utc>) -> Self {
        Literal {
            lexical: value.to_rfc3339_opts(SecondsFormat::AutoSi, true),
            datatype: Datatype::DateTime,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    /// Numeric value for integer, decimal and double literals.
    pub fn numeric_value(&self) -> Option<f64> {
        if !self.datatype.is_numeric() {
            return None;
        }
        match self.lexical.as_str() {
            "INF" | "+INF" => Some(f64::INFINITY),
            "-INF" => Some(f64::NEG_INFINITY),
            "NaN" => Some(f64::NAN),
            other => other.parse().ok(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "\"{}\"^^<{}>",
            escape_string(&self.lexical),
            self.datatype.iri()
        )
    }
}

/// Escapes `\`, `"`, newline, carriage return and tab.
pub fn escape_string(s: &str) -> Cow<'_, str> {
    if !s.contains(['\\', '"', '\n', '\r', '\t']) {
        return Cow::Borrowed(s);
    }
    let mut out = String::with_capacity(s.len() + 8);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    Cow::Owned(out)
}

/// Object position of a triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
        }
    }
}

/// Ordered by N-Triples serialized form.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a.0.cmp(&b.0),
            // '"' sorts before '<'
            (Term::Literal(_), Term::Iri(_)) => Ordering::Less,
            (Term::Iri(_), Term::Literal(_)) => Ordering::Greater,
            (Term::Literal(a), Term::Literal(b)) => {
                if a == b {
                    Ordering::Equal
                } else {
                    a.to_string().cmp(&b.to_string())
                }
            }
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by (subject, predicate, serialized object).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A set of triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph(BTreeSet<Triple>);

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Returns whether the triple was new.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.0.insert(triple)
    }

    pub fn add(&mut self, subject: &Iri, predicate: &Iri, object: impl Into<Term>) -> bool {
        self.insert(Triple::new(subject.clone(), predicate.clone(), object))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.0.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Triple> {
        self.0.iter()
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union_with(&mut self, other: &Graph) {
        self.0.extend(other.0.iter().cloned());
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph(iter.into_iter().collect())
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl IntoIterator for Graph {
    type Item = Triple;
    type IntoIter = btree_set::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Canonical N-Triples: one line per triple, lines sorted bytewise.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(Triple::to_string).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    let mut graph = Graph::new();
    for (index, line) in text.lines().enumerate() {
        let mut cursor = LineCursor {
            line: index + 1,
            text: line,
            pos: 0,
        };
        if let Some(triple) = cursor.statement()? {
            graph.insert(triple);
        }
    }
    Ok(graph)
}

struct LineCursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl LineCursor<'_> {
    fn error(&self, message: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn at_end_or_comment(&self) -> bool {
        matches!(self.peek(), None | Some('#'))
    }

    fn statement(&mut self) -> Result<Option<Triple>, RdfError> {
        self.skip_ws();
        if self.at_end_or_comment() {
            return Ok(None);
        }
        let subject = self.resource("subject")?;
        self.skip_ws();
        let predicate = self.resource("predicate")?;
        self.skip_ws();
        let object = match self.peek() {
            Some('"') => Term::Literal(self.literal()?),
            _ => Term::Iri(self.resource("object")?),
        };
        self.skip_ws();
        if self.bump() != Some('.') {
            return Err(self.error("expected '.' at end of statement"));
        }
        self.skip_ws();
        if !self.at_end_or_comment() {
            return Err(self.error("unexpected content after '.'"));
        }
        Ok(Some(Triple {
            subject,
            predicate,
            object,
        }))
    }

    fn resource(&mut self, position: &str) -> Result<Iri, RdfError> {
        match self.peek() {
            Some('<') => self.iri(),
            Some('_') if self.rest().starts_with("_:") => {
                Err(self.error(format!("blank node {position} is not supported")))
            }
            _ => Err(self.error(format!("expected IRI as {position}"))),
        }
    }

    fn iri(&mut self) -> Result<Iri, RdfError> {
        let start = self.pos;
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => value.push(self.hex_escape(4)?),
                    Some('U') => value.push(self.hex_escape(8)?),
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some(c) => value.push(c),
            }
        }
        Iri::new(value).map_err(|e| {
            self.pos = start;
            self.error(e.to_string())
        })
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let hex = self.rest().get(..digits).unwrap_or_default();
        if hex.len() != digits || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(self.error("malformed \\u escape"));
        }
        let decoded = u32::from_str_radix(hex, 16).ok().and_then(char::from_u32);
        self.pos += digits;
        decoded.ok_or_else(|| self.error("escape is not a valid code point"))
    }

    fn literal(&mut self) -> Result<Literal, RdfError> {
        self.bump();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        Some(other) => {
                            return Err(self.error(format!("unknown escape \\{other}")))
                        }
                        None => return Err(self.error("unterminated escape")),
                    };
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
            }
        }
        let datatype = if self.rest().starts_with("^^") {
            self.pos += 2;
            if self.peek() != Some('<') {
                return Err(self.error("expected datatype IRI after ^^"));
            }
            let iri = self.iri()?;
            Datatype::from_iri(iri.as_str())
                .ok_or_else(|| self.error(RdfError::UnsupportedDatatype(iri.0).to_string()))?
        } else if self.peek() == Some('@') {
            return Err(self.error("language-tagged literals are not supported"));
        } else {
            Datatype::String
        };
        Literal::new(lexical, datatype).map_err(|e| self.error(e.to_string()))
    }
}

/// Prefix name to namespace IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap(BTreeMap<String, Iri>);

impl PrefixMap {
    pub fn new() -> Self {
        PrefixMap::default()
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: Iri) {
        self.0.insert(prefix.into(), namespace);
    }

    pub fn get(&self, prefix: &str) -> Option<&Iri> {
        self.0.get(prefix)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `prefix:local` for the longest namespace that yields a safe local name.
    pub fn compact(&self, iri: &str) -> Option<String> {
        self.0
            .iter()
            .filter_map(|(prefix, ns)| {
                let local = iri.strip_prefix(ns.as_str())?;
                is_safe_local_name(local).then(|| (ns.as_str().len(), prefix, local))
            })
            .max_by_key(|(len, _, _)| *len)
            .map(|(_, prefix, local)| format!("{prefix}:{local}"))
    }
}

impl FromIterator<(String, Iri)> for PrefixMap {
    fn from_iter<I: IntoIterator<Item = (String, Iri)>>(iter: I) -> Self {
        PrefixMap(iter.into_iter().collect())
    }
}

/// Conservative subset of Turtle's PN_LOCAL.
fn is_safe_local_name(local: &str) -> bool {
    let mut chars = local.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn turtle_iri(iri: &str, prefixes: &PrefixMap) -> String {
    prefixes.compact(iri).unwrap_or_else(|| format!("<{iri}>"))
}

fn turtle_literal(lit: &Literal, prefixes: &PrefixMap) -> String {
    let lexical = lit.lexical();
    let bare = match lit.datatype() {
        Datatype::Integer => is_integer_lexical(lexical),
        Datatype::Decimal => {
            is_decimal_lexical(lexical)
                && lexical.contains('.')
                && !lexical.ends_with('.')
        }
        Datatype::Boolean => true,
        _ => false,
    };
    if bare {
        lexical.to_string()
    } else if lit.datatype() == Datatype::String {
        format!("\"{}\"", escape_string(lexical))
    } else {
        format!(
            "\"{}\"^^{}",
            escape_string(lexical),
            turtle_iri(lit.datatype().iri(), prefixes)
        )
    }
}

/// Turtle with `@prefix` headers, one block per subject, `;` between
/// predicates and `,` between objects.
pub fn serialize_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (prefix, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {prefix}: <{}> .", ns.as_str());
    }

    let mut by_subject: BTreeMap<&Iri, BTreeMap<&Iri, Vec<&Term>>> = BTreeMap::new();
    for t in graph {
        by_subject
            .entry(&t.subject)
            .or_default()
            .entry(&t.predicate)
            .or_default()
            .push(&t.object);
    }

    for (subject, predicates) in by_subject {
        out.push('\n');
        out.push_str(&turtle_iri(subject.as_str(), prefixes));
        let count = predicates.len();
        for (i, (predicate, objects)) in predicates.into_iter().enumerate() {
            let p = if predicate.as_str() == RDF_TYPE {
                "a".to_string()
            } else {
                turtle_iri(predicate.as_str(), prefixes)
            };
            let objects: Vec<String> = objects
                .into_iter()
                .map(|o| match o {
                    Term::Iri(iri) => turtle_iri(iri.as_str(), prefixes),
                    Term::Literal(lit) => turtle_literal(lit, prefixes),
                })
                .collect();
            let sep = if i == 0 { " " } else { "    " };
            let end = if i + 1 == count { " ." } else { " ;" };
            let _ = writeln!(out, "{sep}{p} {}{end}", objects.join(", "));
        }
    }
    out
}
