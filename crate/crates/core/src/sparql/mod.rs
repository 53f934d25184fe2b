//! A SPARQL subset: `SELECT` over basic graph patterns with `FILTER EXISTS`,
//! `FILTER NOT EXISTS`, single-variable comparisons, one `ORDER BY` key and
//! `LIMIT`. Results serialize to the SPARQL 1.1 JSON results format.

use std::fmt;

use thiserror::Error;

use crate::rdfmodel::{escape_string, Iri, Literal, PrefixMap, Term};

mod eval;
pub(crate) mod parser;

pub use eval::{evaluate, to_sparql_json, ResultTable};
pub use parser::parse_query;

/// Media type of [`to_sparql_json`] output.
pub const RESULTS_JSON_MEDIA_TYPE: &str = "application/sparql-results+json";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SparqlError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix {prefix:?} at line {line}, column {column}")]
    UnknownPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
    #[error("projected variable ?{0} does not appear in the WHERE patterns")]
    UnboundProjection(String),
    #[error("ORDER BY variable ?{0} does not appear in the WHERE patterns")]
    UnboundOrderKey(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Variable(String),
    Iri(Iri),
    Literal(Literal),
}

impl PatternTerm {
    pub fn variable(&self) -> Option<&str> {
        match self {
            PatternTerm::Variable(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Variable(v) => write!(f, "?{v}"),
            PatternTerm::Iri(iri) => iri.fmt(f),
            PatternTerm::Literal(lit) => write_literal(f, lit),
        }
    }
}

fn write_literal(f: &mut fmt::Formatter<'_>, lit: &Literal) -> fmt::Result {
    write!(
        f,
        "\"{}\"^^<{}>",
        escape_string(lit.lexical()),
        lit.datatype().iri()
    )
}

/// A triple pattern whose positions may be variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTriple {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl PatternTriple {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(PatternTerm::variable)
    }
}

impl fmt::Display for PatternTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    /// The operator with its operands swapped (`a < b` ⇔ `b > a`).
    pub fn flipped(self) -> Self {
        match self {
            CompareOp::Lt => CompareOp::Gt,
            CompareOp::Le => CompareOp::Ge,
            CompareOp::Gt => CompareOp::Lt,
            CompareOp::Ge => CompareOp::Le,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    Exists(Vec<PatternTriple>),
    NotExists(Vec<PatternTriple>),
    Compare {
        variable: String,
        op: CompareOp,
        value: Term,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBy {
    pub variable: String,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectQuery {
    pub prefixes: PrefixMap,
    pub projection: Vec<String>,
    pub patterns: Vec<PatternTriple>,
    pub filters: Vec<Filter>,
    pub order: Option<OrderBy>,
    pub limit: Option<usize>,
}

impl SelectQuery {
    /// Variables of the main patterns, in order of first appearance.
    pub fn pattern_variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for v in self.patterns.iter().flat_map(PatternTriple::variables) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }
}

fn write_group(f: &mut fmt::Formatter<'_>, patterns: &[PatternTriple], indent: &str) -> fmt::Result {
    for p in patterns {
        writeln!(f, "{indent}{p}")?;
    }
    Ok(())
}

/// Prints the query with every IRI written out in full; parsing the output
/// yields an equal query.
impl fmt::Display for SelectQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (prefix, ns) in self.prefixes.iter() {
            writeln!(f, "PREFIX {prefix}: {ns}")?;
        }
        write!(f, "SELECT")?;
        for v in &self.projection {
            write!(f, " ?{v}")?;
        }
        writeln!(f, "\nWHERE {{")?;
        write_group(f, &self.patterns, "  ")?;
        for filter in &self.filters {
            match filter {
                Filter::Exists(group) | Filter::NotExists(group) => {
                    let not = if matches!(filter, Filter::NotExists(_)) { "NOT " } else { "" };
                    writeln!(f, "  FILTER {not}EXISTS {{")?;
                    write_group(f, group, "    ")?;
                    writeln!(f, "  }}")?;
                }
                Filter::Compare {
                    variable,
                    op,
                    value,
                } => {
                    write!(f, "  FILTER (?{variable} {} ", op.symbol())?;
                    match value {
                        Term::Iri(iri) => write!(f, "{iri}")?,
                        Term::Literal(lit) => write_literal(f, lit)?,
                    }
                    writeln!(f, ")")?;
                }
            }
        }
        write!(f, "}}")?;
        if let Some(order) = &self.order {
            let dir = if order.descending { "DESC" } else { "ASC" };
            write!(f, "\nORDER BY {dir}(?{})", order.variable)?;
        }
        if let Some(limit) = self.limit {
            write!(f, "\nLIMIT {limit}")?;
        }
        writeln!(f)
    }
}
