use crate::ontology::rdf;
use crate::rdfmodel::{Datatype, Iri, Literal, PrefixMap, Term};

use super::{CompareOp, Filter, OrderBy, PatternTerm, PatternTriple, SelectQuery, SparqlError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Var(String),
    Str(String),
    LangTag,
    Number(String, Datatype),
    Word(String),
    Punct(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::IriRef(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Var(v) => format!("?{v}"),
            Tok::Str(_) => "string literal".into(),
            Tok::LangTag => "language tag".into(),
            Tok::Number(n, _) => n.clone(),
            Tok::Word(w) => w.clone(),
            Tok::Punct(p) => format!("'{p}'"),
            Tok::Eof => "end of query".into(),
        }
    }

    fn is_word(&self, keyword: &str) -> bool {
        matches!(self, Tok::Word(w) if w.eq_ignore_ascii_case(keyword))
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

const PUNCTS: [&str; 15] = [
    "^^", "!=", "<=", ">=", "{", "}", "(", ")", ".", ";", ",", "=", "<", ">", "*",
];

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn syntax(&self, at: usize, message: impl Into<String>) -> SparqlError {
        let (line, column) = line_col(self.text, at);
        SparqlError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c| !pred(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, SparqlError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let start = self.pos;
            let tok = self.next_token()?;
            let done = tok == Tok::Eof;
            out.push((tok, start));
            if done {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<Tok, SparqlError> {
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(Tok::Eof);
        };
        match c {
            '<' => {
                if let Some(iri) = self.try_iri_ref() {
                    return Ok(Tok::IriRef(iri));
                }
            }
            '?' | '$' => {
                self.pos += 1;
                let name = self.take_while(is_name_char);
                if name.is_empty() {
                    return Err(self.syntax(start, "expected variable name"));
                }
                return Ok(Tok::Var(name.to_string()));
            }
            '"' | '\'' => return self.string(c),
            '@' => {
                self.pos += 1;
                self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                return Ok(Tok::LangTag);
            }
            c if c.is_ascii_digit() => return Ok(self.number()),
            '+' | '-' if self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) => {
                return Ok(self.number())
            }
            c if is_name_char(c) || c == ':' => return self.word_or_pname(),
            _ => {}
        }
        for p in PUNCTS {
            if self.rest().starts_with(p) {
                self.pos += p.len();
                return Ok(Tok::Punct(p));
            }
        }
        Err(self.syntax(start, format!("unexpected character {c:?}")))
    }

    /// `<...>` when it forms a well-formed IRI reference; otherwise the `<`
    /// is left for the comparison operator.
    fn try_iri_ref(&mut self) -> Option<String> {
        let body = &self.rest()[1..];
        let end = body.find(|c: char| c == '>' || c.is_whitespace() || "<\"{}|^`".contains(c))?;
        if !body[end..].starts_with('>') {
            return None;
        }
        self.pos += end + 2;
        Some(body[..end].to_string())
    }

    fn string(&mut self, quote: char) -> Result<Tok, SparqlError> {
        let start = self.pos;
        self.pos += 1;
        let mut value = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(self.syntax(start, "unterminated string literal"));
            };
            self.pos += c.len_utf8();
            match c {
                c if c == quote => return Ok(Tok::Str(value)),
                '\n' | '\r' => return Err(self.syntax(start, "line break in string literal")),
                '\\' => {
                    let esc = self.peek();
                    self.pos += esc.map_or(0, char::len_utf8);
                    value.push(match esc {
                        Some('t') => '\t',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        _ => return Err(self.syntax(self.pos - 1, "unknown escape sequence")),
                    });
                }
                c => value.push(c),
            }
        }
    }

    fn number(&mut self) -> Tok {
        let start = self.pos;
        if self.rest().starts_with(['+', '-']) {
            self.pos += 1;
        }
        self.take_while(|c| c.is_ascii_digit());
        let mut datatype = Datatype::Integer;
        let rest = self.rest();
        if rest.starts_with('.') && rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            self.take_while(|c| c.is_ascii_digit());
            datatype = Datatype::Decimal;
        }
        let rest = self.rest();
        if rest.starts_with(['e', 'E']) {
            let after = rest[1..].strip_prefix(['+', '-']).unwrap_or(&rest[1..]);
            if after.starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += rest.len() - after.len();
                self.take_while(|c| c.is_ascii_digit());
                datatype = Datatype::Double;
            }
        }
        Tok::Number(self.text[start..self.pos].to_string(), datatype)
    }

    fn word_or_pname(&mut self) -> Result<Tok, SparqlError> {
        let start = self.pos;
        let word = self.take_while(|c| is_name_char(c) || c == '-' || c == '.');
        // a trailing '.' ends the statement, not the name
        let word = word.trim_end_matches('.');
        self.pos = start + word.len();
        if self.peek() != Some(':') {
            if word.contains(['-', '.']) {
                return Err(self.syntax(start, format!("unexpected word {word:?}")));
            }
            return Ok(Tok::Word(word.to_string()));
        }
        self.pos += 1;
        let local_start = self.pos;
        loop {
            let rest = self.rest();
            match rest.chars().next() {
                Some(c) if is_name_char(c) || c == '-' => self.pos += c.len_utf8(),
                Some('.') if rest[1..].starts_with(|c: char| is_name_char(c) || c == '-') => {
                    self.pos += 1
                }
                Some('%') if rest.len() >= 3 && rest[1..3].bytes().all(|b| b.is_ascii_hexdigit()) => {
                    self.pos += 3
                }
                _ => break,
            }
        }
        Ok(Tok::PName {
            prefix: word.to_string(),
            local: self.text[local_start..self.pos].to_string(),
        })
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    (line, column)
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<(Tok, usize)>,
    index: usize,
    prefixes: PrefixMap,
}

/// Parses the supported SELECT subset.
pub fn parse_query(text: &str) -> Result<SelectQuery, SparqlError> {
    let tokens = Lexer { text, pos: 0 }.tokens()?;
    let mut parser = Parser {
        text,
        tokens,
        index: 0,
        prefixes: PrefixMap::new(),
    };
    parser.query()
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.index].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.index].1
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.index].0.clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> SparqlError {
        let (line, column) = line_col(self.text, self.offset());
        SparqlError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> SparqlError {
        self.error(format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), SparqlError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{p}'")))
        }
    }

    fn eat_word(&mut self, keyword: &str) -> bool {
        if self.peek().is_word(keyword) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, keyword: &str) -> Result<(), SparqlError> {
        if self.eat_word(keyword) {
            Ok(())
        } else {
            Err(self.unexpected(keyword))
        }
    }

    fn query(&mut self) -> Result<SelectQuery, SparqlError> {
        while self.eat_word("PREFIX") {
            let Tok::PName { prefix, local } = self.advance() else {
                self.index -= 1;
                return Err(self.unexpected("prefix declaration like `it:`"));
            };
            if !local.is_empty() {
                self.index -= 1;
                return Err(self.error("prefix name must end with ':'"));
            }
            let ns = self.iri_ref()?;
            self.prefixes.insert(prefix, ns);
        }
        if self.peek().is_word("BASE") {
            return Err(self.error("BASE is not supported"));
        }
        if !self.eat_word("SELECT") {
            for unsupported in ["ASK", "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE"] {
                if self.peek().is_word(unsupported) {
                    return Err(self.error(format!("{unsupported} queries are not supported")));
                }
            }
            return Err(self.unexpected("SELECT"));
        }
        if self.peek().is_word("DISTINCT") || self.peek().is_word("REDUCED") {
            return Err(self.error("DISTINCT/REDUCED are not supported"));
        }

        let mut projection = Vec::new();
        let mut star = false;
        if self.eat_punct("*") {
            star = true;
        } else {
            while let Tok::Var(v) = self.peek().clone() {
                if projection.contains(&v) {
                    return Err(self.error(format!("?{v} is projected twice")));
                }
                self.advance();
                projection.push(v);
            }
            if projection.is_empty() {
                return Err(self.unexpected("projected variable"));
            }
        }

        self.eat_word("WHERE");
        let (patterns, filters) = self.group(true)?;

        let mut order = None;
        if self.eat_word("ORDER") {
            self.expect_word("BY")?;
            order = Some(self.order_condition()?);
            if !matches!(self.peek(), Tok::Eof) && !self.peek().is_word("LIMIT") {
                return Err(self.error("only one ORDER BY key is supported"));
            }
        }
        let mut limit = None;
        if self.eat_word("LIMIT") {
            match self.advance() {
                Tok::Number(n, Datatype::Integer) if !n.starts_with(['+', '-']) => {
                    let n: usize = n.parse().map_err(|_| self.error("LIMIT out of range"))?;
                    if n == 0 {
                        self.index -= 1;
                        return Err(self.error("LIMIT must be positive"));
                    }
                    limit = Some(n);
                }
                _ => {
                    self.index -= 1;
                    return Err(self.unexpected("positive integer"));
                }
            }
        }
        if !matches!(self.peek(), Tok::Eof) {
            return Err(self.unexpected("end of query"));
        }

        let mut query = SelectQuery {
            prefixes: std::mem::take(&mut self.prefixes),
            projection,
            patterns,
            filters,
            order,
            limit,
        };
        let bound: Vec<String> = query.pattern_variables().into_iter().map(String::from).collect();
        if star {
            query.projection = bound.clone();
            if query.projection.is_empty() {
                return Err(self.error("SELECT * needs at least one variable in the patterns"));
            }
        }
        if let Some(v) = query.projection.iter().find(|v| !bound.contains(v)) {
            return Err(SparqlError::UnboundProjection(v.clone()));
        }
        if let Some(order) = &query.order {
            if !bound.contains(&order.variable) {
                return Err(SparqlError::UnboundOrderKey(order.variable.clone()));
            }
        }
        Ok(query)
    }

    fn order_condition(&mut self) -> Result<OrderBy, SparqlError> {
        let descending = if self.eat_word("DESC") {
            true
        } else {
            self.eat_word("ASC");
            false
        };
        let bracketed = self.eat_punct("(");
        let Tok::Var(variable) = self.advance() else {
            self.index -= 1;
            return Err(self.unexpected("ORDER BY variable"));
        };
        if bracketed {
            self.expect_punct(")")?;
        } else if descending {
            return Err(self.error("DESC needs a bracketed variable"));
        }
        Ok(OrderBy {
            variable,
            descending,
        })
    }

    /// `{ ... }` with triple patterns and (in the outer group) filters.
    fn group(&mut self, allow_filters: bool) -> Result<(Vec<PatternTriple>, Vec<Filter>), SparqlError> {
        self.expect_punct("{")?;
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            if self.eat_punct("}") {
                return Ok((patterns, filters));
            }
            if self.peek().is_word("FILTER") {
                if !allow_filters {
                    return Err(self.error("FILTER inside EXISTS is not supported"));
                }
                self.advance();
                filters.push(self.filter()?);
                self.eat_punct(".");
                continue;
            }
            for unsupported in ["OPTIONAL", "UNION", "MINUS", "BIND", "VALUES", "GRAPH", "SERVICE"] {
                if self.peek().is_word(unsupported) {
                    return Err(self.error(format!("{unsupported} is not supported")));
                }
            }
            self.triples_same_subject(&mut patterns)?;
            if !self.eat_punct(".") && !matches!(self.peek(), Tok::Punct("}")) && !self.peek().is_word("FILTER") {
                return Err(self.unexpected("'.', '}' or FILTER"));
            }
        }
    }

    fn triples_same_subject(&mut self, out: &mut Vec<PatternTriple>) -> Result<(), SparqlError> {
        let subject = match self.term()? {
            PatternTerm::Literal(_) => return Err(self.error("literal cannot be a subject")),
            t => t,
        };
        loop {
            let predicate = if self.eat_word("a") {
                PatternTerm::Iri(crate::ontology::term(rdf::TYPE))
            } else {
                match self.term()? {
                    PatternTerm::Literal(_) => return Err(self.error("literal cannot be a predicate")),
                    t => t,
                }
            };
            loop {
                let object = self.term()?;
                out.push(PatternTriple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                return Ok(());
            }
            // trailing ';' before '.' or '}'
            while self.eat_punct(";") {}
            if matches!(self.peek(), Tok::Punct(".") | Tok::Punct("}")) {
                return Ok(());
            }
        }
    }

    fn filter(&mut self) -> Result<Filter, SparqlError> {
        if self.eat_word("EXISTS") {
            return Ok(Filter::Exists(self.exists_group()?));
        }
        if self.eat_word("NOT") {
            self.expect_word("EXISTS")?;
            return Ok(Filter::NotExists(self.exists_group()?));
        }
        self.expect_punct("(")?;
        let left = self.term()?;
        let op = match self.advance() {
            Tok::Punct("=") => CompareOp::Eq,
            Tok::Punct("!=") => CompareOp::Ne,
            Tok::Punct("<") => CompareOp::Lt,
            Tok::Punct("<=") => CompareOp::Le,
            Tok::Punct(">") => CompareOp::Gt,
            Tok::Punct(">=") => CompareOp::Ge,
            _ => {
                self.index -= 1;
                return Err(self.unexpected("comparison operator"));
            }
        };
        let right = self.term()?;
        self.expect_punct(")")?;
        let constant = |t: PatternTerm| match t {
            PatternTerm::Iri(iri) => Some(Term::Iri(iri)),
            PatternTerm::Literal(lit) => Some(Term::Literal(lit)),
            PatternTerm::Variable(_) => None,
        };
        match (left, right) {
            (PatternTerm::Variable(variable), other) => Ok(Filter::Compare {
                variable,
                op,
                value: constant(other)
                    .ok_or_else(|| self.error("comparisons need one variable and one constant"))?,
            }),
            (other, PatternTerm::Variable(variable)) => Ok(Filter::Compare {
                variable,
                op: op.flipped(),
                value: constant(other).expect("non-variable"),
            }),
            _ => Err(self.error("comparisons need one variable and one constant")),
        }
    }

    fn exists_group(&mut self) -> Result<Vec<PatternTriple>, SparqlError> {
        let (patterns, _) = self.group(false)?;
        if patterns.is_empty() {
            return Err(self.error("EXISTS group must contain at least one pattern"));
        }
        Ok(patterns)
    }

    fn iri_ref(&mut self) -> Result<Iri, SparqlError> {
        match self.advance() {
            Tok::IriRef(text) => Iri::new(text).map_err(|e| {
                self.index -= 1;
                self.error(e.to_string())
            }),
            _ => {
                self.index -= 1;
                Err(self.unexpected("IRI"))
            }
        }
    }

    fn term(&mut self) -> Result<PatternTerm, SparqlError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Var(v) => {
                self.advance();
                Ok(PatternTerm::Variable(v))
            }
            Tok::IriRef(_) => Ok(PatternTerm::Iri(self.iri_ref()?)),
            Tok::PName { prefix, local } => {
                self.advance();
                Ok(PatternTerm::Iri(self.expand(&prefix, &local, offset)?))
            }
            Tok::Str(value) => {
                self.advance();
                let datatype = match self.peek() {
                    Tok::LangTag => return Err(self.error("language-tagged literals are not supported")),
                    Tok::Punct("^^") => {
                        self.advance();
                        let dt_offset = self.offset();
                        let iri = match self.advance() {
                            Tok::IriRef(text) => Iri::new(text).map_err(|e| self.error(e.to_string()))?,
                            Tok::PName { prefix, local } => self.expand(&prefix, &local, dt_offset)?,
                            _ => {
                                self.index -= 1;
                                return Err(self.unexpected("datatype IRI"));
                            }
                        };
                        Datatype::from_iri(iri.as_str()).ok_or_else(|| {
                            self.error(format!("unsupported datatype {}", iri))
                        })?
                    }
                    _ => Datatype::String,
                };
                Literal::new(value, datatype)
                    .map(PatternTerm::Literal)
                    .map_err(|e| self.error(e.to_string()))
            }
            Tok::Number(n, datatype) => {
                self.advance();
                Literal::new(n, datatype)
                    .map(PatternTerm::Literal)
                    .map_err(|e| self.error(e.to_string()))
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.advance();
                Ok(PatternTerm::Literal(Literal::boolean(w == "true")))
            }
            _ => Err(self.unexpected("variable, IRI or literal")),
        }
    }

    fn expand(&self, prefix: &str, local: &str, offset: usize) -> Result<Iri, SparqlError> {
        let Some(ns) = self.prefixes.get(prefix) else {
            let (line, column) = line_col(self.text, offset);
            return Err(SparqlError::UnknownPrefix {
                prefix: prefix.to_string(),
                line,
                column,
            });
        };
        Iri::new(format!("{}{local}", ns.as_str())).map_err(|e| {
            let (line, column) = line_col(self.text, offset);
            SparqlError::Syntax {
                line,
                column,
                message: e.to_string(),
            }
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ontology::{foaf, it, term};

    pub(crate) const REFERENCE_QUERY: &str = r#"PREFIX it: <http://www.influencetracker.com/ontology#>
PREFIX foaf: <http://xmlns.com/foaf/0.1/>
SELECT ?twitterAccount ?accountName ?influenceMetric ?h_index_RT ?h_index_Fav ?tweetsNum ?following
?followers ?TPD ?rtPerc ?h_index_RT_Daily ?h_index_Fav_Daily ?reply_ratio
WHERE {
  <http://www.influencetracker.com/resource/User/alice> it:hasMentioned ?mentioned .
  ?mentioned foaf:account ?twitterAccount ;
    it:hasQualityMetrics ?quality ;
    it:hasGeneralInfo ?general .
  ?twitterAccount foaf:accountName ?accountName .
  ?quality it:influenceMetric ?influenceMetric ;
    it:hIndexRt ?h_index_RT ;
    it:hIndexFav ?h_index_Fav ;
    it:hIndexRtDaily ?h_index_RT_Daily ;
    it:hIndexFavDaily ?h_index_Fav_Daily ;
    it:replyRatio ?reply_ratio .
  ?general it:tweets ?tweetsNum ;
    it:following ?following ;
    it:followers ?followers ;
    it:tweetsPerDay ?TPD ;
    it:rtPercent ?rtPerc .
  FILTER EXISTS { <http://www.influencetracker.com/resource/User/alice> it:hasRepliedTo ?mentioned}
}
ORDER BY DESC (?influenceMetric)
"#;

    #[test]
    fn parses_the_mention_reply_query() {
        let q = parse_query(REFERENCE_QUERY).unwrap();
        assert_eq!(q.projection.len(), 13);
        // 1 + 3 + 1 + 6 + 5 after expanding ';'
        assert_eq!(q.patterns.len(), 16);
        assert_eq!(q.filters.len(), 1);
        let Filter::Exists(group) = &q.filters[0] else {
            panic!("{:?}", q.filters[0])
        };
        assert_eq!(group.len(), 1);
        assert_eq!(group[0].predicate, PatternTerm::Iri(term(it::HAS_REPLIED_TO)));
        assert_eq!(
            q.order,
            Some(OrderBy {
                variable: "influenceMetric".into(),
                descending: true
            })
        );
        assert_eq!(q.patterns[1].predicate, PatternTerm::Iri(term(foaf::ACCOUNT)));
        assert_eq!(q.patterns[1].subject, PatternTerm::Variable("mentioned".into()));
    }

    #[test]
    fn minimal_query() {
        let q = parse_query("SELECT ?s WHERE { ?s ?p ?o }").unwrap();
        assert_eq!(q.patterns.len(), 1);
        assert!(q.filters.is_empty());
        assert_eq!(q.projection, vec!["s"]);
        assert_eq!(q.limit, None);
    }

    #[test]
    fn projection_must_be_bound() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?s ?p ?o }"),
            Err(SparqlError::UnboundProjection("x".into()))
        );
        assert_eq!(
            parse_query("SELECT ?s WHERE { ?s ?p ?o } ORDER BY ?z"),
            Err(SparqlError::UnboundOrderKey("z".into()))
        );
    }

    #[test]
    fn unknown_prefix_reports_position() {
        match parse_query("SELECT ?s WHERE {\n  ?s ex:p ?o }") {
            Err(SparqlError::UnknownPrefix { prefix, line, column }) => {
                assert_eq!((prefix.as_str(), line, column), ("ex", 2, 6));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "SELEC ?s",
            "SELECT ?s WHERE { ?s ?p }",
            "SELECT ?s WHERE { ?s ?p ?o ",
            "SELECT WHERE { ?s ?p ?o }",
            "SELECT ?s WHERE { \"lit\" ?p ?o }",
            "SELECT ?s WHERE { ?s ?p ?o } LIMIT 0",
            "SELECT ?s WHERE { ?s ?p ?o } LIMIT x",
            "SELECT ?s WHERE { ?s ?p ?o FILTER EXISTS { } }",
            "SELECT ?s WHERE { ?s ?p ?o FILTER (?s = ?o) }",
            "SELECT ?s WHERE { ?s ?p \"x\"@en }",
            "SELECT DISTINCT ?s WHERE { ?s ?p ?o }",
            "SELECT ?s WHERE { OPTIONAL { ?s ?p ?o } }",
            "SELECT ?s ?s WHERE { ?s ?p ?o }",
            "SELECT ?s WHERE { ?s ?p ?o } ORDER BY ?s ?o",
            "SELECT ?s WHERE { ?s <relative> ?o }",
            "ASK { ?s ?p ?o }",
        ] {
            assert!(parse_query(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn syntax_error_position() {
        match parse_query("SELECT ?s\nWHERE { ?s ?p }") {
            Err(SparqlError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 15)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abbreviations_and_literals() {
        let q = parse_query(
            "PREFIX it: <http://www.influencetracker.com/ontology#>
             SELECT * WHERE {
               ?u a it:User ; it:followers 10, 2.5, 1e3, -4 ; it:profileLocked false ;
                  it:description 'it''s' , \"x\\ty\"^^<http://www.w3.org/2001/XMLSchema#string> ;
             } LIMIT 5",
        );
        // 'it''s' is two adjacent strings, which is an error
        assert!(q.is_err());
        let q = parse_query(
            "PREFIX it: <http://www.influencetracker.com/ontology#>
             PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
             SELECT * WHERE {
               ?u a it:User ; it:followers 10, 2.5, 1e3, -4 ; it:profileLocked false ;
                  it:description 'its' , \"x\\ty\"^^xsd:string ;
             } LIMIT 5",
        )
        .unwrap();
        assert_eq!(q.projection, vec!["u"]);
        assert_eq!(q.limit, Some(5));
        let objects: Vec<String> = q.patterns.iter().map(|p| p.object.to_string()).collect();
        assert_eq!(
            objects,
            vec![
                "<http://www.influencetracker.com/ontology#User>",
                "\"10\"^^<http://www.w3.org/2001/XMLSchema#integer>",
                "\"2.5\"^^<http://www.w3.org/2001/XMLSchema#decimal>",
                "\"1e3\"^^<http://www.w3.org/2001/XMLSchema#double>",
                "\"-4\"^^<http://www.w3.org/2001/XMLSchema#integer>",
                "\"false\"^^<http://www.w3.org/2001/XMLSchema#boolean>",
                "\"its\"^^<http://www.w3.org/2001/XMLSchema#string>",
                "\"x\\ty\"^^<http://www.w3.org/2001/XMLSchema#string>",
            ]
        );
    }

    #[test]
    fn comparison_filters() {
        let q = parse_query(
            "SELECT ?s WHERE { ?s ?p ?o . FILTER (?o >= 3) FILTER (10 > ?o) . FILTER NOT EXISTS { ?o ?p ?s } }",
        )
        .unwrap();
        assert_eq!(q.filters.len(), 3);
        assert!(matches!(
            &q.filters[1],
            Filter::Compare { op: CompareOp::Lt, variable, .. } if variable == "o"
        ));
        assert!(matches!(&q.filters[2], Filter::NotExists(g) if g.len() == 1));
        // '<' as operator next to an IRI-like token
        let q = parse_query("SELECT ?s WHERE { ?s ?p ?o FILTER (?o<5) }").unwrap();
        assert!(matches!(&q.filters[0], Filter::Compare { op: CompareOp::Lt, .. }));
    }

    #[test]
    fn comments_and_dollar_variables() {
        let q = parse_query("# find things\nSELECT $s # the subject\nWHERE { $s ?p ?o . }").unwrap();
        assert_eq!(q.projection, vec!["s"]);
    }

    #[test]
    fn printed_query_reparses() {
        let q = parse_query(REFERENCE_QUERY).unwrap();
        let printed = q.to_string();
        assert_eq!(parse_query(&printed).unwrap(), q);
    }
}
