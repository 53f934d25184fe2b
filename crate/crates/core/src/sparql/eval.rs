use std::cmp::Ordering;
use std::collections::HashMap;

use chrono::DateTime;
use serde_json::{json, Map, Value};

use crate::rdfmodel::{Datatype, Iri, Term, Triple};
use crate::store::{TriplePattern, TripleStore};

use super::{CompareOp, Filter, PatternTerm, PatternTriple, SelectQuery};

/// Projected solutions in result order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one column, in row order.
    pub fn column(&self, var: &str) -> Option<Vec<&Term>> {
        let i = self.vars.iter().position(|v| v == var)?;
        Some(self.rows.iter().map(|row| &row[i]).collect())
    }
}

type Solution = Vec<Option<Term>>;

/// Pattern with variables resolved to slot indexes.
#[derive(Debug, Clone)]
enum Slot {
    Var(usize),
    Const(Term),
}

#[derive(Debug)]
struct Compiled {
    patterns: Vec<[Slot; 3]>,
}

struct Slots {
    names: HashMap<String, usize>,
}

impl Slots {
    fn slot(&mut self, name: &str) -> usize {
        let next = self.names.len();
        *self.names.entry(name.to_string()).or_insert(next)
    }

    fn compile(&mut self, patterns: &[PatternTriple]) -> Compiled {
        let mut resolve = |t: &PatternTerm| match t {
            PatternTerm::Variable(v) => Slot::Var(self.slot(v)),
            PatternTerm::Iri(iri) => Slot::Const(Term::Iri(iri.clone())),
            PatternTerm::Literal(lit) => Slot::Const(Term::Literal(lit.clone())),
        };
        Compiled {
            patterns: patterns
                .iter()
                .map(|p| [resolve(&p.subject), resolve(&p.predicate), resolve(&p.object)])
                .collect(),
        }
    }
}

enum CompiledFilter {
    Exists(Compiled, bool),
    Compare(usize, CompareOp, Term),
}

/// Evaluates a parsed query against the store.
///
/// Rows are ordered by the ORDER BY key when present, then by the projected
/// values; the row order is deterministic for a given store content.
pub fn evaluate(query: &SelectQuery, store: &TripleStore) -> ResultTable {
    let mut slots = Slots {
        names: HashMap::new(),
    };
    let main = slots.compile(&query.patterns);
    let filters: Vec<CompiledFilter> = query
        .filters
        .iter()
        .map(|f| match f {
            Filter::Exists(g) => CompiledFilter::Exists(slots.compile(g), true),
            Filter::NotExists(g) => CompiledFilter::Exists(slots.compile(g), false),
            Filter::Compare {
                variable,
                op,
                value,
            } => CompiledFilter::Compare(slots.slot(variable), *op, value.clone()),
        })
        .collect();
    let width = slots.names.len();
    let projection: Vec<usize> = query.projection.iter().map(|v| slots.names[v]).collect();
    let order_slot = query.order.as_ref().map(|o| slots.names[&o.variable]);

    let mut keyed: Vec<(Option<Term>, Vec<Term>)> = Vec::new();
    let mut solution: Solution = vec![None; width];
    solve(store, &main.patterns, &mut solution, &mut |sol| {
        if filters.iter().all(|f| passes(store, f, sol)) {
            let row = projection
                .iter()
                .map(|&i| sol[i].clone().expect("projected variables are bound by the patterns"))
                .collect();
            keyed.push((order_slot.and_then(|i| sol[i].clone()), row));
        }
        true
    });

    keyed.sort_by(|a, b| order_key(a.0.as_ref(), b.0.as_ref()).then_with(|| a.1.cmp(&b.1)));
    if query.order.as_ref().is_some_and(|o| o.descending) {
        keyed.reverse();
    }
    let mut rows: Vec<Vec<Term>> = keyed.into_iter().map(|(_, row)| row).collect();
    if let Some(limit) = query.limit {
        rows.truncate(limit);
    }
    ResultTable {
        vars: query.projection.clone(),
        rows,
    }
}

/// Depth-first join over `patterns`, calling `emit` for each full solution.
/// Returns false once `emit` asks to stop.
fn solve(
    store: &TripleStore,
    patterns: &[[Slot; 3]],
    solution: &mut Solution,
    emit: &mut dyn FnMut(&Solution) -> bool,
) -> bool {
    let Some((first, rest)) = patterns.split_first() else {
        return emit(solution);
    };
    let bound = |slot: &Slot, sol: &Solution| match slot {
        Slot::Const(t) => Some(t.clone()),
        Slot::Var(i) => sol[*i].clone(),
    };
    let (s, p, o) = (
        bound(&first[0], solution),
        bound(&first[1], solution),
        bound(&first[2], solution),
    );
    let as_iri = |t: Option<Term>| -> Result<Option<Iri>, ()> {
        match t {
            None => Ok(None),
            Some(Term::Iri(iri)) => Ok(Some(iri)),
            Some(Term::Literal(_)) => Err(()),
        }
    };
    let (Ok(subject), Ok(predicate)) = (as_iri(s), as_iri(p)) else {
        return true;
    };
    let pattern = TriplePattern {
        subject,
        predicate,
        object: o,
    };
    for triple in store.match_pattern(&pattern) {
        let mut newly = Vec::new();
        if bind_triple(first, &triple, solution, &mut newly) && !solve(store, rest, solution, emit) {
            return false;
        }
        for i in newly {
            solution[i] = None;
        }
    }
    true
}

/// Binds unbound variables of `pattern` to `triple`; fails when a variable
/// repeated within the pattern would take two different values.
fn bind_triple(pattern: &[Slot; 3], triple: &Triple, solution: &mut Solution, newly: &mut Vec<usize>) -> bool {
    let values = [
        Term::Iri(triple.subject.clone()),
        Term::Iri(triple.predicate.clone()),
        triple.object.clone(),
    ];
    for (slot, value) in pattern.iter().zip(values) {
        if let Slot::Var(i) = slot {
            match &solution[*i] {
                Some(existing) if *existing != value => return false,
                Some(_) => {}
                None => {
                    solution[*i] = Some(value);
                    newly.push(*i);
                }
            }
        }
    }
    true
}

fn passes(store: &TripleStore, filter: &CompiledFilter, solution: &Solution) -> bool {
    match filter {
        CompiledFilter::Exists(group, wanted) => {
            let mut scratch = solution.clone();
            let mut found = false;
            solve(store, &group.patterns, &mut scratch, &mut |_| {
                found = true;
                false
            });
            found == *wanted
        }
        CompiledFilter::Compare(slot, op, value) => match &solution[*slot] {
            Some(term) => compare(term, *op, value),
            None => false,
        },
    }
}

/// Comparison used by `FILTER (?v op constant)`.
///
/// Numeric literals compare by value; literals of the same datatype compare
/// by lexical form (dateTime by instant); IRIs compare by their text.
/// Operands of different kinds are unequal and unordered.
pub(crate) fn compare(left: &Term, op: CompareOp, right: &Term) -> bool {
    let ordering = match (left, right) {
        (Term::Iri(a), Term::Iri(b)) => Some(a.as_str().cmp(b.as_str())),
        (Term::Literal(a), Term::Literal(b)) => match (a.numeric_value(), b.numeric_value()) {
            (Some(x), Some(y)) => x.partial_cmp(&y),
            (None, None) if a.datatype() == b.datatype() => {
                if a.datatype() == Datatype::DateTime {
                    match (
                        DateTime::parse_from_rfc3339(a.lexical()),
                        DateTime::parse_from_rfc3339(b.lexical()),
                    ) {
                        (Ok(x), Ok(y)) => Some(x.cmp(&y)),
                        _ => Some(a.lexical().cmp(b.lexical())),
                    }
                } else {
                    Some(a.lexical().cmp(b.lexical()))
                }
            }
            _ => None,
        },
        _ => None,
    };
    match (op, ordering) {
        (CompareOp::Eq, o) => o == Some(Ordering::Equal),
        (CompareOp::Ne, o) => o != Some(Ordering::Equal),
        (_, None) => false,
        (CompareOp::Lt, Some(o)) => o == Ordering::Less,
        (CompareOp::Le, Some(o)) => o != Ordering::Greater,
        (CompareOp::Gt, Some(o)) => o == Ordering::Greater,
        (CompareOp::Ge, Some(o)) => o != Ordering::Less,
    }
}

/// Ascending ORDER BY: numeric values first (by value), then other terms in
/// canonical order, then unbound.
fn order_key(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    let numeric = |t: Option<&Term>| t.and_then(Term::as_literal).and_then(|l| l.numeric_value());
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => match (numeric(a), numeric(b)) {
            (Some(m), Some(n)) => m.total_cmp(&n),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => x.cmp(y),
        },
    }
}

/// Serializes a result table in the SPARQL 1.1 JSON results format.
pub fn to_sparql_json(table: &ResultTable) -> Value {
    let bindings: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut binding = Map::new();
            for (var, term) in table.vars.iter().zip(row) {
                let value = match term {
                    Term::Iri(iri) => json!({"type": "uri", "value": iri.as_str()}),
                    Term::Literal(lit) => json!({
                        "type": "literal",
                        "value": lit.lexical(),
                        "datatype": lit.datatype().iri(),
                    }),
                };
                binding.insert(var.clone(), value);
            }
            Value::Object(binding)
        })
        .collect();
    json!({
        "head": {"vars": table.vars},
        "results": {"bindings": bindings},
    })
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use proptest::prelude::*;

    use super::*;
    use crate::ontology::{foaf, it, term};
    use crate::rdfmodel::{Graph, Literal};
    use crate::sparql::parse_query;

    const RES: &str = "http://www.influencetracker.com/resource/";

    fn user(name: &str) -> Iri {
        Iri::new(format!("{RES}User/{name}")).unwrap()
    }

    fn node(kind: &str, name: &str) -> Iri {
        Iri::new(format!("{RES}{kind}/{name}")).unwrap()
    }

    fn add_profile(g: &mut Graph, name: &str, influence: f64) {
        let u = user(name);
        let account = node("TwitterAccount", name);
        let quality = node("QualityMetrics", name);
        let general = node("GeneralInfo", name);
        g.add(&u, &term(foaf::ACCOUNT), account.clone());
        g.add(&u, &term(it::HAS_QUALITY_METRICS), quality.clone());
        g.add(&u, &term(it::HAS_GENERAL_INFO), general.clone());
        g.add(&account, &term(foaf::ACCOUNT_NAME), Literal::string(name));
        g.add(&quality, &term(it::INFLUENCE_METRIC), Literal::decimal(influence));
        for p in [it::H_INDEX_RT, it::H_INDEX_FAV] {
            g.add(&quality, &term(p), Literal::integer(3));
        }
        for p in [it::H_INDEX_RT_DAILY, it::H_INDEX_FAV_DAILY, it::REPLY_RATIO] {
            g.add(&quality, &term(p), Literal::decimal(0.5));
        }
        for p in [it::TWEETS, it::FOLLOWING, it::FOLLOWERS] {
            g.add(&general, &term(p), Literal::integer(100));
        }
        for p in [it::TWEETS_PER_DAY, it::RT_PERCENT] {
            g.add(&general, &term(p), Literal::decimal(1.0));
        }
    }

    fn mention_graph(with_d: bool) -> Graph {
        let mut g = Graph::new();
        for (name, im) in [("alice", 1.0), ("bob", 2.5), ("carol", 9.0), ("dave", 7.25)] {
            add_profile(&mut g, name, im);
        }
        let alice = user("alice");
        g.add(&alice, &term(it::HAS_MENTIONED), user("bob"));
        g.add(&alice, &term(it::HAS_MENTIONED), user("carol"));
        g.add(&alice, &term(it::HAS_REPLIED_TO), user("bob"));
        if with_d {
            g.add(&alice, &term(it::HAS_MENTIONED), user("dave"));
            g.add(&alice, &term(it::HAS_REPLIED_TO), user("dave"));
        }
        g
    }

    fn names(table: &ResultTable) -> Vec<String> {
        table
            .column("accountName")
            .unwrap()
            .into_iter()
            .map(|t| t.as_literal().unwrap().lexical().to_string())
            .collect()
    }

    #[test]
    fn mention_reply_query() {
        let query = parse_query(super::super::parser::tests::REFERENCE_QUERY).unwrap();
        let store = TripleStore::from_graph(&mention_graph(false));
        let table = evaluate(&query, &store);
        assert_eq!(table.vars.len(), 13);
        assert_eq!(names(&table), vec!["bob"]);

        let store = TripleStore::from_graph(&mention_graph(true));
        let table = evaluate(&query, &store);
        assert_eq!(names(&table), vec!["dave", "bob"]);
        assert_eq!(table.column("influenceMetric").unwrap()[0], &Term::Literal(Literal::decimal(7.25)));
    }

    #[test]
    fn json_results_shape() {
        let store = TripleStore::from_graph(&mention_graph(false));
        let query = parse_query(super::super::parser::tests::REFERENCE_QUERY).unwrap();
        let json = to_sparql_json(&evaluate(&query, &store));
        assert_eq!(json["head"]["vars"].as_array().unwrap().len(), 13);
        let b = &json["results"]["bindings"][0];
        assert_eq!(b["twitterAccount"]["type"], "uri");
        assert_eq!(b["twitterAccount"]["value"], format!("{RES}TwitterAccount/bob"));
        assert_eq!(b["influenceMetric"]["type"], "literal");
        assert_eq!(b["influenceMetric"]["value"], "2.500");
        assert_eq!(
            b["influenceMetric"]["datatype"],
            "http://www.w3.org/2001/XMLSchema#decimal"
        );
    }

    #[test]
    fn repeated_variable_in_pattern() {
        let mut g = Graph::new();
        let a = user("a");
        let b = user("b");
        let p = term(it::HAS_MENTIONED);
        g.add(&a, &p, a.clone());
        g.add(&a, &p, b.clone());
        let store = TripleStore::from_graph(&g);
        let q = parse_query("SELECT ?x WHERE { ?x ?p ?x }").unwrap();
        assert_eq!(evaluate(&q, &store).rows, vec![vec![Term::Iri(a)]]);
    }

    #[test]
    fn comparison_semantics() {
        let int = |n: i64| Term::Literal(Literal::integer(n));
        let dec = |x: f64| Term::Literal(Literal::decimal(x));
        let s = |x: &str| Term::Literal(Literal::string(x));
        assert!(compare(&int(3), CompareOp::Eq, &dec(3.0)));
        assert!(compare(&int(2), CompareOp::Lt, &dec(2.5)));
        assert!(compare(&s("b"), CompareOp::Gt, &s("a")));
        assert!(!compare(&s("3"), CompareOp::Eq, &int(3)));
        assert!(compare(&s("3"), CompareOp::Ne, &int(3)));
        assert!(!compare(&s("3"), CompareOp::Lt, &int(4)));
        assert!(!compare(&s("3"), CompareOp::Ge, &int(4)));
        let a = Term::Iri(user("a"));
        assert!(compare(&a, CompareOp::Eq, &a));
        assert!(compare(&a, CompareOp::Ne, &s("a")));
        let t1 = Term::Literal(Literal::new("2024-01-01T10:00:00+02:00", Datatype::DateTime).unwrap());
        let t2 = Term::Literal(Literal::new("2024-01-01T09:00:00Z", Datatype::DateTime).unwrap());
        assert!(compare(&t1, CompareOp::Lt, &t2));
    }

    #[test]
    fn order_puts_numbers_before_other_terms() {
        let mut g = Graph::new();
        let p = term(it::FOLLOWERS);
        g.add(&user("a"), &p, Literal::integer(10));
        g.add(&user("b"), &p, Literal::decimal(9.5));
        g.add(&user("c"), &p, Literal::string("many"));
        g.add(&user("d"), &p, user("x"));
        let store = TripleStore::from_graph(&g);
        let q = parse_query(&format!("SELECT ?s WHERE {{ ?s <{}> ?o }} ORDER BY ?o", it::FOLLOWERS)).unwrap();
        let got: Vec<Term> = evaluate(&q, &store).rows.into_iter().map(|r| r[0].clone()).collect();
        let expect: Vec<Term> = ["b", "a", "c", "d"].iter().map(|n| Term::Iri(user(n))).collect();
        assert_eq!(got, expect);
    }

    // --- exhaustive oracle ---------------------------------------------------

    const SUBJECTS: [&str; 4] = ["a", "b", "c", "d"];
    const PREDICATES: [&str; 3] = [it::HAS_MENTIONED, it::HAS_REPLIED_TO, it::FOLLOWERS];

    fn triple_strategy() -> impl Strategy<Value = Triple> {
        (0..4usize, 0..3usize, 0..6usize).prop_map(|(s, p, o)| {
            let object = if o < 4 {
                Term::Iri(user(SUBJECTS[o]))
            } else {
                Term::Literal(Literal::integer(o as i64))
            };
            Triple::new(user(SUBJECTS[s]), term(PREDICATES[p]), object)
        })
    }

    fn graph_strategy() -> impl Strategy<Value = Graph> {
        prop::collection::vec(triple_strategy(), 0..25).prop_map(Graph::from_iter)
    }

    fn pattern_term(choice: usize, pos: usize) -> String {
        // variables ?x ?y ?z or constants
        match choice {
            0..=2 => format!("?{}", ["x", "y", "z"][choice]),
            _ if pos == 1 => format!("<{}>", PREDICATES[choice % 3]),
            _ if pos == 2 && choice == 6 => "4".into(),
            _ => format!("<{}>", user(SUBJECTS[choice % 4]).as_str()),
        }
    }

    fn bgp_strategy() -> impl Strategy<Value = Vec<[String; 3]>> {
        prop::collection::vec((0..7usize, 0..7usize, 0..7usize), 1..4).prop_map(|ps| {
            ps.into_iter()
                .map(|(s, p, o)| [pattern_term(s.min(5), 0), pattern_term(p, 1), pattern_term(o, 2)])
                .collect()
        })
    }

    fn parse_const(text: &str) -> Term {
        if let Some(iri) = text.strip_prefix('<') {
            Term::Iri(Iri::new(iri.trim_end_matches('>')).unwrap())
        } else {
            Term::Literal(Literal::new(text, Datatype::Integer).unwrap())
        }
    }

    /// Independent evaluator: scans every triple for every pattern, with
    /// string-keyed bindings.
    fn oracle(graph: &Graph, patterns: &[[String; 3]]) -> Vec<BTreeMap<String, Term>> {
        let mut solutions = vec![BTreeMap::new()];
        for pattern in patterns {
            let mut next = Vec::new();
            for sol in &solutions {
                'triples: for t in graph {
                    let values = [
                        Term::Iri(t.subject.clone()),
                        Term::Iri(t.predicate.clone()),
                        t.object.clone(),
                    ];
                    let mut sol = sol.clone();
                    for (text, value) in pattern.iter().zip(values) {
                        if let Some(var) = text.strip_prefix('?') {
                            match sol.get(var) {
                                Some(v) if *v != value => continue 'triples,
                                Some(_) => {}
                                None => {
                                    sol.insert(var.to_string(), value);
                                }
                            }
                        } else if parse_const(text) != value {
                            continue 'triples;
                        }
                    }
                    next.push(sol);
                }
            }
            solutions = next;
        }
        solutions
    }

    fn query_text(patterns: &[[String; 3]], vars: &[String], extra: &str) -> String {
        let body: Vec<String> = patterns.iter().map(|p| format!("{} {} {} .", p[0], p[1], p[2])).collect();
        let proj: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
        format!("SELECT {} WHERE {{ {} {extra} }}", proj.join(" "), body.join(" "))
    }

    fn vars_of(patterns: &[[String; 3]]) -> Vec<String> {
        let mut vars = Vec::new();
        for t in patterns.iter().flatten() {
            if let Some(v) = t.strip_prefix('?') {
                if !vars.iter().any(|x| x == v) {
                    vars.push(v.to_string());
                }
            }
        }
        vars
    }

    fn rows_multiset(rows: Vec<Vec<Term>>) -> BTreeMap<Vec<Term>, usize> {
        let mut m = BTreeMap::new();
        for r in rows {
            *m.entry(r).or_insert(0) += 1;
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn bgp_matches_oracle(graph in graph_strategy(), patterns in bgp_strategy()) {
            let vars = vars_of(&patterns);
            prop_assume!(!vars.is_empty());
            let query = parse_query(&query_text(&patterns, &vars, "")).unwrap();
            let got = evaluate(&query, &TripleStore::from_graph(&graph));
            let expected: Vec<Vec<Term>> = oracle(&graph, &patterns)
                .into_iter()
                .map(|sol| vars.iter().map(|v| sol[v].clone()).collect())
                .collect();
            prop_assert_eq!(rows_multiset(got.rows), rows_multiset(expected));
        }

        #[test]
        fn exists_partitions_solutions(
            graph in graph_strategy(),
            patterns in bgp_strategy(),
            group in bgp_strategy(),
        ) {
            let vars = vars_of(&patterns);
            prop_assume!(!vars.is_empty());
            let group_text: Vec<String> = group.iter().map(|p| format!("{} {} {} .", p[0], p[1], p[2])).collect();
            let group_text = group_text.join(" ");
            let store = TripleStore::from_graph(&graph);
            let run = |extra: &str| {
                let q = parse_query(&query_text(&patterns, &vars, extra)).unwrap();
                evaluate(&q, &store).rows
            };
            let all = rows_multiset(run(""));
            let with = rows_multiset(run(&format!("FILTER EXISTS {{ {group_text} }}")));
            let without = rows_multiset(run(&format!("FILTER NOT EXISTS {{ {group_text} }}")));
            let mut combined = with.clone();
            for (row, n) in without {
                *combined.entry(row).or_insert(0) += n;
            }
            prop_assert_eq!(&combined, &all);
            // EXISTS keeps a solution iff the oracle finds a match for the
            // group under its bindings
            let all_vars: BTreeSet<String> = vars.iter().cloned().collect();
            for (row, _) in with {
                let bound: BTreeMap<String, Term> = vars.iter().cloned().zip(row).collect();
                let substituted: Vec<[String; 3]> = group
                    .iter()
                    .map(|p| p.clone().map(|t| match t.strip_prefix('?') {
                        Some(v) if all_vars.contains(v) => match &bound[v] {
                            Term::Iri(iri) => format!("<{}>", iri.as_str()),
                            Term::Literal(l) => l.lexical().to_string(),
                        },
                        _ => t,
                    }))
                    .collect();
                prop_assert!(!oracle(&graph, &substituted).is_empty());
            }
        }

        #[test]
        fn desc_reverses_asc(graph in graph_strategy(), patterns in bgp_strategy()) {
            let vars = vars_of(&patterns);
            prop_assume!(!vars.is_empty());
            let store = TripleStore::from_graph(&graph);
            let key = &vars[vars.len() - 1];
            let run = |order: &str| {
                let q = parse_query(&format!("{} ORDER BY {order}", query_text(&patterns, &vars, ""))).unwrap();
                evaluate(&q, &store).rows
            };
            let mut asc = run(&format!("ASC(?{key})"));
            let desc = run(&format!("DESC(?{key})"));
            asc.reverse();
            prop_assert_eq!(asc, desc);
        }

        #[test]
        fn limit_takes_a_prefix(graph in graph_strategy(), patterns in bgp_strategy(), limit in 1..10usize) {
            let vars = vars_of(&patterns);
            prop_assume!(!vars.is_empty());
            let store = TripleStore::from_graph(&graph);
            let text = query_text(&patterns, &vars, "");
            let full = evaluate(&parse_query(&text).unwrap(), &store).rows;
            let limited = evaluate(&parse_query(&format!("{text} LIMIT {limit}")).unwrap(), &store).rows;
            prop_assert_eq!(&limited[..], &full[..full.len().min(limit)]);
        }

        #[test]
        fn printed_queries_reparse(patterns in bgp_strategy(), group in bgp_strategy(), desc in any::<bool>()) {
            let vars = vars_of(&patterns);
            prop_assume!(!vars.is_empty());
            let group_text: Vec<String> = group.iter().map(|p| format!("{} {} {} .", p[0], p[1], p[2])).collect();
            let order = if desc { format!("DESC(?{})", vars[0]) } else { format!("?{}", vars[0]) };
            let text = format!(
                "{} ORDER BY {order} LIMIT 3",
                query_text(&patterns, &vars, &format!("FILTER NOT EXISTS {{ {} }} FILTER (?{} != 4)", group_text.join(" "), vars[0]))
            );
            let q = parse_query(&text).unwrap();
            prop_assert_eq!(parse_query(&q.to_string()).unwrap(), q);
        }
    }
}
