//! Embedded triple store.
//!
//! Terms are dictionary-encoded to `u32` ids and every triple is kept in
//! three ordered indexes (SPO, POS, OSP) so that any pattern with at least
//! one bound position is answered by a range scan.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io;
use std::ops::RangeInclusive;
use std::path::Path;
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use thiserror::Error;

use crate::rdfmodel::{parse_ntriples, serialize_ntriples, Graph, Iri, RdfError, Term, Triple};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: RdfError,
    },
}

/// `None` positions are wildcards.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: Option<Iri>,
    pub predicate: Option<Iri>,
    pub object: Option<Term>,
}

impl TriplePattern {
    pub fn any() -> Self {
        TriplePattern::default()
    }

    pub fn with_subject(subject: Iri) -> Self {
        TriplePattern {
            subject: Some(subject),
            ..Self::default()
        }
    }

    pub fn with_predicate(predicate: Iri) -> Self {
        TriplePattern {
            predicate: Some(predicate),
            ..Self::default()
        }
    }

    pub fn matches(&self, t: &Triple) -> bool {
        self.subject.as_ref().is_none_or(|s| *s == t.subject)
            && self.predicate.as_ref().is_none_or(|p| *p == t.predicate)
            && self.object.as_ref().is_none_or(|o| *o == t.object)
    }
}

type Key = [u32; 3];

#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    terms: Vec<Term>,
    ids: HashMap<Term, u32>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
}

fn prefix_range(a: u32, b: Option<u32>) -> RangeInclusive<Key> {
    match b {
        Some(b) => [a, b, 0]..=[a, b, u32::MAX],
        None => [a, 0, 0]..=[a, u32::MAX, u32::MAX],
    }
}

impl TripleStore {
    pub fn new() -> Self {
        TripleStore::default()
    }

    pub fn from_graph(graph: &Graph) -> Self {
        let mut store = TripleStore::new();
        store.load(graph);
        store
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: Term) -> u32 {
        if let Some(&id) = self.ids.get(&term) {
            return id;
        }
        let id = u32::try_from(self.terms.len()).expect("term dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term, id);
        id
    }

    fn id_of(&self, term: &Term) -> Option<u32> {
        self.ids.get(term).copied()
    }

    fn iri_id(&self, iri: &Iri) -> Option<u32> {
        // TODO: avoid the clone by keying the dictionary on a borrowed form
        self.id_of(&Term::Iri(iri.clone()))
    }

    /// Returns whether the triple was new.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let s = self.intern(Term::Iri(triple.subject));
        let p = self.intern(Term::Iri(triple.predicate));
        let o = self.intern(triple.object);
        if !self.spo.insert([s, p, o]) {
            return false;
        }
        self.pos.insert([p, o, s]);
        self.osp.insert([o, s, p]);
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        let (Some(s), Some(p), Some(o)) = (
            self.iri_id(&triple.subject),
            self.iri_id(&triple.predicate),
            self.id_of(&triple.object),
        ) else {
            return false;
        };
        self.spo.contains(&[s, p, o])
    }

    /// Removes every triple with subject `subject`; returns how many.
    pub fn remove_by_subject(&mut self, subject: &Iri) -> usize {
        let Some(s) = self.iri_id(subject) else {
            return 0;
        };
        let doomed: Vec<Key> = self.spo.range(prefix_range(s, None)).copied().collect();
        for &[s, p, o] in &doomed {
            self.spo.remove(&[s, p, o]);
            self.pos.remove(&[p, o, s]);
            self.osp.remove(&[o, s, p]);
        }
        doomed.len()
    }

    /// Bulk union insert; returns the number of new triples.
    pub fn load(&mut self, graph: &Graph) -> usize {
        graph.iter().filter(|t| self.insert((*t).clone())).count()
    }

    pub fn export(&self) -> Graph {
        self.spo.iter().map(|&k| self.decode_spo(k)).collect()
    }

    fn decode_spo(&self, [s, p, o]: Key) -> Triple {
        let iri = |id: u32| match &self.terms[id as usize] {
            Term::Iri(iri) => iri.clone(),
            Term::Literal(_) => unreachable!("subject and predicate ids always name IRIs"),
        };
        Triple {
            subject: iri(s),
            predicate: iri(p),
            object: self.terms[o as usize].clone(),
        }
    }

    /// Triples unifying with `pattern`, in canonical (subject, predicate,
    /// object) order.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Triple> {
        let resolve_iri = |iri: &Option<Iri>| match iri {
            None => Ok(None),
            Some(iri) => self.iri_id(iri).map(Some).ok_or(()),
        };
        let resolve_term = |term: &Option<Term>| match term {
            None => Ok(None),
            Some(term) => self.id_of(term).map(Some).ok_or(()),
        };
        let (Ok(s), Ok(p), Ok(o)) = (
            resolve_iri(&pattern.subject),
            resolve_iri(&pattern.predicate),
            resolve_term(&pattern.object),
        ) else {
            return Vec::new();
        };

        let keys: Vec<Key> = match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&[s, p, o]) {
                    vec![[s, p, o]]
                } else {
                    vec![]
                }
            }
            (Some(s), p, None) => self.spo.range(prefix_range(s, p)).copied().collect(),
            (Some(s), None, Some(o)) => self
                .osp
                .range(prefix_range(o, Some(s)))
                .map(|&[o, s, p]| [s, p, o])
                .collect(),
            (None, Some(p), o) => self
                .pos
                .range(prefix_range(p, o))
                .map(|&[p, o, s]| [s, p, o])
                .collect(),
            (None, None, Some(o)) => self
                .osp
                .range(prefix_range(o, None))
                .map(|&[o, s, p]| [s, p, o])
                .collect(),
            (None, None, None) => self.spo.iter().copied().collect(),
        };
        let mut triples: Vec<Triple> = keys.into_iter().map(|k| self.decode_spo(k)).collect();
        triples.sort_unstable();
        triples
    }

    /// Writes the store as canonical N-Triples.
    pub fn save_ntriples(&self, path: &Path) -> Result<(), StoreError> {
        fs::write(path, serialize_ntriples(&self.export())).map_err(|source| StoreError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Reads an N-Triples file; a missing file yields an empty store.
    pub fn open_ntriples(path: &Path) -> Result<Self, StoreError> {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(TripleStore::new()),
            Err(source) => {
                return Err(StoreError::Io {
                    path: path.display().to_string(),
                    source,
                })
            }
        };
        let graph = parse_ntriples(&text).map_err(|source| StoreError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        Ok(TripleStore::from_graph(&graph))
    }

    #[cfg(test)]
    fn assert_coherent(&self) {
        let from_pos: BTreeSet<Key> = self.pos.iter().map(|&[p, o, s]| [s, p, o]).collect();
        let from_osp: BTreeSet<Key> = self.osp.iter().map(|&[o, s, p]| [s, p, o]).collect();
        assert_eq!(from_pos, self.spo);
        assert_eq!(from_osp, self.spo);
    }
}

/// A store shared between threads under a single-writer / multi-reader
/// discipline.
#[derive(Debug, Clone, Default)]
pub struct SharedStore(Arc<RwLock<TripleStore>>);

impl SharedStore {
    pub fn new(store: TripleStore) -> Self {
        SharedStore(Arc::new(RwLock::new(store)))
    }

    pub fn read(&self) -> RwLockReadGuard<'_, TripleStore> {
        self.0.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn write(&self) -> RwLockWriteGuard<'_, TripleStore> {
        self.0.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn len(&self) -> usize {
        self.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.read().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{foaf, term};
    use crate::rdfmodel::Literal;
    use proptest::prelude::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o))
    }

    #[test]
    fn insert_has_set_semantics() {
        let mut store = TripleStore::new();
        let x = t("http://s/", "http://p/", "http://o/");
        assert!(store.insert(x.clone()));
        assert!(!store.insert(x.clone()));
        assert_eq!(store.len(), 1);
        assert_eq!(store.match_pattern(&TriplePattern::with_subject(iri("http://s/"))), vec![x]);
    }

    #[test]
    fn insert_distinct() {
        let mut store = TripleStore::new();
        for o in ["http://o/1", "http://o/2", "http://o/3"] {
            store.insert(t("http://s/", "http://p/", o));
        }
        assert_eq!(store.len(), 3);
        store.assert_coherent();
    }

    #[test]
    fn remove_by_subject() {
        let mut store = TripleStore::new();
        assert_eq!(store.remove_by_subject(&iri("http://nobody/")), 0);
        for i in 0..6 {
            store.insert(t("http://s/", &format!("http://p/{i}"), "http://o/"));
        }
        store.insert(t("http://other/", "http://p/0", "http://s/"));
        assert_eq!(store.remove_by_subject(&iri("http://s/")), 6);
        assert_eq!(store.len(), 1);
        assert!(store.match_pattern(&TriplePattern::with_subject(iri("http://s/"))).is_empty());
        // the triple pointing at s as object survives
        assert_eq!(
            store
                .match_pattern(&TriplePattern {
                    object: Some(Term::Iri(iri("http://s/"))),
                    ..TriplePattern::any()
                })
                .len(),
            1
        );
        store.assert_coherent();
    }

    #[test]
    fn match_by_predicate_across_accounts() {
        let mut store = TripleStore::new();
        let name = term(foaf::ACCOUNT_NAME);
        for who in ["a", "b"] {
            let acct = iri(&format!("http://x/resource/TwitterAccount/{who}"));
            store.insert(Triple::new(acct.clone(), name.clone(), Literal::string(who)));
            store.insert(Triple::new(acct, iri("http://p/other"), Literal::integer(1)));
        }
        assert_eq!(store.match_pattern(&TriplePattern::with_predicate(name)).len(), 2);
        assert_eq!(store.match_pattern(&TriplePattern::any()).len(), 4);
    }

    #[test]
    fn ground_pattern_is_membership() {
        let mut store = TripleStore::new();
        let x = t("http://s/", "http://p/", "http://o/");
        store.insert(x.clone());
        let ground = |o: &str| TriplePattern {
            subject: Some(iri("http://s/")),
            predicate: Some(iri("http://p/")),
            object: Some(Term::Iri(iri(o))),
        };
        assert_eq!(store.match_pattern(&ground("http://o/")), vec![x]);
        assert!(store.match_pattern(&ground("http://nope/")).is_empty());
    }

    #[test]
    fn load_and_export() {
        let g: Graph = (0..5)
            .map(|i| t("http://s/", "http://p/", &format!("http://o/{i}")))
            .collect();
        let mut store = TripleStore::new();
        assert!(store.export().is_empty());
        assert_eq!(store.load(&g), 5);
        assert_eq!(store.load(&g), 0);
        assert_eq!(store.len(), 5);
        assert_eq!(store.export(), g);
    }

    #[test]
    fn file_persistence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("graph.nt");
        assert!(TripleStore::open_ntriples(&path).unwrap().is_empty());
        let mut store = TripleStore::new();
        store.insert(Triple::new(iri("http://s/"), iri("http://p/"), Literal::string("x\ny")));
        store.save_ntriples(&path).unwrap();
        assert_eq!(TripleStore::open_ntriples(&path).unwrap().export(), store.export());

        fs::write(&path, "garbage\n").unwrap();
        assert!(matches!(
            TripleStore::open_ntriples(&path),
            Err(StoreError::Parse { .. })
        ));
    }

    #[test]
    fn shared_store_is_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<SharedStore>();
        check::<TripleStore>();
    }

    fn small_iri() -> impl Strategy<Value = Iri> {
        (0u8..6).prop_map(|i| iri(&format!("http://n/{i}")))
    }

    fn small_term() -> impl Strategy<Value = Term> {
        prop_oneof![
            small_iri().prop_map(Term::Iri),
            (0i64..4).prop_map(|i| Term::Literal(Literal::integer(i))),
        ]
    }

    fn small_triple() -> impl Strategy<Value = Triple> {
        (small_iri(), small_iri(), small_term()).prop_map(|(s, p, o)| Triple::new(s, p, o))
    }

    fn small_pattern() -> impl Strategy<Value = TriplePattern> {
        (
            prop::option::of(small_iri()),
            prop::option::of(small_iri()),
            prop::option::of(small_term()),
        )
            .prop_map(|(subject, predicate, object)| TriplePattern {
                subject,
                predicate,
                object,
            })
    }

    #[derive(Debug, Clone)]
    enum Op {
        Insert(Triple),
        RemoveSubject(Iri),
    }

    proptest! {
        #[test]
        fn match_equals_scan(triples in prop::collection::vec(small_triple(), 0..80), pattern in small_pattern()) {
            let store = TripleStore::from_graph(&triples.into_iter().collect());
            let scan: Vec<Triple> = store.export().into_iter().filter(|t| pattern.matches(t)).collect();
            prop_assert_eq!(store.match_pattern(&pattern), scan);
        }

        #[test]
        fn indexes_stay_coherent(ops in prop::collection::vec(prop_oneof![
            3 => small_triple().prop_map(Op::Insert),
            1 => small_iri().prop_map(Op::RemoveSubject),
        ], 0..120), probes in prop::collection::vec(small_pattern(), 1..8)) {
            let mut store = TripleStore::new();
            let mut model = Graph::new();
            for op in ops {
                match op {
                    Op::Insert(t) => prop_assert_eq!(store.insert(t.clone()), model.insert(t)),
                    Op::RemoveSubject(s) => {
                        let before = model.len();
                        model = model.into_iter().filter(|t| t.subject != s).collect();
                        prop_assert_eq!(store.remove_by_subject(&s), before - model.len());
                    }
                }
            }
            store.assert_coherent();
            prop_assert_eq!(store.len(), model.len());
            prop_assert_eq!(store.export(), model.clone());
            for p in probes {
                let scan: Vec<Triple> = model.iter().filter(|t| p.matches(t)).cloned().collect();
                prop_assert_eq!(store.match_pattern(&p), scan);
            }
        }
    }
}
