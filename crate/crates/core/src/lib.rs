//! Influence metrics for Twitter accounts and their publication as linked
//! data.
//!
//! The pipeline parses an account's timeline ([`ingest`]), computes the
//! h-index based quality measures and the Influence Metric ([`metrics`]),
//! converts the result into RDF under the InfluenceTracker ontology
//! ([`ontology`], [`rdfmodel`]), and keeps the graph in an embedded
//! [`store`] that can be queried with a SPARQL subset ([`sparql`]).
//! [`rankeval`] compares the resulting ranking with another system's.

pub mod decimal;
pub mod ingest;
pub mod metrics;
pub mod ontology;
pub mod rankeval;
pub mod rdfmodel;
pub mod sparql;
pub mod store;

pub use ingest::{
    parse_timeline, run_update_cycle, search_account, FixtureDir, MetricsLog, MetricsRecord,
    TimelineSource, UpdateReport,
};
pub use metrics::{
    AccountProfile, AccountSnapshot, AdjustedTweets, GeneralInfo, QualityMetrics, TimelineWindow,
    Tweet,
};
pub use rankeval::{compare_rankings, RankComparison};
pub use rdfmodel::{Datatype, Graph, Iri, Literal, PrefixMap, Term, Triple};
pub use sparql::{evaluate, parse_query, ResultTable, SelectQuery, SparqlError};
pub use store::{SharedStore, TriplePattern, TripleStore};
