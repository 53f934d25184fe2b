use std::collections::BTreeSet;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::Utc;
use influence_core::ingest::{self, FetchError, IngestError};
use influence_core::ontology::{default_prefixes, resource_iri, ResourceKind};
use influence_core::rdfmodel::{serialize_ntriples, serialize_turtle};
use influence_core::sparql::{self, RESULTS_JSON_MEDIA_TYPE};
use influence_core::{Graph, Iri, Term, TriplePattern, TripleStore};
use serde::Deserialize;

use crate::AppState;

/// Hops followed from a resource when describing it.
const DESCRIPTION_DEPTH: usize = 2;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/endpoint", get(sparql_get).post(sparql_post))
        .route("/sparql", get(sparql_get).post(sparql_post))
        .route("/resource/{kind}/{name}", get(resource))
        .route("/searchAccount", get(search))
        .with_state(state)
}

type HandlerError = (StatusCode, String);

fn plain(status: StatusCode, message: impl Into<String>) -> HandlerError {
    (status, message.into())
}

#[derive(Debug, Deserialize)]
struct QueryParams {
    query: Option<String>,
}

async fn sparql_get(State(state): State<AppState>, Query(params): Query<QueryParams>) -> Response {
    match params.query {
        Some(text) => run_query(state, text).await,
        None => plain(StatusCode::BAD_REQUEST, "missing `query` parameter").into_response(),
    }
}

async fn sparql_post(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let media = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .map(|v| v.trim().to_ascii_lowercase())
        .unwrap_or_default();
    let text = match media.as_str() {
        "application/x-www-form-urlencoded" => match serde_urlencoded::from_bytes::<QueryParams>(&body) {
            Ok(QueryParams { query: Some(q) }) => q,
            Ok(_) => return plain(StatusCode::BAD_REQUEST, "missing `query` parameter").into_response(),
            Err(e) => return plain(StatusCode::BAD_REQUEST, e.to_string()).into_response(),
        },
        "application/sparql-query" => match String::from_utf8(body.to_vec()) {
            Ok(q) => q,
            Err(_) => return plain(StatusCode::BAD_REQUEST, "query is not UTF-8").into_response(),
        },
        _ => {
            return plain(
                StatusCode::UNSUPPORTED_MEDIA_TYPE,
                "send application/x-www-form-urlencoded or application/sparql-query",
            )
            .into_response()
        }
    };
    run_query(state, text).await
}

async fn run_query(state: AppState, text: String) -> Response {
    let query = match sparql::parse_query(&text) {
        Ok(q) => q,
        Err(e) => return plain(StatusCode::BAD_REQUEST, e.to_string()).into_response(),
    };
    let evaluated = tokio::task::spawn_blocking(move || {
        let table = sparql::evaluate(&query, &state.store().read());
        sparql::to_sparql_json(&table)
    })
    .await;
    match evaluated {
        Ok(json) => ([(header::CONTENT_TYPE, RESULTS_JSON_MEDIA_TYPE)], json.to_string()).into_response(),
        Err(e) => plain(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

/// Outbound triples reachable from `root` within two hops.
pub fn describe(store: &TripleStore, root: &Iri) -> Graph {
    let mut graph = Graph::new();
    let mut visited = BTreeSet::from([root.clone()]);
    let mut frontier = vec![root.clone()];
    for _ in 0..DESCRIPTION_DEPTH {
        let mut next = Vec::new();
        for subject in frontier {
            for triple in store.match_pattern(&TriplePattern::with_subject(subject)) {
                if let Term::Iri(object) = &triple.object {
                    if visited.insert(object.clone()) {
                        next.push(object.clone());
                    }
                }
                graph.insert(triple);
            }
        }
        frontier = next;
    }
    graph
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Turtle,
    NTriples,
    Html,
}

impl Format {
    fn media_type(self) -> &'static str {
        match self {
            Format::Turtle => "text/turtle; charset=utf-8",
            Format::NTriples => "application/n-triples",
            Format::Html => "text/html; charset=utf-8",
        }
    }
}

/// Picks the representation with the highest `q` in the Accept header,
/// falling back to HTML.
fn negotiate(accept: Option<&str>) -> Format {
    let Some(accept) = accept else {
        return Format::Html;
    };
    let mut best = (0.0f32, Format::Html);
    for item in accept.split(',') {
        let mut parts = item.split(';').map(str::trim);
        let format = match parts.next().unwrap_or("").to_ascii_lowercase().as_str() {
            "text/turtle" | "application/x-turtle" => Format::Turtle,
            "application/n-triples" => Format::NTriples,
            "text/html" | "application/xhtml+xml" => Format::Html,
            _ => continue,
        };
        let q = parts
            .find_map(|p| p.strip_prefix("q="))
            .and_then(|q| q.parse().ok())
            .unwrap_or(1.0);
        if q > best.0 {
            best = (q, format);
        }
    }
    best.1
}

async fn resource(
    State(state): State<AppState>,
    Path((kind, name)): Path<(String, String)>,
    headers: HeaderMap,
) -> Result<Response, HandlerError> {
    let not_found = || plain(StatusCode::NOT_FOUND, format!("no resource {kind}/{name}"));
    let Some(kind) = ResourceKind::from_segment(&kind) else {
        return Err(not_found());
    };
    let iri = resource_iri(state.base(), kind, &name);
    let graph = describe(&state.store().read(), &iri);
    if graph.is_empty() {
        return Err(not_found());
    }
    let format = negotiate(headers.get(header::ACCEPT).and_then(|v| v.to_str().ok()));
    let body = match format {
        Format::Turtle => serialize_turtle(&graph, &default_prefixes()),
        Format::NTriples => serialize_ntriples(&graph),
        Format::Html => render_html(&iri, &graph),
    };
    Ok((
        [
            (header::CONTENT_TYPE, format.media_type()),
            (header::VARY, "Accept"),
        ],
        body,
    )
        .into_response())
}

fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn html_term(term: &Term, prefixes: &influence_core::PrefixMap) -> String {
    match term {
        Term::Iri(iri) => {
            let label = prefixes.compact(iri.as_str()).unwrap_or_else(|| iri.as_str().to_string());
            format!("<a href=\"{}\">{}</a>", escape_html(iri.as_str()), escape_html(&label))
        }
        Term::Literal(lit) => escape_html(lit.lexical()),
    }
}

fn render_html(iri: &Iri, graph: &Graph) -> String {
    let prefixes = default_prefixes();
    let title = escape_html(iri.as_str());
    let mut html = format!(
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>{title}</title></head>\n<body>\n\
         <h1>{title}</h1>\n<table>\n<tr><th>subject</th><th>predicate</th><th>object</th></tr>\n"
    );
    for t in graph {
        html.push_str(&format!(
            "<tr><td>{}</td><td>{}</td><td>{}</td></tr>\n",
            html_term(&Term::Iri(t.subject.clone()), &prefixes),
            html_term(&Term::Iri(t.predicate.clone()), &prefixes),
            html_term(&t.object, &prefixes),
        ));
    }
    html.push_str("</table>\n</body>\n</html>\n");
    html
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    name: Option<String>,
}

async fn search(
    State(state): State<AppState>,
    Query(params): Query<SearchParams>,
) -> Result<Json<ingest::MetricsRecord>, HandlerError> {
    let name = params
        .name
        .map(|n| n.trim().trim_start_matches('@').to_string())
        .filter(|n| !n.is_empty())
        .ok_or_else(|| plain(StatusCode::BAD_REQUEST, "missing `name` parameter"))?;
    if state.source().is_none() {
        return Err(plain(StatusCode::SERVICE_UNAVAILABLE, "no timeline source configured"));
    }
    let outcome = tokio::task::spawn_blocking(move || {
        let source = state.source().expect("checked above");
        let mut log = state.log();
        // taken under the log lock so that rows stay ordered
        let now = Utc::now();
        ingest::search_account(&name, source, &mut log, now)
    })
    .await
    .map_err(|e| plain(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    match outcome {
        Ok(record) => Ok(Json(record)),
        Err(e @ IngestError::Fetch(FetchError::NotFound(_))) => Err(plain(StatusCode::NOT_FOUND, e.to_string())),
        Err(e @ IngestError::Log(_)) => Err(plain(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())),
        Err(e) => Err(plain(StatusCode::BAD_GATEWAY, e.to_string())),
    }
}
