//! HTTP surface over the influence graph: a SPARQL endpoint, dereferenceable
//! resource documents and on-demand account search.

use std::io;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use chrono::Utc;
use influence_core::ingest::{self, FixtureDir, MetricsLog, TimelineSource, UpdateReport};
use influence_core::store::StoreError;
use influence_core::{Iri, SharedStore, TripleStore};
use thiserror::Error;
use tokio::net::TcpListener;

mod config;
mod routes;

pub use config::{ServiceConfig, DEFAULT_INTERVAL_HOURS, DEFAULT_PORT};
pub use routes::{describe, router};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Log(#[from] ingest::LogError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
}

/// Shared server state. Cloning is cheap.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    store: SharedStore,
    base: Iri,
    source: Option<Arc<dyn TimelineSource + Send>>,
    log: Mutex<MetricsLog>,
    graph_path: Option<PathBuf>,
    /// Serializes update cycles with each other.
    cycle: Mutex<()>,
}

impl AppState {
    pub fn new(store: SharedStore, base: Iri) -> Self {
        Self::with_parts(store, base, None, MetricsLog::in_memory(), None)
    }

    pub fn with_parts(
        store: SharedStore,
        base: Iri,
        source: Option<Arc<dyn TimelineSource + Send>>,
        log: MetricsLog,
        graph_path: Option<PathBuf>,
    ) -> Self {
        AppState {
            inner: Arc::new(Inner {
                store,
                base,
                source,
                log: Mutex::new(log),
                graph_path,
                cycle: Mutex::new(()),
            }),
        }
    }

    /// Builds the state described by `config`, loading the graph file and
    /// the metrics log when they exist.
    pub fn from_config(config: &ServiceConfig) -> Result<Self, ServiceError> {
        let base = Iri::new(config.base.clone()).map_err(|e| ServiceError::Config(e.to_string()))?;
        let store = match &config.graph {
            Some(path) => TripleStore::open_ntriples(path)?,
            None => TripleStore::new(),
        };
        let log = match &config.log {
            Some(path) => MetricsLog::open(path)?,
            None => MetricsLog::in_memory(),
        };
        let source = config
            .fixtures
            .as_ref()
            .map(|dir| Arc::new(FixtureDir::new(dir)) as Arc<dyn TimelineSource + Send>);
        Ok(Self::with_parts(
            SharedStore::new(store),
            base,
            source,
            log,
            config.graph.clone(),
        ))
    }

    pub fn store(&self) -> &SharedStore {
        &self.inner.store
    }

    pub fn base(&self) -> &Iri {
        &self.inner.base
    }

    pub fn source(&self) -> Option<&(dyn TimelineSource + Send)> {
        self.inner.source.as_deref()
    }

    pub fn log(&self) -> std::sync::MutexGuard<'_, MetricsLog> {
        self.inner.log.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Runs one update cycle over `accounts` and saves the graph file.
    /// Blocking; call from a blocking context.
    pub fn run_cycle(&self, accounts: &[String]) -> Result<UpdateReport, ServiceError> {
        let Some(source) = self.source() else {
            return Err(ServiceError::Config("no timeline source configured".into()));
        };
        let _cycle = self.inner.cycle.lock().unwrap_or_else(|e| e.into_inner());
        let report = {
            let mut log = self.log();
            ingest::run_update_cycle(accounts, source, self.store(), &mut log, Utc::now(), self.base())
        };
        if let Some(path) = &self.inner.graph_path {
            self.store().read().save_ntriples(path)?;
        }
        Ok(report)
    }
}

/// Periodically refreshes every fixture account. The first cycle runs
/// immediately.
pub fn spawn_update_loop(state: AppState, fixtures: PathBuf, every: Duration) -> tokio::task::JoinHandle<()> {
    tokio::spawn(async move {
        let mut ticker = tokio::time::interval(every);
        loop {
            ticker.tick().await;
            let state = state.clone();
            let dir = FixtureDir::new(&fixtures);
            let outcome = tokio::task::spawn_blocking(move || {
                let names = dir.account_names().map_err(|source| ServiceError::Io {
                    path: dir.root().to_path_buf(),
                    source,
                })?;
                state.run_cycle(&names)
            })
            .await;
            match outcome {
                Ok(Ok(report)) => tracing::info!(
                    processed = report.accounts_processed,
                    failed = report.accounts_failed,
                    added = report.triples_added,
                    removed = report.triples_removed,
                    "update cycle finished"
                ),
                Ok(Err(e)) => tracing::warn!("update cycle failed: {e}"),
                Err(e) => tracing::error!("update cycle panicked: {e}"),
            }
        }
    })
}

/// Serves `state` on `addr` until `shutdown` resolves.
pub async fn serve(
    state: AppState,
    addr: SocketAddr,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> Result<(), ServiceError> {
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })?;
    let local = listener.local_addr().unwrap_or(addr);
    tracing::info!("listening on http://{local}");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })
}
