//! Timeline ingestion: parsing Twitter-shaped JSON, the periodic update cycle
//! that refreshes the graph, on-demand account search and the metrics log.

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::de::IgnoredAny;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{compute_profile, AccountProfile, AccountSnapshot, MetricsError, TimelineWindow, Tweet, MAX_TIMELINE};
use crate::ontology::{triplify, AccountIris};
use crate::rdfmodel::{Graph, Iri};
use crate::store::SharedStore;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("no timeline available for account {0:?}")]
    NotFound(String),
    #[error("timeline source unavailable for {name:?}: {reason}")]
    Unavailable { name: String, reason: String },
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("metrics log {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("metrics log {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("metrics log must be ordered by retrieval time: {next} follows {last}")]
    OutOfOrder {
        last: DateTime<Utc>,
        next: DateTime<Utc>,
    },
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("malformed timeline document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Log(#[from] LogError),
}

// --- timeline documents --------------------------------------------------

/// A user timeline in the shape of the Twitter REST v1.1 response, with
/// `created_at` in ISO-8601 UTC.
#[derive(Debug, Clone, Deserialize)]
pub struct TimelineDocument {
    pub user: UserObject,
    pub statuses: Vec<Status>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct UserObject {
    pub screen_name: String,
    #[serde(default)]
    pub name: String,
    #[serde(default, deserialize_with = "nullable_string")]
    pub description: String,
    #[serde(default)]
    pub protected: bool,
    pub followers_count: u64,
    pub friends_count: u64,
    pub statuses_count: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Status {
    pub id_str: String,
    pub created_at: DateTime<Utc>,
    pub retweet_count: u64,
    pub favorite_count: u64,
    #[serde(default)]
    pub retweeted_status: Option<IgnoredAny>,
    #[serde(default)]
    pub in_reply_to_screen_name: Option<String>,
    #[serde(default)]
    pub entities: Entities,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Entities {
    #[serde(default)]
    pub hashtags: Vec<HashtagEntity>,
    #[serde(default)]
    pub urls: Vec<UrlEntity>,
    #[serde(default)]
    pub media: Vec<MediaEntity>,
    #[serde(default)]
    pub user_mentions: Vec<MentionEntity>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HashtagEntity {
    pub text: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct UrlEntity {
    #[serde(default)]
    pub expanded_url: Option<String>,
    pub url: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MediaEntity {
    pub media_url_https: String,
    #[serde(rename = "type", default = "photo")]
    pub kind: String,
}

fn photo() -> String {
    "photo".into()
}

#[derive(Debug, Clone, Deserialize)]
pub struct MentionEntity {
    pub screen_name: String,
}

fn nullable_string<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    Ok(Option::<String>::deserialize(d)?.unwrap_or_default())
}

impl Status {
    fn into_tweet(self) -> Tweet {
        let mut tweet = Tweet::new(self.id_str, self.created_at);
        tweet.retweet_count = self.retweet_count;
        tweet.favorite_count = self.favorite_count;
        tweet.is_retweet = self.retweeted_status.is_some();
        tweet.in_reply_to = self.in_reply_to_screen_name.filter(|n| !n.is_empty());
        let e = self.entities;
        tweet.hashtags = e.hashtags.into_iter().map(|h| h.text).collect();
        tweet.urls = e
            .urls
            .into_iter()
            .map(|u| u.expanded_url.filter(|x| !x.is_empty()).unwrap_or(u.url))
            .collect();
        tweet.image_urls = e
            .media
            .into_iter()
            .filter(|m| m.kind == "photo")
            .map(|m| m.media_url_https)
            .collect();
        tweet.mentions = e.user_mentions.into_iter().map(|m| m.screen_name).collect();
        tweet
    }
}

impl TimelineDocument {
    /// Newest 100 statuses, newest first.
    pub fn into_snapshot(self, retrieved_at: DateTime<Utc>) -> AccountSnapshot {
        let mut timeline: Vec<Tweet> = self.statuses.into_iter().map(Status::into_tweet).collect();
        timeline.sort_by(|a, b| b.created_at.cmp(&a.created_at));
        timeline.truncate(MAX_TIMELINE);
        let user = self.user;
        AccountSnapshot {
            screen_name: user.screen_name,
            display_name: user.name,
            description: user.description,
            protected: user.protected,
            followers: user.followers_count,
            following: user.friends_count,
            total_tweets: user.statuses_count,
            retrieved_at,
            timeline,
        }
    }
}

pub fn parse_timeline(bytes: &[u8], retrieved_at: DateTime<Utc>) -> Result<AccountSnapshot, IngestError> {
    let doc: TimelineDocument = serde_json::from_slice(bytes)?;
    Ok(doc.into_snapshot(retrieved_at))
}

// --- sources -------------------------------------------------------------

/// Resolves account names to raw timeline documents.
pub trait TimelineSource: Sync {
    fn fetch(&self, screen_name: &str) -> Result<Vec<u8>, FetchError>;
}

/// Reads `<screen_name>.json` from a directory.
#[derive(Debug, Clone)]
pub struct FixtureDir {
    root: PathBuf,
}

impl FixtureDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FixtureDir { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Names of all fixtures, sorted.
    pub fn account_names(&self) -> io::Result<Vec<String>> {
        let mut names = Vec::new();
        for entry in fs::read_dir(&self.root)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    names.push(stem.to_string());
                }
            }
        }
        names.sort();
        Ok(names)
    }
}

fn plausible_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl TimelineSource for FixtureDir {
    fn fetch(&self, screen_name: &str) -> Result<Vec<u8>, FetchError> {
        if !plausible_name(screen_name) {
            return Err(FetchError::NotFound(screen_name.to_string()));
        }
        let path = self.root.join(format!("{screen_name}.json"));
        fs::read(&path).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => FetchError::NotFound(screen_name.to_string()),
            _ => FetchError::Unavailable {
                name: screen_name.to_string(),
                reason: format!("{}: {e}", path.display()),
            },
        })
    }
}

// --- metrics log ---------------------------------------------------------

/// One flat row of the metrics history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub screen_name: String,
    pub retrieved_at: DateTime<Utc>,
    pub tweets: u64,
    pub followers: u64,
    pub following: u64,
    pub tweets_per_day: f64,
    pub rt_percent: f64,
    pub h_index_rt: f64,
    pub h_index_fav: f64,
    pub h_index_rt_daily: f64,
    pub h_index_fav_daily: f64,
    pub reply_ratio: f64,
    pub influence_metric: f64,
    /// The timeline window the row was computed from; not persisted.
    #[serde(skip, default = "empty_window")]
    pub window: TimelineWindow,
}

fn empty_window() -> TimelineWindow {
    TimelineWindow::EMPTY
}

impl MetricsRecord {
    pub fn new(snapshot: &AccountSnapshot, profile: &AccountProfile) -> Self {
        let (g, q) = (&profile.general, &profile.quality);
        MetricsRecord {
            screen_name: snapshot.screen_name.clone(),
            retrieved_at: snapshot.retrieved_at,
            tweets: g.tweets,
            followers: g.followers,
            following: g.following,
            tweets_per_day: g.tweets_per_day,
            rt_percent: g.rt_percent,
            h_index_rt: q.h_index_rt,
            h_index_fav: q.h_index_fav,
            h_index_rt_daily: q.h_index_rt_daily,
            h_index_fav_daily: q.h_index_fav_daily,
            reply_ratio: q.reply_ratio,
            influence_metric: q.influence_metric,
            window: profile.window,
        }
    }
}

/// Append-only history of computed metrics, optionally backed by a CSV file.
#[derive(Debug, Default)]
pub struct MetricsLog {
    path: Option<PathBuf>,
    records: Vec<MetricsRecord>,
}

impl MetricsLog {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (or starts) the CSV log at `path`.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, LogError> {
        let path = path.into();
        let mut records = Vec::new();
        if path.exists() {
            let csv_err = |source| LogError::Csv {
                path: path.clone(),
                source,
            };
            let mut reader = csv::Reader::from_path(&path).map_err(csv_err)?;
            for row in reader.deserialize() {
                let record: MetricsRecord = row.map_err(csv_err)?;
                check_order(records.last(), &record)?;
                records.push(record);
            }
        }
        Ok(MetricsLog {
            path: Some(path),
            records,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> &[MetricsRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn append(&mut self, record: MetricsRecord) -> Result<(), LogError> {
        check_order(self.records.last(), &record)?;
        if let Some(path) = &self.path {
            let io_err = |source| LogError::Io {
                path: path.clone(),
                source,
            };
            let file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
            let fresh = file.metadata().map_err(io_err)?.len() == 0;
            let mut writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
            writer.serialize(&record).map_err(|source| LogError::Csv {
                path: path.clone(),
                source,
            })?;
            writer.flush().map_err(io_err)?;
        }
        self.records.push(record);
        Ok(())
    }
}

fn check_order(last: Option<&MetricsRecord>, next: &MetricsRecord) -> Result<(), LogError> {
    match last {
        Some(last) if last.retrieved_at > next.retrieved_at => Err(LogError::OutOfOrder {
            last: last.retrieved_at,
            next: next.retrieved_at,
        }),
        _ => Ok(()),
    }
}

// --- use cases -----------------------------------------------------------

/// A fetched and computed account, ready to be written.
#[derive(Debug, Clone)]
pub struct PreparedAccount {
    pub snapshot: AccountSnapshot,
    pub profile: AccountProfile,
    pub graph: Graph,
}

impl PreparedAccount {
    pub fn record(&self) -> MetricsRecord {
        MetricsRecord::new(&self.snapshot, &self.profile)
    }
}

/// Fetch, parse, compute and triplify one account.
pub fn prepare_account(
    name: &str,
    source: &dyn TimelineSource,
    now: DateTime<Utc>,
    base: &Iri,
) -> Result<PreparedAccount, IngestError> {
    let bytes = source.fetch(name)?;
    let snapshot = parse_timeline(&bytes, now)?;
    let profile = compute_profile(&snapshot, now)?;
    let graph = triplify(&snapshot, &profile.general, &profile.quality, base);
    Ok(PreparedAccount {
        snapshot,
        profile,
        graph,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccountFailure {
    pub screen_name: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpdateReport {
    pub accounts_processed: usize,
    pub accounts_failed: usize,
    pub triples_added: usize,
    pub triples_removed: usize,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
    pub failures: Vec<AccountFailure>,
}

/// Refreshes every listed account in the store and the log.
///
/// Accounts are fetched and computed in parallel; each account's graph write
/// (drop the previous account, general-info and quality resources, insert
/// the new subgraph) happens under one write lock. Failures are reported per
/// account and do not stop the cycle.
pub fn run_update_cycle(
    accounts: &[String],
    source: &dyn TimelineSource,
    store: &SharedStore,
    log: &mut MetricsLog,
    now: DateTime<Utc>,
    base: &Iri,
) -> UpdateReport {
    let clock = std::time::Instant::now();
    let prepared: Vec<(&String, Result<PreparedAccount, IngestError>)> = accounts
        .par_iter()
        .map(|name| (name, prepare_account(name, source, now, base)))
        .collect();

    let mut report = UpdateReport {
        accounts_processed: 0,
        accounts_failed: 0,
        triples_added: 0,
        triples_removed: 0,
        started_at: now,
        finished_at: now,
        failures: Vec::new(),
    };
    for (name, result) in prepared {
        let outcome = result.and_then(|account| {
            log.append(account.record())?;
            Ok(account)
        });
        match outcome {
            Ok(account) => {
                let ids = AccountIris::new(base, &account.snapshot.screen_name);
                let mut guard = store.write();
                for subject in ids.replaced_subjects() {
                    report.triples_removed += guard.remove_by_subject(subject);
                }
                report.triples_added += guard.load(&account.graph);
                report.accounts_processed += 1;
            }
            Err(e) => {
                report.accounts_failed += 1;
                report.failures.push(AccountFailure {
                    screen_name: name.clone(),
                    error: e.to_string(),
                });
            }
        }
    }
    report.finished_at = now + clock.elapsed();
    report
}

/// On-demand lookup: computes and logs an account without touching any
/// store.
pub fn search_account(
    name: &str,
    source: &dyn TimelineSource,
    log: &mut MetricsLog,
    now: DateTime<Utc>,
) -> Result<MetricsRecord, IngestError> {
    let bytes = source.fetch(name)?;
    let snapshot = parse_timeline(&bytes, now)?;
    let profile = compute_profile(&snapshot, now)?;
    let record = MetricsRecord::new(&snapshot, &profile);
    log.append(record.clone())?;
    Ok(record)
}

/// Users that an account's timeline mentions or replies to, excluding the
/// account itself.
pub fn linked_users(snapshot: &AccountSnapshot) -> BTreeSet<&str> {
    snapshot
        .timeline
        .iter()
        .flat_map(|t| t.mentions.iter().map(String::as_str).chain(t.in_reply_to.as_deref()))
        .filter(|n| *n != snapshot.screen_name)
        .collect()
}
