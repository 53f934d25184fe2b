use std::fs;
use std::io::{self, Read, Write};
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand, ValueEnum};
use influence_core::ingest::{self, FixtureDir, MetricsLog};
use influence_core::metrics::compute_profile;
use influence_core::ontology::{default_prefixes, ontology_schema_graph};
use influence_core::rankeval::{compare_rankings, join_rankings, read_ranking};
use influence_core::rdfmodel::{serialize_ntriples, serialize_turtle};
use influence_core::{sparql, GeneralInfo, Iri, QualityMetrics, SharedStore, TimelineWindow, TripleStore};
use influence_service::{AppState, ServiceConfig};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "influence", version, about = "Twitter influence metrics published as linked data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one update cycle over fixture timelines and write the graph.
    Ingest {
        #[arg(long)]
        fixtures: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        log: PathBuf,
        /// Accounts to refresh (default: every fixture).
        #[arg(long, value_delimiter = ',')]
        accounts: Vec<String>,
        /// Reference time, RFC 3339 (default: now).
        #[arg(long)]
        now: Option<DateTime<Utc>>,
        #[arg(long, default_value = influence_core::ontology::DEFAULT_BASE)]
        base: String,
    },
    /// Print the general and quality metrics of one timeline as JSON.
    Metrics {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        now: Option<DateTime<Utc>>,
    },
    /// Evaluate a SPARQL query against an N-Triples graph.
    Query {
        #[arg(long)]
        graph: PathBuf,
        /// Query file, or `-` for stdin.
        #[arg(long)]
        query: PathBuf,
    },
    /// Print the ontology schema.
    ExportOntology {
        #[arg(long, value_enum, default_value_t = RdfFormat::Turtle)]
        format: RdfFormat,
    },
    /// Serve the SPARQL endpoint, resource documents and account search.
    Serve {
        /// TOML configuration; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long)]
        port: Option<u16>,
        /// Hours between update cycles; 0 disables the background loop.
        #[arg(long)]
        interval_hours: Option<u64>,
    },
    /// Compare two `accountId,rank` CSV rankings.
    RankCompare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Serialize)]
struct MetricsOutput<'a> {
    screen_name: &'a str,
    general: GeneralInfo,
    quality: QualityMetrics,
    window: TimelineWindow,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RdfFormat {
    Turtle,
    Ntriples,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let verbose = matches!(cli.command, Command::Serve { .. });
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| if verbose { "info".into() } else { "warn".into() }),
        )
        .init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest {
            fixtures,
            graph,
            log,
            accounts,
            now,
            base,
        } => {
            let base = Iri::new(base)?;
            let source = FixtureDir::new(&fixtures);
            let accounts = if accounts.is_empty() {
                source
                    .account_names()
                    .with_context(|| format!("listing {}", fixtures.display()))?
            } else {
                accounts
            };
            let store = SharedStore::new(TripleStore::open_ntriples(&graph)?);
            let mut log = MetricsLog::open(&log)?;
            let report = ingest::run_update_cycle(
                &accounts,
                &source,
                &store,
                &mut log,
                now.unwrap_or_else(Utc::now),
                &base,
            );
            store.read().save_ntriples(&graph)?;
            print_json(&report)
        }
        Command::Metrics { fixture, now } => {
            let bytes = fs::read(&fixture).with_context(|| format!("reading {}", fixture.display()))?;
            let now = now.unwrap_or_else(Utc::now);
            let snapshot = ingest::parse_timeline(&bytes, now)?;
            let profile = compute_profile(&snapshot, now)?;
            print_json(&MetricsOutput {
                screen_name: &snapshot.screen_name,
                general: profile.general,
                quality: profile.quality,
                window: profile.window,
            })
        }
        Command::Query { graph, query } => {
            let text = read_text(&query)?;
            let query = sparql::parse_query(&text)?;
            if !graph.exists() {
                bail!("graph file {} does not exist", graph.display());
            }
            let store = TripleStore::open_ntriples(&graph)?;
            print_json(&sparql::to_sparql_json(&sparql::evaluate(&query, &store)))
        }
        Command::ExportOntology { format } => {
            let schema = ontology_schema_graph();
            let text = match format {
                RdfFormat::Turtle => serialize_turtle(&schema, &default_prefixes()),
                RdfFormat::Ntriples => serialize_ntriples(&schema),
            };
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
        Command::Serve {
            config,
            graph,
            fixtures,
            log,
            port,
            interval_hours,
        } => {
            let mut config = ServiceConfig::load(config.as_deref())?;
            config.graph = graph.or(config.graph);
            config.fixtures = fixtures.or(config.fixtures);
            config.log = log.or(config.log);
            config.port = port.unwrap_or(config.port);
            config.interval_hours = interval_hours.unwrap_or(config.interval_hours);
            serve(config)
        }
        Command::RankCompare { a, b } => {
            let open = |p: &Path| fs::File::open(p).with_context(|| format!("opening {}", p.display()));
            let a = read_ranking(open(&a)?)?;
            let b = read_ranking(open(&b)?)?;
            let (pairs, dropped) = join_rankings(&a, &b);
            if dropped > 0 {
                eprintln!("warning: {dropped} account(s) ranked by only one system were dropped");
            }
            print_json(&compare_rankings(&pairs)?)
        }
    }
}

fn serve(config: ServiceConfig) -> Result<()> {
    let state = AppState::from_config(&config)?;
    let addr = SocketAddr::from((Ipv4Addr::UNSPECIFIED, config.port));
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        if let (Some(dir), true) = (config.fixtures.clone(), config.interval_hours > 0) {
            let every = Duration::from_secs(config.interval_hours * 3600);
            influence_service::spawn_update_loop(state.clone(), dir, every);
        }
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        influence_service::serve(state, addr, shutdown).await
    })?;
    Ok(())
}
