use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use fontpair_core::config::{config_path, CONFIG_ENV};
use fontpair_core::glyph::{write_strokes, StrokeConfig};
use fontpair_core::ingest::{compute_strokes, ingest};
use fontpair_core::{load_catalog, Engine64, EngineConfig, RecommendResponse};

#[derive(Parser)]
#[command(name = "fontpair", version, about = "Heading and subheading font pairs from a text prompt")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure stroke widths for a catalog and write strokes.jsonl into a directory.
    Ingest {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Check font and category coverage of an embedding file.
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Measure stroke widths and write them to a single file.
    StrokeWidth {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print recommended pairs for a prompt as JSON.
    Recommend {
        #[arg(long)]
        prompt: String,
        #[arg(long, default_value_t = 3)]
        pairs: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the full subheading scoring table for one heading font.
    Pair {
        #[arg(long)]
        heading: String,
        #[arg(long, default_value_t = 1)]
        top: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_engine(flag: Option<&Path>) -> anyhow::Result<Engine64> {
    let env = std::env::var(CONFIG_ENV).ok();
    let path = config_path(flag, env.as_deref());
    let cfg = EngineConfig::load(&path).with_context(|| format!("loading config {}", path.display()))?;
    Ok(Engine64::from_config(&cfg)?)
}

fn run_ingest(catalog: &Path, out: &Path, embeddings: Option<&Path>) -> anyhow::Result<()> {
    let report = ingest::<f64>(catalog, out, embeddings, &StrokeConfig::default())?;
    for (id, err) in &report.failures {
        eprintln!("failed {id}: {err}");
    }
    if embeddings.is_some() {
        for id in &report.missing_visual {
            eprintln!("no visual embedding: {id}");
        }
        for id in &report.missing_category {
            eprintln!("no category embedding: {id}");
        }
    }
    println!(
        "measured {} fonts, {} failed, wrote {}",
        report.profiles.len(),
        report.failures.len(),
        report.strokes_path.as_deref().unwrap_or(out).display()
    );
    Ok(())
}

fn run_stroke_width(catalog: &Path, out: &Path) -> anyhow::Result<()> {
    let catalog = load_catalog(catalog)?;
    anyhow::ensure!(!catalog.fonts.is_empty(), "catalog has no fonts");
    let (profiles, failures) = compute_strokes::<f64>(&catalog, &StrokeConfig::default());
    for (id, err) in &failures {
        eprintln!("failed {id}: {err}");
    }
    anyhow::ensure!(!profiles.is_empty(), "no font could be measured");
    std::fs::write(out, write_strokes(&profiles)).with_context(|| format!("writing {}", out.display()))?;
    println!("measured {} fonts, {} failed", profiles.len(), failures.len());
    Ok(())
}

fn run_pair(heading: &str, top: usize, config: Option<&Path>) -> anyhow::Result<()> {
    let engine = load_engine(config)?;
    let out = engine.pair_table(heading, top.max(1))?;
    println!("heading {}  band {:.0}-{:.0}", out.heading_id, out.band.0, out.band.1);
    println!(
        "{:<20} {:>9} {:>9} {:>7} {:>7} {:>7} {:>7} {:>8}",
        "candidate", "p_raw", "n_raw", "p_norm", "n_norm", "p_gate", "n_gate", "score"
    );
    for c in &out.table {
        println!(
            "{:<20} {:>9.4} {:>9.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>8.5}",
            c.candidate_id, c.p_raw, c.n_raw, c.p_norm, c.n_norm, c.p_gated, c.n_gated, c.balanced_score
        );
    }
    for (id, score) in &out.picks {
        println!("pick {id} {score:.6}");
    }
    Ok(())
}

fn run_serve(bind: &str, config: Option<&Path>) -> anyhow::Result<()> {
    // built before the runtime: a remote embedder owns a blocking HTTP client
    let engine = Arc::new(load_engine(config)?);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .with_context(|| format!("binding {bind}"))?;
        tracing::info!(addr = %listener.local_addr()?, fonts = engine.font_count(), "listening");
        axum::serve(listener, fontpair::router(engine.clone()))
            .with_graceful_shutdown(shutdown_signal())
            .await?;
        tracing::info!("shut down");
        anyhow::Ok(())
    })?;
    drop(runtime);
    drop(engine);
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest { catalog, out, embeddings } => run_ingest(&catalog, &out, embeddings.as_deref()),
        Command::StrokeWidth { catalog, out } => run_stroke_width(&catalog, &out),
        Command::Recommend { prompt, pairs, seed, config } => {
            let engine = match load_engine(config.as_deref()) {
                Ok(e) => e,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::FAILURE;
                }
            };
            match engine.recommend(&prompt, pairs, seed) {
                Ok(p) => {
                    println!("{}", RecommendResponse::from_pairs(&p).to_json());
                    Ok(())
                }
                Err(e) => {
                    let body = serde_json::json!({ "error": e.code(), "detail": e.to_string() });
                    eprintln!("{body}");
                    return ExitCode::from(2);
                }
            }
        }
        Command::Pair { heading, top, config } => run_pair(&heading, top, config.as_deref()),
        Command::Serve { bind, config } => run_serve(&bind, config.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
