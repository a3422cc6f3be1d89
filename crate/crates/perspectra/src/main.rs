use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use perspectra::config::{load_config, CONFIG_ENV};
use perspectra::eval::{self, EvalReport, ZTestOptions};
use perspectra::{data, ingest, snapshot, App};
use perspectra_core::index::Index;

#[derive(Parser)]
#[command(name = "perspectra", version, about = "Search a news corpus and group answers by stance")]
struct Cli {
    /// Pipeline configuration (TOML).
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Index snapshot to read (search, serve) or write (ingest).
    #[arg(long, global = true, value_name = "PATH")]
    index: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index snapshot from a JSONL corpus.
    Ingest {
        corpus: PathBuf,
        /// Trusted domains, one per line. Defaults to the bundled list.
        #[arg(long, value_name = "PATH")]
        trust: Option<PathBuf>,
        /// Output path; falls back to --index, then `perspectra-index.json`.
        #[arg(long, short, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run one query. Uses the bundled demo corpus when --index is absent.
    Search {
        query: String,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        k: Option<usize>,
    },
    /// Serve the HTTP API until Ctrl-C.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080", value_name = "HOST:PORT")]
        addr: SocketAddr,
    },
    /// Compute statistics from CSV files and print a JSON report.
    Eval {
        /// Survey responses (`question,response`).
        #[arg(long, value_name = "CSV")]
        ztest: Option<PathBuf>,
        /// Numeric predictions (`pred,gold`).
        #[arg(long, value_name = "CSV")]
        mse: Option<PathBuf>,
        /// Stance predictions (`pred,gold`).
        #[arg(long, value_name = "CSV")]
        stance: Option<PathBuf>,
        /// Summaries (`candidate,reference`).
        #[arg(long, value_name = "CSV")]
        rouge: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
        #[arg(long, default_value_t = 1000)]
        repeats: usize,
        /// Replicate size; defaults to each question's response count.
        #[arg(long)]
        sample_size: Option<usize>,
    },
}

fn load_state(index: Option<&Path>) -> Result<(perspectra_core::Corpus, Index)> {
    match index {
        Some(path) => Ok(snapshot::load(path)?),
        None => Ok(data::demo()),
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    match cli.command {
        Command::Ingest { corpus, trust, out } => {
            let body = std::fs::read_to_string(&corpus).with_context(|| format!("cannot read `{}`", corpus.display()))?;
            let trust_list = match trust {
                Some(path) => ingest::load_trust_list(&path)?,
                None => data::trust_list(),
            };
            let parsed = ingest::parse_corpus(&body, trust_list).with_context(|| format!("in `{}`", corpus.display()))?;
            let index = Index::build(&parsed);
            let out = out.or(cli.index).unwrap_or_else(|| PathBuf::from("perspectra-index.json"));
            snapshot::save(&out, &parsed, &index)?;
            eprintln!("indexed {} document(s) into `{}`", parsed.len(), out.display());
        }
        Command::Search { query, json, k } => {
            let (corpus, index) = load_state(cli.index.as_deref())?;
            let app = App::new(corpus, index, config);
            let response = app.search(&query, k)?;
            let text = if json {
                perspectra::render_json(&response)
            } else {
                perspectra::render_text(&response)
            };
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
        Command::Serve { addr } => {
            let (corpus, index) = load_state(cli.index.as_deref())?;
            let app = Arc::new(App::new(corpus, index, config));
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .with_context(|| format!("cannot bind {addr}"))?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                perspectra::server::serve_on(app, listener, async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await?;
                anyhow::Ok(())
            })?;
        }
        Command::Eval {
            ztest,
            mse,
            stance,
            rouge,
            p0,
            repeats,
            sample_size,
        } => {
            if ztest.is_none() && mse.is_none() && stance.is_none() && rouge.is_none() {
                anyhow::bail!("eval needs at least one of --ztest, --mse, --stance, --rouge");
            }
            let mut report = EvalReport::default();
            if let Some(path) = ztest {
                let samples = eval::read_survey(&path)?;
                let opts = ZTestOptions {
                    p0,
                    sample_size,
                    repeats,
                    seed: config.seed,
                };
                report.ztest = Some(eval::ztest_report(&samples, opts)?);
            }
            if let Some(path) = mse {
                report.mse = Some(eval::mse_from_csv(&path)?);
            }
            if let Some(path) = stance {
                report.stance = Some(eval::stance_scores_from_csv(&path)?);
            }
            if let Some(path) = rouge {
                report.rouge2 = Some(eval::rouge_from_csv(&path)?);
            }
            std::io::stdout().lock().write_all(perspectra::render_json(&report).as_bytes())?;
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
