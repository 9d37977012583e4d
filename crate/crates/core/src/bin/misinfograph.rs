use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use misinfograph::classifier::{
    evaluate, load_checkpoint, save_checkpoint, train, ClassifierSpec, ModelParams, TextScorer,
    TransformerClassifier, DEFAULT_THRESHOLD,
};
use misinfograph::community::{detect, project, LabeledPartition, Method, ProjectionKind};
use misinfograph::corpus::{build_from_manifest, split, Corpus};
use misinfograph::pipeline::{run_pipeline, RunConfig, DEFAULT_BUCKET_SECONDS, DEFAULT_VIRAL_THRESHOLD};
use misinfograph::propgraph::{parse_keywords, read_tweets, GraphBundle, KeywordMode};
use misinfograph::tokenizer::{encode_text, tokenize, train_vocab, Vocab};
use misinfograph::{Error, Result};

#[derive(Parser)]
#[command(name = "misinfograph", version, about = "Misinformation classification and propagation-graph analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and split labeled corpora.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// WordPiece vocabulary and encoding.
    #[command(subcommand)]
    Tok(TokCmd),
    /// Train, evaluate and apply the classifier.
    #[command(subcommand)]
    Clf(ClfCmd),
    /// Build news graphs and hashtag networks from tweets.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Cluster a projected graph.
    #[command(subcommand)]
    Community(CommunityCmd),
    /// Score, cluster and export tweets for the explorer in one go.
    Run(RunArgs),
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Load every source in a manifest, normalize labels, deduplicate.
    Build {
        #[arg(long)]
        sources: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Shuffle and split into train and validation files.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.8)]
        fraction: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Defaults to `<input stem>.train.ndjson` next to the input.
        #[arg(long)]
        train_out: Option<PathBuf>,
        /// Defaults to `<input stem>.val.ndjson` next to the input.
        #[arg(long)]
        val_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TokCmd {
    /// Induce a WordPiece vocabulary from a corpus.
    BuildVocab {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 8000)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the pieces and ids for a text.
    Encode {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        text: String,
        #[arg(long, default_value_t = 256)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum ClfCmd {
    /// Train the transformer classifier.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        /// TOML with optional [model] and [train] tables.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a checkpoint on a labeled corpus.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Classify one text.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        text: String,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Build the news graph and hashtag network for a keyword set.
    Build {
        #[arg(long)]
        tweets: PathBuf,
        /// Comma-separated.
        #[arg(long)]
        keywords: String,
        /// Match any keyword instead of all.
        #[arg(long)]
        any: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CommunityCmd {
    /// Detect communities in a graph written by `graph build`.
    Detect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "louvain")]
        method: Method,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "users")]
        projection: ProjectionKind,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Parser)]
struct RunArgs {
    #[arg(long)]
    tweets: PathBuf,
    /// Comma-separated.
    #[arg(long)]
    keywords: String,
    #[arg(long)]
    any: bool,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long, default_value = "louvain")]
    method: Method,
    #[arg(long, default_value = "users")]
    projection: ProjectionKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_BUCKET_SECONDS)]
    bucket_seconds: i64,
    #[arg(long, default_value_t = DEFAULT_VIRAL_THRESHOLD)]
    viral_threshold: u64,
    /// Add per-hashtag virality series.
    #[arg(long)]
    per_hashtag: bool,
    #[arg(long)]
    out: PathBuf,
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("corpus");
    input.with_file_name(format!("{stem}.{suffix}.ndjson"))
}

fn keyword_list(raw: &str) -> Result<Vec<String>> {
    let keywords = parse_keywords(raw);
    if keywords.is_empty() {
        return Err(Error::InvalidArgument("no keywords given".into()));
    }
    Ok(keywords)
}

fn mode(any: bool) -> KeywordMode {
    if any {
        KeywordMode::Any
    } else {
        KeywordMode::All
    }
}

fn load_classifier(model: &Path, vocab: &Path) -> Result<TransformerClassifier> {
    let vocab = Vocab::load(vocab)?;
    let (_, params) = load_checkpoint(model, &vocab)?;
    TransformerClassifier::new(params, vocab)
}

fn corpus_cmd(cmd: CorpusCmd) -> Result<()> {
    match cmd {
        CorpusCmd::Build { sources, out } => {
            let (corpus, stats) = build_from_manifest(&sources)?;
            corpus.write_ndjson(&out)?;
            for (source, s) in &stats {
                eprintln!(
                    "{source}: {} rows, {} kept, {} dropped, {} duplicates",
                    s.input, s.kept, s.dropped, s.duplicates
                );
            }
            let c = corpus.counts();
            eprintln!("{} documents ({} fake, {} real) -> {}", corpus.len(), c.fake, c.real, out.display());
        }
        CorpusCmd::Split {
            input,
            fraction,
            seed,
            train_out,
            val_out,
        } => {
            let corpus = Corpus::read_ndjson(&input)?;
            let (tr, va) = split(&corpus, fraction, seed)?;
            let train_out = train_out.unwrap_or_else(|| sibling(&input, "train"));
            let val_out = val_out.unwrap_or_else(|| sibling(&input, "val"));
            tr.write_ndjson(&train_out)?;
            va.write_ndjson(&val_out)?;
            eprintln!(
                "train {} -> {}, validation {} -> {}",
                tr.len(),
                train_out.display(),
                va.len(),
                val_out.display()
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Encoded {
    pieces: Vec<String>,
    ids: Vec<u32>,
    attention_mask: Vec<u8>,
    true_length: usize,
}

fn tok_cmd(cmd: TokCmd) -> Result<()> {
    match cmd {
        TokCmd::BuildVocab { input, size, out } => {
            let corpus = Corpus::read_ndjson(&input)?;
            let vocab = train_vocab(&corpus.texts(), size)?;
            vocab.save(&out)?;
            eprintln!("{} tokens -> {}", vocab.len(), out.display());
        }
        TokCmd::Encode { vocab, text, max_len } => {
            let vocab = Vocab::load(&vocab)?;
            let seq = encode_text(&vocab, &text, max_len)?;
            print_json(&Encoded {
                pieces: tokenize(&vocab, &text),
                ids: seq.ids[..seq.true_length].to_vec(),
                attention_mask: seq.attention_mask[..seq.true_length].to_vec(),
                true_length: seq.true_length,
            })?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PredictionOut<'a> {
    text: &'a str,
    probability: f64,
    label: u8,
    label_name: &'static str,
}

fn clf_cmd(cmd: ClfCmd) -> Result<()> {
    match cmd {
        ClfCmd::Train {
            corpus,
            vocab,
            config,
            out,
        } => {
            let corpus = Corpus::read_ndjson(&corpus)?;
            let vocab = Vocab::load(&vocab)?;
            let mut spec = match config {
                Some(p) => ClassifierSpec::load(p)?,
                None => ClassifierSpec::default(),
            };
            spec.model.vocab_size = vocab.len();
            spec.model.validate()?;
            let params = ModelParams::init(&spec.model, spec.train.seed)?;
            eprintln!(
                "training {} parameters on {} documents for {} epochs",
                params.num_params(),
                corpus.len(),
                spec.train.epochs
            );
            let outcome = train(params, corpus.documents(), &vocab, &spec.train)?;
            for (epoch, loss) in outcome.history.iter().enumerate() {
                eprintln!("epoch {:>2}: mean loss {loss:.6}", epoch + 1);
            }
            save_checkpoint(&out, &outcome.params, &vocab, spec.train.seed)?;
            eprintln!("checkpoint -> {}", out.display());
        }
        ClfCmd::Eval {
            model,
            vocab,
            corpus,
            threshold,
            report,
        } => {
            let clf = load_classifier(&model, &vocab)?;
            let corpus = Corpus::read_ndjson(&corpus)?;
            let r = evaluate(&clf.params, &clf.vocab, corpus.documents(), threshold)?;
            println!(
                "precision {:.4}  recall {:.4}  f1 {:.4}  mcc {:.4}  accuracy {:.4}  (tp {} fp {} tn {} fn {})",
                r.precision, r.recall, r.f1, r.mcc, r.accuracy, r.confusion.tp, r.confusion.fp, r.confusion.tn,
                r.confusion.fn_
            );
            if let Some(path) = report {
                write_json(&path, &r)?;
            }
        }
        ClfCmd::Predict {
            model,
            vocab,
            text,
            threshold,
        } => {
            let clf = load_classifier(&model, &vocab)?;
            let p = clf.predict(&text, threshold)?;
            print_json(&PredictionOut {
                text: &text,
                probability: p.probability,
                label: p.label,
                label_name: if p.label == 1 { "fake" } else { "real" },
            })?;
        }
    }
    Ok(())
}

fn graph_cmd(cmd: GraphCmd) -> Result<()> {
    let GraphCmd::Build {
        tweets,
        keywords,
        any,
        out,
    } = cmd;
    let tweets = read_tweets(&tweets)?;
    let bundle = GraphBundle::build(&tweets, keyword_list(&keywords)?, mode(any))?;
    bundle.write(&out)?;
    let g = &bundle.news_graph;
    eprintln!(
        "{} nodes, {} edges ({} unobserved originals, {} skewed retweets rejected); {} hashtags -> {}",
        g.node_count(),
        g.edge_count(),
        g.unobserved_count(),
        g.skew_rejected.len(),
        bundle.hashtag_network.node_count(),
        out.display()
    );
    Ok(())
}

fn community_cmd(cmd: CommunityCmd) -> Result<()> {
    let CommunityCmd::Detect {
        graph,
        method,
        seed,
        projection,
        out,
    } = cmd;
    let bundle = GraphBundle::read(&graph)?;
    let projected = project(projection, &bundle.news_graph, &bundle.hashtag_network)?;
    let partition = detect(&projected.graph, method, seed)?;
    let labeled = LabeledPartition::new(&projected, &partition, seed)?;
    write_json(&out, &labeled)?;
    eprintln!(
        "{method} on {projection}: {} communities over {} nodes, {} = {:.6} -> {}",
        partition.count,
        projected.ids.len(),
        method.quality_name(),
        partition.quality,
        out.display()
    );
    Ok(())
}

fn run_cmd(args: RunArgs) -> Result<()> {
    let clf = load_classifier(&args.model, &args.vocab)?;
    let tweets = read_tweets(&args.tweets)?;
    let cfg = RunConfig {
        keywords: keyword_list(&args.keywords)?,
        keyword_mode: mode(args.any),
        method: args.method,
        projection: args.projection,
        seed: args.seed,
        threshold: args.threshold,
        bucket_seconds: args.bucket_seconds,
        viral_threshold: args.viral_threshold,
        per_hashtag: args.per_hashtag,
    };
    let doc = run_pipeline(&tweets, &clf, &cfg)?;
    doc.write(&args.out)?;
    let s = &doc.summary;
    eprintln!(
        "{} nodes, {} links, {} users; {} fake and {} real originals; viral_at {:?} -> {}",
        s.nodes,
        s.links,
        s.distinct_users,
        s.fake_originals,
        s.real_originals,
        doc.trend.viral_at,
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Corpus(c) => corpus_cmd(c),
        Command::Tok(c) => tok_cmd(c),
        Command::Clf(c) => clf_cmd(c),
        Command::Graph(c) => graph_cmd(c),
        Command::Community(c) => community_cmd(c),
        Command::Run(a) => run_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
