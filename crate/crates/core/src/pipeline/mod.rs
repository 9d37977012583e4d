//! End-to-end runs: score news graphs, cluster users, track virality and
//! export a document for the explorer.

mod annotate;
mod export;
mod trend;

pub use annotate::{annotate, summarize, AnnotatedGraph, GraphSummary};
pub use export::{
    CommunityMeta, ExplorerDocument, ExportLink, ExportMeta, ExportNode, LabelName, NodeSizes, SCHEMA_VERSION,
};
pub use trend::{
    virality_trend, virality_trend_with, HashtagTrend, TrendBucket, TrendSeries, DEFAULT_BUCKET_SECONDS,
    DEFAULT_VIRAL_THRESHOLD,
};

use crate::classifier::{TextScorer, DEFAULT_THRESHOLD};
use crate::community::{detect, project, LabeledPartition, Method, ProjectionKind};
use crate::error::{Error, Result};
use crate::propgraph::{GraphBundle, KeywordMode, Tweet};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub keywords: Vec<String>,
    pub keyword_mode: KeywordMode,
    pub method: Method,
    pub projection: ProjectionKind,
    pub seed: u64,
    pub threshold: f64,
    pub bucket_seconds: i64,
    pub viral_threshold: u64,
    pub per_hashtag: bool,
}

impl RunConfig {
    pub fn new(keywords: Vec<String>) -> Self {
        Self {
            keywords,
            keyword_mode: KeywordMode::All,
            method: Method::Louvain,
            projection: ProjectionKind::Users,
            seed: 42,
            threshold: DEFAULT_THRESHOLD,
            bucket_seconds: DEFAULT_BUCKET_SECONDS,
            viral_threshold: DEFAULT_VIRAL_THRESHOLD,
            per_hashtag: false,
        }
    }
}

/// Builds the news graph, scores it, clusters the chosen projection and
/// assembles the explorer document.
///
/// The hashtag network covers the observed tweets of the news graph. When
/// the projection has no edges the document carries no communities.
pub fn run_pipeline(tweets: &[Tweet], scorer: &dyn TextScorer, cfg: &RunConfig) -> Result<ExplorerDocument> {
    if cfg.projection == ProjectionKind::Hashtags {
        return Err(Error::InvalidArgument(
            "the pipeline labels tweet nodes, so it clusters the users or tweets projection".into(),
        ));
    }
    let GraphBundle {
        news_graph: graph,
        hashtag_network: hashtags,
        ..
    } = GraphBundle::build(tweets, cfg.keywords.clone(), cfg.keyword_mode)?;
    log::info!(
        "news graph: {} nodes, {} edges, {} unobserved originals, {} skewed retweets",
        graph.node_count(),
        graph.edge_count(),
        graph.unobserved_count(),
        graph.skew_rejected.len()
    );
    let annotated = annotate(&graph, scorer, cfg.threshold)?;
    let projected = project(cfg.projection, &graph, &hashtags)?;
    let partition = if projected.graph.total_weight() > 0.0 {
        let p = detect(&projected.graph, cfg.method, cfg.seed)?;
        log::info!("{}: {} communities, {} = {:.6}", cfg.method, p.count, cfg.method.quality_name(), p.quality);
        Some(LabeledPartition::new(&projected, &p, cfg.seed)?)
    } else {
        None
    };
    let trend = virality_trend_with(&annotated, cfg.bucket_seconds, cfg.viral_threshold, cfg.per_hashtag)?;
    let summary = summarize(&annotated);
    let meta = ExportMeta {
        seed: cfg.seed,
        threshold: cfg.threshold,
        viral_threshold: cfg.viral_threshold,
        bucket_seconds: cfg.bucket_seconds,
        keywords: cfg.keywords.clone(),
        keyword_mode: cfg.keyword_mode,
        community: None,
    };
    ExplorerDocument::build(&annotated, partition.as_ref(), &trend, &summary, &hashtags, meta)
}
