use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::annotate::AnnotatedGraph;
use crate::error::{Error, Result};

pub const DEFAULT_BUCKET_SECONDS: i64 = 3600;
pub const DEFAULT_VIRAL_THRESHOLD: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendBucket {
    pub start: i64,
    pub end: i64,
    /// Retweets of fake-labeled originals in this bucket.
    pub fake: u64,
    pub real: u64,
    pub cumulative_fake: u64,
    pub cumulative_real: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagTrend {
    pub tag: String,
    /// Retweets per bucket of originals carrying the tag.
    pub counts: Vec<u64>,
    pub total: u64,
    pub viral_at: Option<i64>,
}

/// Retweet activity over time, split by the inherited label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub bucket_seconds: i64,
    pub viral_threshold: u64,
    /// Timestamp of the earliest original; bucket `i` covers
    /// `[origin + i*w, origin + (i+1)*w)`.
    pub origin: Option<i64>,
    pub buckets: Vec<TrendBucket>,
    /// End of the first bucket by which some original reached the threshold.
    pub viral_at: Option<i64>,
    /// Originals that reached the threshold, in id order.
    pub viral_tweets: Vec<String>,
    pub per_hashtag: Option<Vec<HashtagTrend>>,
}

impl TrendSeries {
    pub fn total_retweets(&self) -> u64 {
        self.buckets.iter().map(|b| b.fake + b.real).sum()
    }
}

fn first_crossing(counts: &[u64], threshold: u64) -> Option<usize> {
    let mut running = 0;
    counts.iter().position(|&c| {
        running += c;
        running >= threshold
    })
}

pub fn virality_trend(annotated: &AnnotatedGraph, bucket_seconds: i64, viral_threshold: u64) -> Result<TrendSeries> {
    virality_trend_with(annotated, bucket_seconds, viral_threshold, false)
}

/// Buckets retweets by time since the earliest original. With
/// `per_hashtag`, also aggregates retweets by the originals' hashtags.
pub fn virality_trend_with(
    annotated: &AnnotatedGraph,
    bucket_seconds: i64,
    viral_threshold: u64,
    per_hashtag: bool,
) -> Result<TrendSeries> {
    if bucket_seconds < 1 {
        return Err(Error::InvalidArgument(format!("bucket width {bucket_seconds} must be at least 1 s")));
    }
    if viral_threshold < 1 {
        return Err(Error::InvalidArgument("virality threshold must be at least 1".into()));
    }
    let graph = &annotated.graph;
    let origin = graph.originals().map(|n| n.timestamp).min();
    let mut series = TrendSeries {
        bucket_seconds,
        viral_threshold,
        origin,
        buckets: Vec::new(),
        viral_at: None,
        viral_tweets: Vec::new(),
        per_hashtag: per_hashtag.then(Vec::new),
    };
    let Some(origin) = origin else {
        return Ok(series);
    };

    let index = graph.index();
    let bucket_of = |ts: i64| ((ts - origin) / bucket_seconds) as usize;
    let n_buckets = graph.retweets().map(|r| bucket_of(r.timestamp) + 1).max().unwrap_or(0);
    let mut fake = vec![0u64; n_buckets];
    let mut real = vec![0u64; n_buckets];
    let mut per_original: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    let mut per_tag: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for e in &graph.edges {
        let src = index[e.source.as_str()];
        let retweet = &graph.nodes[index[e.target.as_str()]];
        let b = bucket_of(retweet.timestamp);
        if annotated.predictions[src].label == 1 {
            fake[b] += 1;
        } else {
            real[b] += 1;
        }
        per_original.entry(e.source.as_str()).or_insert_with(|| vec![0; n_buckets])[b] += 1;
        if per_hashtag {
            for tag in &graph.nodes[src].hashtags {
                per_tag.entry(tag.as_str()).or_insert_with(|| vec![0; n_buckets])[b] += 1;
            }
        }
    }

    let (mut cf, mut cr) = (0, 0);
    series.buckets = (0..n_buckets)
        .map(|b| {
            cf += fake[b];
            cr += real[b];
            let start = origin + b as i64 * bucket_seconds;
            TrendBucket {
                start,
                end: start + bucket_seconds,
                fake: fake[b],
                real: real[b],
                cumulative_fake: cf,
                cumulative_real: cr,
            }
        })
        .collect();

    let bucket_end = |b: usize| origin + (b as i64 + 1) * bucket_seconds;
    let mut earliest: Option<usize> = None;
    for (id, counts) in &per_original {
        if let Some(b) = first_crossing(counts, viral_threshold) {
            series.viral_tweets.push(id.to_string());
            earliest = Some(earliest.map_or(b, |e| e.min(b)));
        }
    }
    series.viral_at = earliest.map(bucket_end);
    if let Some(tags) = series.per_hashtag.as_mut() {
        *tags = per_tag
            .into_iter()
            .map(|(tag, counts)| HashtagTrend {
                tag: tag.to_string(),
                total: counts.iter().sum(),
                viral_at: first_crossing(&counts, viral_threshold).map(bucket_end),
                counts,
            })
            .collect();
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::Prediction;
    use crate::propgraph::{build_news_graph, Tweet};

    fn cascade(retweets: usize, spacing: i64, label: u8) -> AnnotatedGraph {
        let mut tweets = vec![Tweet {
            tweet_id: "o".into(),
            user_id: "u".into(),
            user_followers: 0,
            timestamp: 1000,
            text: "story".into(),
            hashtags: vec!["tag".into()],
            retweet_of: None,
        }];
        for i in 0..retweets {
            tweets.push(Tweet {
                tweet_id: format!("r{i}"),
                user_id: format!("v{i}"),
                user_followers: 0,
                timestamp: 1000 + i as i64 * spacing,
                text: "story".into(),
                hashtags: vec![],
                retweet_of: Some("o".into()),
            });
        }
        let g = build_news_graph(&tweets, &["story"]).unwrap();
        let p = vec![Prediction { probability: 0.9, label }; g.nodes.len()];
        AnnotatedGraph::new(g, p, 0.5).unwrap()
    }

    #[test]
    fn crossing_bucket() {
        // 1200 retweets, one every 9 s: the 1000th lands at 8991 s, in hour 3.
        let t = virality_trend(&cascade(1200, 9, 1), 3600, 1000).unwrap();
        assert_eq!(t.viral_at, Some(1000 + 3 * 3600));
        assert_eq!(t.buckets.len(), 3);
        assert_eq!(t.total_retweets(), 1200);
        assert_eq!(t.buckets[2].cumulative_fake, 1200);
        assert_eq!(t.viral_tweets, vec!["o".to_string()]);
    }

    #[test]
    fn just_below_threshold() {
        let t = virality_trend(&cascade(999, 9, 0), 3600, 1000).unwrap();
        assert_eq!(t.viral_at, None);
        assert_eq!(t.buckets.last().unwrap().cumulative_real, 999);
    }

    #[test]
    fn empty_graph() {
        let a = AnnotatedGraph::new(Default::default(), vec![], 0.5).unwrap();
        let t = virality_trend(&a, 60, 10).unwrap();
        assert!(t.buckets.is_empty() && t.origin.is_none());
    }

    #[test]
    fn per_hashtag_totals() {
        let t = virality_trend_with(&cascade(20, 30, 1), 60, 10, true).unwrap();
        let tags = t.per_hashtag.unwrap();
        assert_eq!(tags.len(), 1);
        assert_eq!(tags[0].total, 20);
        assert_eq!(tags[0].viral_at, Some(1000 + 5 * 60));
    }

    #[test]
    fn invalid_arguments() {
        let a = cascade(1, 1, 1);
        assert!(virality_trend(&a, 0, 10).is_err());
        assert!(virality_trend(&a, 10, 0).is_err());
    }
}
