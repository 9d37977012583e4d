use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hashtag::{build_hashtag_network, HashtagNetwork};
use super::news::{build_news_graph_with, KeywordMode, NewsGraph};
use super::tweet::Tweet;
use crate::error::{Error, Result};

/// News graph and hashtag network built from one tweet file, as written by
/// `graph build`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphBundle {
    pub keywords: Vec<String>,
    pub keyword_mode: KeywordMode,
    pub news_graph: NewsGraph,
    /// Built from the observed tweets of `news_graph`.
    pub hashtag_network: HashtagNetwork,
}

impl GraphBundle {
    pub fn build(tweets: &[Tweet], keywords: Vec<String>, keyword_mode: KeywordMode) -> Result<Self> {
        let news_graph = build_news_graph_with(tweets, &keywords, keyword_mode)?;
        let hashtag_network = build_hashtag_network(&news_graph.observed_tweets());
        Ok(Self {
            keywords,
            keyword_mode,
            news_graph,
            hashtag_network,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let bundle: Self = serde_json::from_str(&text)?;
        bundle.news_graph.validate()?;
        Ok(bundle)
    }
}
