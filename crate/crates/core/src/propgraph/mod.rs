//! Tweet ingestion, news graphs and hashtag co-occurrence networks.

mod bundle;
mod hashtag;
mod news;
mod tweet;

pub use bundle::GraphBundle;
pub use hashtag::{build_hashtag_network, HashtagLink, HashtagNetwork, HashtagNode};
pub use news::{
    build_news_graph, build_news_graph_with, match_keywords, match_keywords_with, node_size, parse_keywords,
    scaled_size, GraphNode, KeywordMode, NewsEdge, NewsGraph, NodeKind, SizeMode, MIN_NODE_SIZE,
};
pub use tweet::{normalize_hashtags, parse_tweets, read_tweets, tweets_to_ndjson, FileCollector, Tweet, TweetCollector, TweetPage};
