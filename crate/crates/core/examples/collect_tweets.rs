//! Pages through a tweet file with the collector interface.
//!
//! ```text
//! cargo run --example collect_tweets -- fraud
//! ```

use std::path::PathBuf;

use misinfograph::propgraph::{FileCollector, TweetCollector};

fn main() -> misinfograph::Result<()> {
    let query = std::env::args().nth(1).unwrap_or_else(|| "fraud".into());
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/tweets.ndjson");
    let mut collector = FileCollector::open(&path, 50)?;

    let mut cursor: Option<String> = None;
    let mut pages = 0;
    let mut total = 0;
    loop {
        let page = collector.fetch_page(&query, cursor.as_deref())?;
        pages += 1;
        total += page.tweets.len();
        match page.next_cursor {
            Some(c) => cursor = Some(c),
            None => break,
        }
    }
    println!("{query:?}: {total} tweets over {pages} pages");
    let all = collector.collect_all(&query)?;
    assert_eq!(all.len(), total);
    for t in all.iter().take(3) {
        println!("  {} {} {:?}", t.tweet_id, t.user_id, t.text);
    }
    Ok(())
}
