//! Trains the hashed logistic-regression baseline on a planted-keyword
//! corpus and prints the full metrics report.
//!
//! ```text
//! cargo run --release --example baseline_metrics
//! ```

use misinfograph::classifier::{evaluate_scorer, train_baseline};
use misinfograph::corpus::split;
use misinfograph::synthetic::planted_keyword_corpus;

fn main() -> misinfograph::Result<()> {
    let corpus = planted_keyword_corpus(2000, 11)?;
    let (train, val) = split(&corpus, 0.8, 11)?;
    let model = train_baseline(train.documents())?;
    let report = evaluate_scorer(&model, val.documents(), 0.5)?;

    let c = &report.confusion;
    println!("confusion: tp {} fp {} tn {} fn {}", c.tp, c.fp, c.tn, c.fn_);
    println!(
        "fake class: precision {:.4} recall {:.4} f1 {:.4}",
        report.precision, report.recall, report.f1
    );
    println!(
        "real class: precision {:.4} recall {:.4} f1 {:.4}",
        report.real_class.precision, report.real_class.recall, report.real_class.f1
    );
    println!("macro f1 {:.4}, mcc {:.4}, accuracy {:.4}", report.macro_avg.f1, report.mcc, report.accuracy);
    println!("pr curve: {} points", report.pr_curve.len());
    for p in report.pr_curve.iter().step_by((report.pr_curve.len() / 8).max(1)) {
        println!("  t {:.3}  recall {:.3}  precision {:.3}", p.threshold, p.recall, p.precision);
    }
    Ok(())
}
