//! Five-topic fixture scored by hand (counts in the comments).

use std::collections::BTreeMap;

use updsum_core::rouge::evaluate_run;
use updsum_core::{SetLabel, SummaryKey};

fn key(t: &str) -> SummaryKey {
    SummaryKey::new(t, SetLabel::A)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

#[test]
fn hand_scored_fixture() {
    let summaries = BTreeMap::from([
        (key("T1"), "The cat sat.".to_string()),
        (key("T2"), "a b".to_string()),
        (key("T3"), "x y z".to_string()),
        (key("T4"), "a a a b".to_string()),
        (key("T5"), "orphan summary".to_string()),
    ]);
    let refs = BTreeMap::from([
        (key("T1"), vec!["the cat ran".to_string()]),
        (key("T2"), vec!["a b".to_string(), "b a".to_string()]),
        (key("T3"), vec!["a b c".to_string()]),
        (key("T4"), vec!["a b a".to_string()]),
    ]);
    let report = evaluate_run(&summaries, &refs);

    // (ROUGE-1, ROUGE-2, ROUGE-SU4)
    let expected = [
        ("T1", 2.0 / 3.0, 1.0 / 2.0, 3.0 / 6.0), // the, cat | (the,cat) | +(the,cat) of 6 units
        ("T2", 4.0 / 4.0, 1.0 / 2.0, 5.0 / 6.0), // pooled over both references
        ("T3", 0.0, 0.0, 0.0),
        ("T4", 3.0 / 3.0, 1.0 / 2.0, 5.0 / 6.0), // a clipped to 2; (a,a) and (a,b) clipped to 1
    ];
    for (t, r1, r2, su4) in expected {
        let s = report.per_topic[&key(t)];
        assert!(close(s.rouge1, r1), "{t} ROUGE-1 {}", s.rouge1);
        assert!(close(s.rouge2, r2), "{t} ROUGE-2 {}", s.rouge2);
        assert!(close(s.rouge_su4, su4), "{t} ROUGE-SU4 {}", s.rouge_su4);
    }
    assert!(report.skipped.contains(&key("T5")));
    assert!(close(report.rouge1, 2.0 / 3.0));
    assert!(close(report.rouge2, 0.375));
    assert!(close(report.rouge_su4, 13.0 / 24.0));
}

#[test]
fn self_reference_scores_one() {
    let text = "Arctic ice is melting faster than expected.".to_string();
    let report = evaluate_run(
        &BTreeMap::from([(key("T"), text.clone())]),
        &BTreeMap::from([(key("T"), vec![text])]),
    );
    assert_eq!(report.means().values(), [1.0, 1.0, 1.0]);
}
