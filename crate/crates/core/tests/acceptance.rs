//! End-to-end checks, one line per criterion. Lines go straight to stdout so
//! they show up in the test log without `--nocapture`.

use std::io::Write;
use std::time::Instant;

use nmk_core::cli::{run_suite, Cache, SweepOptions, SweepSummary};

const SEED: u64 = 20240601;

const CRITERIA: &[(u32, &str, &str)] = &[
    (1, "figure-1", "subdivided K_6 at k = 3 over GF(2) and GF(65521)"),
    (2, "vanishing-k2", "vanishing on all graphs up to 5 vertices, plus random K_6 subgraphs at k = 3"),
    (3, "vanishing-bipartite", "vanishing on every subgraph of K_{3,3}"),
    (4, "leray-k2", "near-Leray links of NM_2(K_4), NM_2(K_5), NM_2(K_{2,3})"),
    (5, "concentration", "homology concentrated in one dimension for complete hosts"),
    (6, "morse-bounds", "matching constructions: valid, acyclic, bounded, Morse inequalities"),
    (7, "gallai-edmonds", "decomposition oracle on all graphs up to 6 vertices"),
    (8, "rainbow", "rainbow sweeps and tightness witnesses"),
    (9, "combinators", "join and projection laws"),
];

fn line(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    let _ = out.flush();
}

fn disagreements(s: &SweepSummary) -> usize {
    s.cases.iter().filter(|c| c.detail.get("fields_agree") == Some(&serde_json::Value::Bool(false))).count()
}

#[test]
fn acceptance_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let opts = SweepOptions { seed: SEED, jobs: None, cache: Some(Cache::open(dir.path()).unwrap()) };
    let mut failed = Vec::new();
    for &(n, suite, about) in CRITERIA {
        let start = Instant::now();
        let verdict = match run_suite(suite, &opts) {
            Ok(s) => {
                let ok = s.all_passed();
                let mut note = format!("{}/{} cases", s.passed, s.total);
                if s.audit.sampled > 0 {
                    note += &format!(", audit {}/{} ok", s.audit.sampled - s.audit.mismatches.len(), s.audit.sampled);
                }
                let mixed = disagreements(&s);
                if mixed > 0 {
                    note += &format!(", {mixed} cases differ between fields");
                }
                for f in &s.failures {
                    line(&format!("    failed case {}: {}", f.id, f.detail));
                }
                (ok, note)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let (ok, note) = verdict;
        line(&format!(
            "criterion {n} [{suite}] {about}: {} ({note}, {:.2?})",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed()
        ));
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn sweeps_are_reproducible() {
    let a = run_suite("combinators", &SweepOptions { seed: 3, jobs: Some(1), cache: None }).unwrap();
    let b = run_suite("combinators", &SweepOptions { seed: 3, jobs: Some(4), cache: None }).unwrap();
    assert_eq!(serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
    let c = run_suite("combinators", &SweepOptions { seed: 4, jobs: None, cache: None }).unwrap();
    assert_ne!(a.result_digest, c.result_digest);
}
