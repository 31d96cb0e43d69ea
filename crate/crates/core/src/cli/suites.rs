//! Registered sweep suites. Each suite expands into independent cases run in
//! parallel; results are sorted by case id before anything is written.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{build_nm_complex, enumerate_family, low_mask, FamilySpec, DEFAULT_ENUMERATION_CAP};
use crate::graph::{
    bipartite_graphs_up_to_isomorphism, check_matching_split, check_structure, gallai_edmonds_on, graphs_up_to_isomorphism,
    submasks, EdgeSet, Graph, VertexSet, DEFAULT_MATCHING_LIST_CAP,
};
use crate::homology::{check_leray, check_near_leray, reduced_betti, BettiTable, FieldSpec, LerayMode, SamplePolicy, PROXY_PRIME};
use crate::morse::{boolean_matching, join_matching, projection_matching, verify_family, Construction, ProjectionPart, SetMask};
use crate::rainbow::{
    bipartite_k2_triples, find_rainbow_matching, general_k2_quadruples, rainbow_exists_brute_force, search_tightness,
    verify_hypotheses, HostClass,
};

use super::cache::digest_hex;
use super::{betti_cached, Cache, CliError, RunManifest};

/// Registered suites and a one-line description of each.
pub const SUITES: &[(&str, &str)] = &[
    ("figure-1", "NM_3 of the subdivided K_6: nonzero in dimensions 4 and 5, zero from 6"),
    ("vanishing-k2", "NM_2 of every graph on at most 5 vertices vanishes from 3; NM_3 of random subgraphs of K_6 from 6"),
    ("vanishing-bipartite", "NM_k of every subgraph of K_{3,3} vanishes from 2k-2"),
    ("leray-k2", "exhaustive link checks for NM_2 of K_4, K_5 and K_{2,3}"),
    ("concentration", "NM_2 of K_4, K_5 concentrated in dimension 2; K_{2,2}, K_{2,3} in dimension 1"),
    ("morse-bounds", "matchings on the special families: validity, acyclicity, size bounds, Morse inequalities"),
    ("gallai-edmonds", "decomposition structure, matching split and edge-perturbation invariance on all graphs up to 6 vertices"),
    ("rainbow", "rainbow matching sweeps at k = 2 and tightness witnesses"),
    ("combinators", "join and projection laws on random configurations"),
];

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    pub seed: u64,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    pub cache: Option<Cache>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub passed: bool,
    pub detail: Value,
}

/// Cached Betti tables recomputed from scratch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub cached_tables: usize,
    pub sampled: usize,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub suite: String,
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<CaseResult>,
    pub audit: AuditReport,
    /// Digest of the sorted case results; stable across reruns.
    pub result_digest: String,
    pub cases: Vec<CaseResult>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.audit.mismatches.is_empty()
    }

    pub fn table(&self) -> String {
        let mut s = format!("suite {}  seed {}\n", self.suite, self.seed);
        s += &format!("cases   {}\npassed  {}\nfailed  {}\n", self.total, self.passed, self.failures.len());
        s += &format!(
            "audit   {} of {} cached tables, {} mismatches\n",
            self.audit.sampled,
            self.audit.cached_tables,
            self.audit.mismatches.len()
        );
        for f in &self.failures {
            s += &format!("FAIL {} {}\n", f.id, f.detail);
        }
        for m in &self.audit.mismatches {
            s += &format!("AUDIT {m}\n");
        }
        s += &format!("digest  {}\n", self.result_digest);
        s
    }
}

struct Ctx<'a> {
    cache: Option<&'a Cache>,
    seed: u64,
}

/// A Betti table the case obtained through the cache.
struct Computed {
    graph: Graph,
    k: usize,
    field: FieldSpec,
    table: BettiTable,
}

#[derive(Default)]
struct Outcome {
    passed: bool,
    detail: Value,
    computed: Vec<Computed>,
}

type Job = Box<dyn Fn(&Ctx) -> Result<Outcome, CliError> + Send + Sync>;

struct Case {
    id: String,
    job: Job,
}

fn case(id: impl Into<String>, job: impl Fn(&Ctx) -> Result<Outcome, CliError> + Send + Sync + 'static) -> Case {
    Case { id: id.into(), job: Box::new(job) }
}

fn case_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

const GF_PROXY: FieldSpec = FieldSpec::Gfp(PROXY_PRIME);

/// Runs a registered suite. Cases fail individually; errors inside a case
/// count as failures with the message recorded.
pub fn run_suite(name: &str, opts: &SweepOptions) -> Result<SweepSummary, CliError> {
    let cases = match name {
        "figure-1" => figure_one(),
        "vanishing-k2" => vanishing_small(opts.seed)?,
        "vanishing-bipartite" => vanishing_bipartite()?,
        "leray-k2" => leray_small()?,
        "concentration" => concentration()?,
        "morse-bounds" => morse_bounds(opts.seed)?,
        "gallai-edmonds" => gallai_edmonds_cases(),
        "rainbow" => rainbow_cases(),
        "combinators" => combinator_cases(),
        _ => {
            let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
            return Err(CliError::Usage(format!("unknown suite '{name}'; available: {}", names.join(", "))));
        }
    };
    let ctx = Ctx { cache: opts.cache.as_ref(), seed: opts.seed };
    let run = || -> Vec<(CaseResult, Vec<Computed>)> {
        cases
            .par_iter()
            .map(|c| match (c.job)(&ctx) {
                Ok(o) => (CaseResult { id: c.id.clone(), passed: o.passed, detail: o.detail }, o.computed),
                Err(e) => (CaseResult { id: c.id.clone(), passed: false, detail: json!({ "error": e.to_string() }) }, vec![]),
            })
            .collect()
    };
    let mut out = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?
            .install(run),
        None => run(),
    };
    out.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let computed: Vec<Computed> = out.iter_mut().flat_map(|(_, c)| std::mem::take(c)).collect();
    let results: Vec<CaseResult> = out.into_iter().map(|(r, _)| r).collect();
    let audit = if opts.cache.is_some() { audit(&computed, opts.seed)? } else { AuditReport::default() };

    let result_digest = digest_hex(&[name, &opts.seed.to_string(), &serde_json::to_string(&results)?]);
    let summary = SweepSummary {
        suite: name.to_string(),
        seed: opts.seed,
        total: results.len(),
        passed: results.iter().filter(|r| r.passed).count(),
        failures: results.iter().filter(|r| !r.passed).cloned().collect(),
        audit,
        result_digest,
        cases: results,
    };
    if let Some(cache) = &opts.cache {
        persist(cache, &summary)?;
    }
    Ok(summary)
}

fn persist(cache: &Cache, summary: &SweepSummary) -> Result<(), CliError> {
    let mut keys = Vec::with_capacity(summary.cases.len());
    for c in &summary.cases {
        let key = format!("case-{}", digest_hex(&[&summary.suite, &serde_json::to_string(c)?]));
        cache.store(&key, c)?;
        keys.push(key);
    }
    let index = json!({ "suite": summary.suite, "seed": summary.seed, "cases": keys });
    cache.store(&format!("sweep-{}", summary.result_digest), &index)?;
    let params = json!({ "suite": summary.suite });
    RunManifest::new("sweep", params, summary.seed, None, &summary.cases)?.persist(cache)?;
    Ok(())
}

/// Recomputes a seeded 5% (at least one) of the cached tables.
fn audit(computed: &[Computed], seed: u64) -> Result<AuditReport, CliError> {
    let mut report = AuditReport { cached_tables: computed.len(), ..Default::default() };
    if computed.is_empty() {
        return Ok(report);
    }
    let take = computed.len().div_ceil(20);
    let mut idx: Vec<usize> = (0..computed.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    idx.truncate(take);
    report.sampled = take;
    let mismatches: Vec<Option<String>> = idx
        .par_iter()
        .map(|&i| -> Result<Option<String>, CliError> {
            let c = &computed[i];
            let fresh = reduced_betti(&build_nm_complex(&c.graph, c.k, DEFAULT_ENUMERATION_CAP)?, c.field)?;
            Ok((!fresh.same_numbers(&c.table))
                .then(|| format!("k={} field={} graph {}", c.k, c.field, c.graph.to_edge_list().replace('\n', "; "))))
        })
        .collect::<Result<_, _>>()?;
    report.mismatches = mismatches.into_iter().flatten().collect();
    Ok(report)
}

fn betti_json(t: &BettiTable) -> Value {
    json!(t.support().iter().map(|&d| (d.to_string(), t.get(d))).collect::<std::collections::BTreeMap<_, _>>())
}

/// Vanishing from `d0` over GF(2); the proxy field is computed alongside and
/// agreement is reported without affecting the verdict.
fn vanishing_case(ctx: &Ctx, g: &Graph, k: usize, d0: isize) -> Result<Outcome, CliError> {
    let (t2, _) = betti_cached(ctx.cache, g, k, FieldSpec::Gf2)?;
    let (tp, _) = betti_cached(ctx.cache, g, k, GF_PROXY)?;
    Ok(Outcome {
        passed: t2.vanishes_from(d0),
        detail: json!({ "k": k, "vanishes_from": d0, "betti": betti_json(&t2), "fields_agree": t2.same_numbers(&tp) }),
        computed: vec![
            Computed { graph: g.clone(), k, field: FieldSpec::Gf2, table: t2 },
            Computed { graph: g.clone(), k, field: GF_PROXY, table: tp },
        ],
    })
}

fn figure_one() -> Vec<Case> {
    [FieldSpec::Gf2, GF_PROXY]
        .into_iter()
        .map(|field| {
            case(format!("subdivided-k6/k3/{field}"), move |ctx| {
                let g = Graph::subdivided_k6();
                let (t, _) = betti_cached(ctx.cache, &g, 3, field)?;
                Ok(Outcome {
                    passed: t.get(4) > 0 && t.get(5) > 0 && t.vanishes_from(6),
                    detail: json!({ "betti": betti_json(&t) }),
                    computed: vec![Computed { graph: g, k: 3, field, table: t }],
                })
            })
        })
        .collect()
}

fn vanishing_small(seed: u64) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    for n in 1..=5 {
        for g in graphs_up_to_isomorphism(n)? {
            let id = format!("k2/n{n}/{:04x}", g.edges().0);
            cases.push(case(id, move |ctx| vanishing_case(ctx, &g, 2, 3)));
        }
    }
    let host = Graph::complete(6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..20 {
        let edges = EdgeSet(rng.gen::<u64>() & host.edges().0);
        let g = host.with_edges(edges)?;
        cases.push(case(format!("k3/k6-random/{i:02}"), move |ctx| vanishing_case(ctx, &g, 3, 6)));
    }
    Ok(cases)
}

fn vanishing_bipartite() -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    for g in bipartite_graphs_up_to_isomorphism(3, 3)? {
        for k in [2usize, 3] {
            let g = g.clone();
            let id = format!("k{k}/k33/{:04x}", g.edges().0);
            cases.push(case(id, move |ctx| vanishing_case(ctx, &g, k, 2 * k as isize - 2)));
        }
    }
    Ok(cases)
}

fn leray_small() -> Result<Vec<Case>, CliError> {
    let hosts = vec![
        ("k4", Graph::complete(4)?, 2isize),
        ("k5", Graph::complete(5)?, 2),
        ("k23", Graph::complete_bipartite(2, 3)?, 1),
    ];
    Ok(hosts
        .into_iter()
        .map(|(name, g, d0)| {
            case(format!("near/{name}/d0-{d0}"), move |_| {
                let k = build_nm_complex(&g, 2, DEFAULT_ENUMERATION_CAP)?;
                let near = check_near_leray(&k, d0, FieldSpec::Gf2, SamplePolicy::Exhaustive)?;
                // A near-Leray complex vanishes one dimension higher.
                let top = reduced_betti(&k, FieldSpec::Gf2)?;
                let vanishes = top.vanishes_from(d0 + 1);
                let plain = check_leray(&k, d0 + 1, FieldSpec::Gf2, LerayMode::Links)?;
                Ok(Outcome {
                    passed: near.passed() && vanishes && plain.passed(),
                    detail: json!({
                        "links_checked": near.checked,
                        "violations": near.violations.len(),
                        "vanishes_above": vanishes,
                        "leray_one_higher": plain.passed(),
                    }),
                    computed: vec![],
                })
            })
        })
        .collect())
}

fn concentration() -> Result<Vec<Case>, CliError> {
    let hosts = vec![
        ("k4", Graph::complete(4)?, 2isize, None),
        ("k5", Graph::complete(5)?, 2, None),
        ("k22", Graph::complete_bipartite(2, 2)?, 1, Some(1usize)),
        ("k23", Graph::complete_bipartite(2, 3)?, 1, None),
    ];
    Ok(hosts
        .into_iter()
        .map(|(name, g, d, value)| {
            case(format!("k2/{name}"), move |ctx| {
                let (t, _) = betti_cached(ctx.cache, &g, 2, FieldSpec::Gf2)?;
                let passed = t.concentrated_in(d) && value.is_none_or(|v| t.get(d) == v);
                Ok(Outcome {
                    passed,
                    detail: json!({ "dimension": d, "betti": betti_json(&t) }),
                    computed: vec![Computed { graph: g.clone(), k: 2, field: FieldSpec::Gf2, table: t }],
                })
            })
        })
        .collect())
}

fn family_case(spec: FamilySpec) -> Case {
    let id = family_id(&spec);
    case(id, move |_| {
        if enumerate_family(&spec, DEFAULT_ENUMERATION_CAP)?.is_empty() {
            return Ok(Outcome { passed: true, detail: json!({ "verdict": "EMPTY_FAMILY" }), computed: vec![] });
        }
        let v = verify_family(&spec, FieldSpec::Gf2)?;
        Ok(Outcome {
            passed: v.passed(),
            detail: json!({
                "family_size": v.matching.family_size,
                "critical": v.critical_graphs.len(),
                "max_critical_size": v.bound.max_critical_size,
                "bound": v.bound.bound,
                "acyclic": v.matching.acyclic,
                "morse_inequalities": v.morse.holds,
            }),
            computed: vec![],
        })
    })
}

fn family_id(spec: &FamilySpec) -> String {
    match spec {
        FamilySpec::Pm { vertices, h } => format!("pm/v{}/{:05x}", vertices.len(), h.0),
        FamilySpec::Fc { vertices, h } => format!("fc/v{}/{:05x}", vertices.len(), h.0),
        FamilySpec::Bfc { x, y, z, h } => format!("bfc/x{}y{}/z{:02x}/{:05x}", x.len(), y.len(), z.0, h.0),
        FamilySpec::NmlinkComplete { vertices, h, k } => format!("link/k{k}/v{}/{:05x}", vertices.len(), h.0),
        FamilySpec::NmlinkBipartite { x, y, h, k } => format!("link-bip/k{k}/x{}y{}/{:05x}", x.len(), y.len(), h.0),
    }
}

/// Samples of `H` per BFC shape, besides the empty graph.
const BFC_H_SAMPLES: usize = 6;

fn morse_bounds(seed: u64) -> Result<Vec<Case>, CliError> {
    let mut specs = Vec::new();
    for n in [0usize, 2, 4, 6] {
        for g in graphs_up_to_isomorphism(n)? {
            specs.push(FamilySpec::Pm { vertices: VertexSet::range(n), h: g.edges() });
        }
    }
    for n in [1usize, 3, 5] {
        for g in graphs_up_to_isomorphism(n)? {
            specs.push(FamilySpec::Fc { vertices: VertexSet::range(n), h: g.edges() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for a in 1..=4 {
        for b in 1..=3 {
            let (x, y) = (VertexSet::range(a), VertexSet::from_range(a, a + b));
            let host = EdgeSet::complete_bipartite(x, y);
            for z in submasks(x.0 as u64) {
                let z = VertexSet(z as u32);
                let mut hs = BTreeSet::from([0u64]);
                for _ in 0..BFC_H_SAMPLES {
                    let density = rng.gen_range(0.1..0.5);
                    hs.insert(host.iter().filter(|_| rng.gen_bool(density)).fold(EdgeSet::EMPTY, |s, (u, v)| s.with(u, v)).0);
                }
                specs.extend(hs.into_iter().map(|h| FamilySpec::Bfc { x, y, z, h: EdgeSet(h) }));
            }
        }
    }
    for n in 2..=5 {
        for g in graphs_up_to_isomorphism(n)? {
            if g.matching_number() == 1 {
                specs.push(FamilySpec::NmlinkComplete { vertices: VertexSet::range(n), h: g.edges(), k: 2 });
            }
        }
    }
    for a in 1..=3 {
        for b in 1..=3 {
            for g in bipartite_graphs_up_to_isomorphism(a, b)? {
                if g.matching_number() == 1 {
                    let (x, y) = (VertexSet::range(a), VertexSet::from_range(a, a + b));
                    specs.push(FamilySpec::NmlinkBipartite { x, y, h: g.edges(), k: 2 });
                }
            }
        }
    }
    Ok(specs.into_iter().map(family_case).collect())
}

/// Edges inside `A` or between `A` and `C`.
fn perturbable_edges(a: VertexSet, c: VertexSet) -> EdgeSet {
    EdgeSet::complete(a).union(EdgeSet::complete_bipartite(a, c))
}

fn gallai_edmonds_cases() -> Vec<Case> {
    (1..=6usize)
        .map(|n| {
            case(format!("all-graphs/n{n}"), move |_| {
                let vs = VertexSet::range(n);
                let host = EdgeSet::complete(vs);
                let failures: Vec<String> = submasks(host.0)
                    .collect::<Vec<_>>()
                    .par_iter()
                    .filter_map(|&m| {
                        let edges = EdgeSet(m);
                        let ge = gallai_edmonds_on(edges, vs);
                        let fail = |what: String| Some(format!("{m:#x}: {what}"));
                        if let Err(e) = check_structure(edges, vs, &ge) {
                            return fail(e);
                        }
                        let g = Graph::from_edge_set(n, edges).ok()?;
                        let matchings = match g.maximum_matchings(DEFAULT_MATCHING_LIST_CAP) {
                            Ok(ms) => ms,
                            Err(e) => return fail(e.to_string()),
                        };
                        for mm in matchings {
                            if let Err(e) = check_matching_split(&ge, mm.edges()) {
                                return fail(e);
                            }
                        }
                        for (u, v) in perturbable_edges(ge.a_set, ge.c_set).iter() {
                            let toggled = EdgeSet(edges.0 ^ EdgeSet::single(u, v).0);
                            if gallai_edmonds_on(toggled, vs) != ge {
                                return fail(format!("toggling {u}-{v} changes the decomposition"));
                            }
                        }
                        None
                    })
                    .collect();
                Ok(Outcome {
                    passed: failures.is_empty(),
                    detail: json!({ "graphs": 1u64 << host.len(), "failures": failures.iter().take(10).collect::<Vec<_>>() }),
                    computed: vec![],
                })
            })
        })
        .collect()
}

const QUADRUPLES: u64 = 10_000;

fn rainbow_cases() -> Vec<Case> {
    let mut cases = vec![
        case("bipartite-k2-triples", |_| {
            let t = bipartite_k2_triples()?;
            Ok(Outcome {
                passed: t.violations.is_empty() && t.checked > 0,
                detail: json!({ "checked": t.checked, "skipped": t.skipped, "violations": t.violations }),
                computed: vec![],
            })
        }),
        case("general-k2-quadruples", |ctx| {
            let t = general_k2_quadruples(QUADRUPLES, 6, ctx.seed)?;
            Ok(Outcome {
                passed: t.violations.is_empty() && t.checked >= QUADRUPLES,
                detail: json!({ "checked": t.checked, "skipped": t.skipped, "violations": t.violations }),
                computed: vec![],
            })
        }),
    ];
    for (k, m, a) in [(2usize, 2usize, 2usize), (3, 4, 3)] {
        cases.push(case(format!("tightness/k{k}-m{m}"), move |ctx| {
            let w = search_tightness(k, &HostClass::CompleteBipartite(a, a), m, ctx.seed)?;
            let confirmed = w.as_ref().is_some_and(|i| {
                verify_hypotheses(i) && find_rainbow_matching(i).is_none() && !rainbow_exists_brute_force(i)
            });
            Ok(Outcome {
                passed: confirmed,
                detail: json!({ "host": format!("K{a},{a}"), "witness": w.map(|i| i.to_text()) }),
                computed: vec![],
            })
        }));
    }
    cases
}

const COMBINATOR_CONFIGS: u64 = 100;

fn random_subfamily(rng: &mut ChaCha8Rng, members: &[SetMask]) -> Vec<SetMask> {
    let mut f: Vec<SetMask> = members.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if f.is_empty() {
        f.push(members[rng.gen_range(0..members.len())]);
    }
    f
}

/// Family on a block with a boolean split on one of its bits.
fn random_part(rng: &mut ChaCha8Rng, block: SetMask) -> Construction {
    let family = random_subfamily(rng, &submasks(block).collect::<Vec<_>>());
    let bits: Vec<u32> = (0..64).filter(|b| block >> b & 1 == 1).collect();
    let split = boolean_matching(&family, bits[rng.gen_range(0..bits.len())]);
    Construction::new(block, family, split.matching)
}

fn join_case(ctx: &Ctx, i: u64) -> Result<Outcome, CliError> {
    let mut rng = case_rng(ctx.seed, i);
    let mut next = 0u32;
    let parts: Vec<Construction> = (0..rng.gen_range(2..=3))
        .map(|_| {
            let w = rng.gen_range(1..=4);
            let block = low_mask(w) << next;
            next += w as u32;
            random_part(&mut rng, block)
        })
        .collect();
    let out = join_matching(&parts)?;
    let report = out.report()?;
    let mut expected: Vec<SetMask> = vec![0];
    for p in &parts {
        expected = expected.iter().flat_map(|&a| p.critical().into_iter().map(move |b| a | b)).collect();
    }
    expected.sort_unstable();
    let crit = out.critical();
    Ok(Outcome {
        passed: report.valid && report.acyclic == Some(true) && crit == expected,
        detail: json!({ "parts": parts.len(), "family": out.family.len(), "critical": crit.len() }),
        computed: vec![],
    })
}

fn projection_case(ctx: &Ctx, i: u64) -> Result<Outcome, CliError> {
    let mut rng = case_rng(ctx.seed, i);
    let r = rng.gen_range(1..=4usize);
    let mut next = 0u32;
    let parts: Vec<ProjectionPart> = (0..r)
        .map(|j| {
            let w = rng.gen_range(1..=3);
            let mask = low_mask(w) << next;
            next += w as u32;
            ProjectionPart { index: j as u32, mask }
        })
        .collect();
    let ground = low_mask(next as usize);
    let tau = rng.gen::<u64>() & ground & rng.gen::<u64>();
    let project = |s: SetMask| -> SetMask {
        parts.iter().filter(|p| p.mask & s != 0).fold(0, |acc, p| acc | 1 << p.index)
    };
    let base = project(tau);
    let q_ground = low_mask(r);
    let above: Vec<SetMask> = submasks(q_ground & !base).map(|s| s | base).collect();
    let q_family = random_subfamily(&mut rng, &above);
    let free: Vec<u32> = (0..r as u32).filter(|b| base >> b & 1 == 0).collect();
    let q_matching = if free.is_empty() {
        Default::default()
    } else {
        boolean_matching(&q_family, free[rng.gen_range(0..free.len())]).matching
    };
    let q = Construction::new(q_ground, q_family, q_matching);
    let out = projection_matching(&parts, tau, &q)?;
    let report = out.report()?;

    let mut lifted: Vec<SetMask> =
        submasks(ground & !tau).map(|s| s | tau).filter(|&s| q.family.binary_search(&project(s)).is_ok()).collect();
    lifted.sort_unstable();
    let q_crit = q.critical();
    let crit = out.critical();
    let images: BTreeSet<SetMask> = crit.iter().map(|&s| project(s)).collect();
    let sizes_ok = crit.iter().all(|&s| {
        s.count_ones() + base.count_ones() == project(s).count_ones() + tau.count_ones()
    });
    let into_critical = images.iter().all(|p| q_crit.binary_search(p).is_ok());
    let injective = images.len() == crit.len();
    Ok(Outcome {
        passed: report.valid
            && report.acyclic == Some(true)
            && out.family == lifted
            && sizes_ok
            && into_critical
            && injective,
        detail: json!({
            "blocks": r,
            "family": out.family.len(),
            "critical": crit.len(),
            "sizes": sizes_ok,
            "injective": injective,
            "into_critical": into_critical,
        }),
        computed: vec![],
    })
}

fn combinator_cases() -> Vec<Case> {
    let mut cases: Vec<Case> =
        (0..COMBINATOR_CONFIGS).map(|i| case(format!("join/{i:03}"), move |ctx| join_case(ctx, i))).collect();
    cases.extend(
        (0..COMBINATOR_CONFIGS)
            .map(|i| case(format!("projection/{i:03}"), move |ctx| projection_case(ctx, COMBINATOR_CONFIGS + i))),
    );
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_names() {
        let err = run_suite("nope", &SweepOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), super::super::EXIT_USAGE);
        assert!(err.to_string().contains("leray-k2"));
    }

    #[test]
    fn concentration_is_deterministic() {
        let a = run_suite("concentration", &SweepOptions { seed: 1, jobs: Some(2), cache: None }).unwrap();
        let b = run_suite("concentration", &SweepOptions { seed: 1, jobs: Some(1), cache: None }).unwrap();
        assert!(a.all_passed(), "{}", a.table());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn cached_run_audits() {
        let dir = tempfile::tempdir().unwrap();
        let opts = SweepOptions { seed: 5, jobs: None, cache: Some(Cache::open(dir.path()).unwrap()) };
        let first = run_suite("concentration", &opts).unwrap();
        let second = run_suite("concentration", &opts).unwrap();
        assert_eq!(first.result_digest, second.result_digest);
        assert_eq!(second.audit.sampled, 1);
        assert!(second.audit.mismatches.is_empty());
    }
}
