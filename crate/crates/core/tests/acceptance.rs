//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when a
//! criterion fails that is not listed in `KNOWN_DEVIATIONS`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::*;
use fimi::cluster::{exec_eclat, parallel_mfi_sim, phase3_exchange, run_parallel_fimi, ExchangeSchedule, RunParams, SimNet, Variant};
use fimi::datagen::{generate_db, partition_db, GenParams};
use fimi::itemset::{Itemset, Pbec, TransactionDb};
use fimi::miners::{apriori, eclat, fpgrowth, mfi_mine, EclatOpts};
use fimi::sampling::{coverage_sample, coverage_sample_size, db_sample_size, reservoir_sample_size, Reservoir, ReservoirAlgo};
use fimi::scheduler::{lpt_schedule, makespan, plan_phase2, replication_factor, Scheduler};
use fimi::stats::{pagerank, MfiGraph};
use fimi::rng;
use rand::{Rng, SeedableRng};

/// Criteria whose printed expectation contradicts its own data; see the
/// decisions ledger. They still print FAIL.
const KNOWN_DEVIATIONS: &[usize] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(pass: bool, detail: String, t: Instant, limit: Duration) -> Outcome {
    let el = t.elapsed();
    if el > limit {
        outcome(false, format!("{detail}; took {el:?} > {limit:?}"))
    } else {
        outcome(pass, detail)
    }
}

fn all_eclat_opts() -> Vec<EclatOpts> {
    let mut v = Vec::new();
    for use_diffsets in [false, true] {
        for dynamic_order in [false, true] {
            for closure_opt in [false, true] {
                v.push(EclatOpts {
                    use_diffsets,
                    dynamic_order,
                    closure_opt,
                });
            }
        }
    }
    v
}

fn c1() -> Outcome {
    let t = Instant::now();
    let db = example15();
    let mut counts = vec![apriori(&db, 5).len(), fpgrowth(&db, 5).len()];
    for o in all_eclat_opts() {
        counts.push(eclat(&db, 5, o).0.len());
    }
    let (m, _) = mfi_mine(&db, 5, &db.frequent_items(5));
    let m: BTreeSet<Itemset> = m.into_iter().collect();
    let ok = counts.iter().all(|&c| c == 25) && m == example15_mfis();
    let shown: Vec<String> = m.iter().map(|u| format!("{{{u}}}")).collect();
    within(ok, format!("FI counts {counts:?}, MFIs {}", shown.join(" ")), t, Duration::from_secs(1))
}

fn c2() -> Outcome {
    let db = apriori_db();
    let got = as_map(&apriori(&db, 2));
    let truth_ok = got == brute_force(&db, 2);
    let printed: BTreeMap<Itemset, usize> = [
        (vec![1], 3),
        (vec![2], 3),
        (vec![3], 2),
        (vec![5], 5),
        (vec![1, 2], 2),
        (vec![1, 3], 2),
        (vec![1, 5], 3),
        (vec![2, 5], 3),
        (vec![1, 2, 5], 2),
    ]
    .into_iter()
    .map(|(u, s)| (Itemset::from(u), s))
    .collect();
    let extra: Vec<String> = got
        .iter()
        .filter(|(u, s)| printed.get(*u) != Some(*s))
        .map(|(u, s)| format!("{{{u}}}:{s}"))
        .collect();
    let missing: Vec<String> = printed
        .iter()
        .filter(|(u, s)| got.get(*u) != Some(*s))
        .map(|(u, s)| format!("{{{u}}}:{s}"))
        .collect();
    let f3_has_125 = got.get(&Itemset::from([1, 2, 5])) == Some(&2);
    let ok = extra.is_empty() && missing.is_empty();
    outcome(
        ok && truth_ok,
        format!(
            "output equals brute force: {truth_ok}; {{1 2 5}}:2 in F3: {f3_has_125}; \
             mined but not printed: {extra:?}; printed but not mined: {missing:?}"
        ),
    )
}

fn c3() -> Outcome {
    let t = Instant::now();
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut bad = Vec::new();
    for inst in 0..200u64 {
        let n_items = r.random_range(1..=10);
        let db = random_db(inst, n_items, 40);
        let minsup = r.random_range(1..=5);
        let bf = brute_force(&db, minsup);
        let mut ok = as_map(&apriori(&db, minsup)) == bf && as_map(&fpgrowth(&db, minsup)) == bf;
        for o in all_eclat_opts() {
            ok &= as_map(&eclat(&db, minsup, o).0) == bf;
        }
        if !ok {
            bad.push(inst);
        }
    }
    within(bad.is_empty(), format!("200 instances, mismatches {bad:?}"), t, Duration::from_secs(60))
}

fn gen_db(seed: u64) -> TransactionDb {
    generate_db(&GenParams {
        n_items: 50,
        n_patterns: 20,
        avg_pattern_len: 4.0,
        avg_txn_len: 8.0,
        n_txns: 2000,
        seed,
        ..GenParams::default()
    })
    .unwrap()
}

const GEN_MINSUP: usize = 40;

fn c4() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut runs = 0;
    for seed in 0..20 {
        let db = gen_db(seed);
        let want = as_map(&eclat(&db, GEN_MINSUP, EclatOpts::default()).0);
        for v in Variant::ALL {
            for p in [1, 2, 4, 8] {
                let parts = partition_db(&db, p).unwrap();
                let params = RunParams {
                    n_db: Some(1000),
                    n_fi: Some(2000),
                    seed,
                    ..RunParams::new(v, p, GEN_MINSUP)
                };
                runs += 1;
                let ok = match run_parallel_fimi(&parts, &params) {
                    Ok(r) => {
                        let all = r.all_fis();
                        let m: BTreeMap<Itemset, usize> = all.iter().map(|f| (f.itemset.clone(), f.support)).collect();
                        m.len() == all.len() && m == want
                    }
                    Err(_) => false,
                };
                if !ok {
                    bad.push((seed, v.name(), p));
                }
            }
        }
    }
    within(bad.is_empty(), format!("{runs} runs, mismatches {bad:?}"), t, Duration::from_secs(300))
}

fn c5() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for seed in 0..20 {
        let db = gen_db(seed);
        let fis = as_map(&eclat(&db, GEN_MINSUP, EclatOpts::default()).0);
        let mfis = maximal(fis.keys().cloned());
        let longest = mfis.iter().map(|m| m.len()).max().unwrap_or(0);
        for p in [1, 2, 4, 8] {
            for dynamic in [false, true] {
                checked += 1;
                let m: BTreeSet<Itemset> = parallel_mfi_sim(&db, GEN_MINSUP, p, dynamic).m().into_iter().collect();
                let ok = mfis.is_subset(&m)
                    && m.iter().all(|u| fis.contains_key(u))
                    && m.len() <= p.min(longest) * mfis.len();
                if !ok {
                    bad.push((seed, p, dynamic, m.len(), mfis.len()));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} instances, violations {bad:?}"))
}

fn c6() -> Outcome {
    let a = db_sample_size(0.005, 0.05).unwrap();
    let mut bad = Vec::new();
    for &eps in &[0.001, 0.005, 0.01, 0.05, 0.1, 0.2] {
        for &delta in &[0.01, 0.05, 0.1, 0.5] {
            for &rho in &[0.0005, 0.001, 0.01, 0.1] {
                let cov = (4.0 / (eps * eps * rho) * (2.0 / delta as f64).ln()).ceil() as u64;
                if coverage_sample_size(eps, delta, rho).unwrap() != cov {
                    bad.push(("coverage", eps, delta, rho));
                }
                let x: f64 = rho + eps;
                if x < 1.0 {
                    let kl = x * (x / rho).ln() + (1.0 - x) * ((1.0 - x) / (1.0 - rho)).ln();
                    let res = ((2.0 / delta as f64).ln() / kl).ceil() as u64;
                    if reservoir_sample_size(eps, delta, rho).unwrap() != res {
                        bad.push(("reservoir", eps, delta, rho));
                    }
                }
            }
        }
    }
    outcome(a == 73778 && bad.is_empty(), format!("db_sample_size(0.005,0.05)={a}; mismatches {bad:?}"))
}

fn mfi_families() -> Vec<Vec<Itemset>> {
    let mut fams = vec![example15_mfis().into_iter().collect::<Vec<_>>()];
    for seed in [3u64, 17, 40] {
        let db = random_db(seed, 10, 30);
        let fam: Vec<Itemset> = maximal(brute_force(&db, 3).into_keys()).into_iter().collect();
        if !fam.is_empty() {
            fams.push(fam);
        }
    }
    fams
}

fn c7() -> Outcome {
    let t = Instant::now();
    let draws = 100_000;
    let mut notes = Vec::new();
    let mut ok = true;
    for (k, fam) in mfi_families().iter().enumerate() {
        // Exact: uniform over the union of the powersets.
        let union: BTreeSet<Itemset> = fam.iter().flat_map(powerset).collect();
        let idx: BTreeMap<&Itemset, usize> = union.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let s = coverage_sample(fam, draws, &mut rng(100 + k as u64), true).unwrap();
        let mut obs = vec![0u64; union.len()];
        for u in &s.itemsets {
            obs[idx[u]] += 1;
        }
        let p_exact = chi_square_p(&obs, &vec![1.0 / union.len() as f64; union.len()]);
        // Modified: multiplicity of u over the powersets / Σ|powerset|.
        let total: f64 = fam.iter().map(|m| (m.len() as f64).exp2()).sum();
        let expect: Vec<f64> = union
            .iter()
            .map(|u| fam.iter().filter(|m| u.is_subset_of(m)).count() as f64 / total)
            .collect();
        let s = coverage_sample(fam, draws, &mut rng(200 + k as u64), false).unwrap();
        let mut obs = vec![0u64; union.len()];
        for u in &s.itemsets {
            obs[idx[u]] += 1;
        }
        let p_mod = chi_square_p(&obs, &expect);
        ok &= p_exact > 0.001 && p_mod > 0.001;
        notes.push(format!("family {k} ({} sets): p_exact={p_exact:.3} p_mod={p_mod:.3}", union.len()));
    }
    for algo in [ReservoirAlgo::Simple, ReservoirAlgo::Vitter] {
        let trials = 50_000u64;
        let mut hits = vec![0u64; 100];
        for t in 0..trials {
            let mut r = Reservoir::new(10, algo, rng(t ^ 0xabc));
            for x in 0..100usize {
                r.push(x);
            }
            for &x in r.items() {
                hits[x] += 1;
            }
        }
        let worst = hits.iter().map(|&h| (h as f64 / trials as f64 - 0.1).abs()).fold(0.0, f64::max);
        ok &= worst <= 0.01;
        notes.push(format!("{algo:?} max |incl-0.1|={worst:.4}"));
    }
    within(ok, notes.join("; "), t, Duration::from_secs(120))
}

/// Optimal makespan by branch and bound (jobs in descending order, no two
/// empty processors tried for the same job).
fn opt_makespan(sizes: &[u64], p: usize) -> u64 {
    let mut s = sizes.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    fn go(k: usize, s: &[u64], loads: &mut Vec<u64>, best: &mut u64) {
        let cur = *loads.iter().max().unwrap();
        if cur >= *best {
            return;
        }
        if k == s.len() {
            *best = cur;
            return;
        }
        let mut tried_empty = false;
        for i in 0..loads.len() {
            if loads[i] == 0 {
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            loads[i] += s[k];
            go(k + 1, s, loads, best);
            loads[i] -= s[k];
        }
    }
    let mut best = s.iter().sum::<u64>() + 1;
    go(0, &s, &mut vec![0; p], &mut best);
    best
}

fn c8() -> Outcome {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let mut n_inst = 0;
    let mut bad = Vec::new();
    let mut worst: f64 = 1.0;
    for n in 1..=12 {
        for p in 1..=4 {
            for _ in 0..25 {
                let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=30)).collect();
                let opt = opt_makespan(&sizes, p);
                let lpt = makespan(&sizes, &lpt_schedule(&sizes, p));
                n_inst += 1;
                worst = worst.max(lpt as f64 / opt as f64);
                if lpt > (4 * opt).div_ceil(3) {
                    bad.push((sizes, p, lpt, opt));
                }
            }
        }
    }
    // Graham's tight family: 2P+1 jobs, two each of 2P-1..P and three of P.
    for p in 2..=4u64 {
        let mut sizes: Vec<u64> = (p..2 * p).flat_map(|x| [x, x]).collect();
        sizes.push(p);
        let opt = opt_makespan(&sizes, p as usize);
        let lpt = makespan(&sizes, &lpt_schedule(&sizes, p as usize));
        n_inst += 1;
        worst = worst.max(lpt as f64 / opt as f64);
        if lpt > (4 * opt).div_ceil(3) {
            bad.push((sizes, p as usize, lpt, opt));
        }
    }
    outcome(bad.is_empty(), format!("{n_inst} instances, worst LPT/OPT {worst:.3}, violations {bad:?}"))
}

fn c9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in 2..=16 {
        let s = ExchangeSchedule::round_robin(p);
        let mut seen = BTreeSet::new();
        let mut valid = s.rounds.len() == if p % 2 == 0 { p - 1 } else { p };
        for r in &s.rounds {
            let mut busy = BTreeSet::new();
            for &(a, b) in r {
                valid &= a != b && busy.insert(a) && busy.insert(b) && seen.insert((a.min(b), a.max(b)));
            }
        }
        valid &= seen.len() == p * (p - 1) / 2;
        if !valid {
            notes.push(format!("P={p} invalid"));
        }
        ok &= valid;
    }
    let r1: Vec<(usize, usize)> = ExchangeSchedule::round_robin(14).rounds[0].iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    let printed = vec![(1, 14), (2, 13), (3, 12), (4, 11), (5, 10), (6, 9), (7, 8)];
    ok &= r1 == printed;
    notes.push(format!("P=14 round 1 {r1:?}"));
    let mut dprime_ok = true;
    for seed in 0..5 {
        let db = gen_db(seed);
        let fis: Vec<Itemset> = eclat(&db, GEN_MINSUP, EclatOpts::default()).0.into_iter().map(|f| f.itemset).collect();
        for p in [2, 3, 5, 8] {
            let plan = plan_phase2(&fis, &db, &db.frequent_items(GEN_MINSUP), 0.3, p, Scheduler::Lpt).unwrap();
            let parts = partition_db(&db, p).unwrap();
            let mut net = SimNet::new(p);
            let got = phase3_exchange(&plan, &parts, &mut net);
            for j in 0..p {
                let mine = plan.prefixes_of(j);
                let want: Vec<_> = db
                    .transactions
                    .iter()
                    .filter(|t| mine.iter().any(|u| u.is_subset_of(&t.items)))
                    .cloned()
                    .collect();
                dprime_ok &= got[j].transactions == want;
            }
            dprime_ok &= net.quiet();
        }
    }
    ok &= dprime_ok;
    notes.push(format!("D' equals set-builder definition: {dprime_ok}"));
    outcome(ok, notes.join("; "))
}

const CLUSTER_K: u32 = 5;
const CLUSTER_W: u32 = 8;
const CLUSTER_TXNS: usize = 3000;
const CLUSTER_MINSUP: usize = 60;

fn c10() -> Outcome {
    let t = Instant::now();
    let p = 4;
    let mut wins = 0;
    let mut within_p = true;
    let mut gains = Vec::new();
    for seed in 0..20 {
        let db = clustered_db(seed, CLUSTER_K, CLUSTER_W, CLUSTER_TXNS);
        let fis: Vec<Itemset> = eclat(&db, CLUSTER_MINSUP, EclatOpts::default()).0.into_iter().map(|f| f.itemset).collect();
        let items = db.frequent_items(CLUSTER_MINSUP);
        let mut rf = Vec::new();
        for sch in [Scheduler::Lpt, Scheduler::Qkp] {
            let plan = plan_phase2(&fis, &db, &items, 0.3, p, sch).unwrap();
            let prefixes: Vec<Itemset> = plan.pbecs.iter().map(|b| b.prefix.clone()).collect();
            rf.push(replication_factor(&plan.assignment, &prefixes, &db));
        }
        within_p &= rf.iter().all(|&x| x <= p as f64);
        if rf[1] <= rf[0] {
            wins += 1;
        }
        gains.push((rf[0] - rf[1]) / rf[0]);
    }
    gains.sort_by(f64::total_cmp);
    let ok = wins >= 16 && within_p;
    within(
        ok,
        format!(
            "QKP <= LPT on {wins}/20; all <= P: {within_p}; relative gain min {:.3} median {:.3} max {:.3}",
            gains[0], gains[10], gains[19]
        ),
        t,
        Duration::from_secs(120),
    )
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

fn c11() -> Outcome {
    use statrs::distribution::{Binomial, DiscreteCDF};
    let p = 4;
    let mut res = Vec::new();
    let mut base = Vec::new();
    let mut exact = true;
    for seed in 0..30u64 {
        let db = clustered_db(1000 + seed, CLUSTER_K, CLUSTER_W, CLUSTER_TXNS);
        let parts = partition_db(&db, p).unwrap();
        let params = RunParams {
            n_db: Some(2000),
            n_fi: Some(19869),
            seed,
            ..RunParams::new(Variant::Reservoir, p, CLUSTER_MINSUP)
        };
        let r = run_parallel_fimi(&parts, &params).unwrap();
        exact &= as_map(&r.all_fis()) == as_map(&eclat(&db, CLUSTER_MINSUP, EclatOpts::default()).0);
        res.push(r.metrics.balance());
        // Same PBECs, each sent to a uniformly random processor.
        let mut g = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x7a5d);
        let mut lists: Vec<Vec<Pbec>> = vec![Vec::new(); p];
        for b in &r.plan.pbecs {
            lists[g.random_range(0..p)].push(b.clone());
        }
        let work: Vec<u64> = lists
            .iter()
            .map(|l| exec_eclat(l, &db, CLUSTER_MINSUP, EclatOpts::default()).1.work())
            .collect();
        base.push(fimi::cluster::balance_ratio(&work));
    }
    let wins = res.iter().zip(&base).filter(|(a, b)| a < b).count() as u64;
    let ties = res.iter().zip(&base).filter(|(a, b)| a == b).count() as u64;
    let n = 30 - ties;
    // One-sided sign test: P(X >= wins) for X ~ Bin(n, 1/2).
    let pval = if wins == 0 { 1.0 } else { 1.0 - Binomial::new(0.5, n).unwrap().cdf(wins - 1) };
    let (mr, mb) = (median(&res), median(&base));
    outcome(
        exact && pval < 0.05 && mr < mb,
        format!("reservoir wins {wins}/{n} (ties {ties}), sign-test p={pval:.4}; median max/mean {mr:.3} vs random {mb:.3}; outputs exact: {exact}"),
    )
}

fn c12() -> Outcome {
    let d = 0.8;
    let edgeless = pagerank(&MfiGraph::from_edges(5, vec![]), d, 0.01, 100);
    let e_ok = edgeless.values.iter().all(|&v| v == 1.0 - d);
    let g = MfiGraph::from_edges(2, vec![(0, 1, 1.0), (1, 0, 0.5)]);
    let x1 = ((1.0 - d) + d * 0.5 * (1.0 - d)) / (1.0 - 0.5 * d * d);
    let x2 = (1.0 - d) + d * x1;
    let r = pagerank(&g, d, 1e-12, 100_000);
    let err = (r.values[0] - x1).abs().max((r.values[1] - x2).abs());
    let defaults = fimi::stats::PAGERANK_DAMPING == 0.8 && fimi::stats::MIN_EDGE_WEIGHT == 0.6 && fimi::stats::PAGERANK_TOL == 0.01;
    outcome(
        e_ok && err < 1e-9 && r.converged && defaults,
        format!("edgeless all 1-d: {e_ok}; 2-node error {err:.2e}; defaults d=0.8/0.6/0.01: {defaults}"),
    )
}

fn main() {
    let criteria: Vec<(usize, fn() -> Outcome)> = vec![
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    for (k, f) in criteria {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_DEVIATIONS.contains(&k) { " [documented deviation]" } else { "" };
        println!("criterion {k:>2}: {tag}{note} ({:.1}s) {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.pass && !KNOWN_DEVIATIONS.contains(&k) {
            unexpected.push(k);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failed criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
