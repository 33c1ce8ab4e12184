//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and
//! exits non-zero if a criterion fails other than in the documented way.
//!
//! Slow optional criteria run only with `CIRCUIT_CODES_SLOW=1`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use circuit_codes::canon::{canonical_circuit, classify_inversion, InversionClass};
use circuit_codes::corpus::CORPUS;
use circuit_codes::direct::{direct_search, direct_search_parallel, prune_check, PruneLevel, SearchConfig};
use circuit_codes::joiner::{join_vec, JoinLimits, JoinTask};
use circuit_codes::permuted::{
    construct_special, derive_skeleton, search_initial_vec, search_natural_vec, search_truncated, PermutedSearch,
    SearchLimits, SkeletonPolicy, SpecialKind,
};
use circuit_codes::structure::is_natural;
use circuit_codes::{
    canonical_path, parse_sequence, verify_spread, Code, CodeKind, Permutation, SpreadCheck, SpreadChecker,
    TransitionSequence, Vertex,
};

/// Outcome of one criterion.
enum Status {
    Pass(String),
    Fail(String),
    /// Fails for reasons recorded in the decisions notes; the listed
    /// corpus ids are the only permitted failures.
    KnownFail(String),
    Skip(String),
}

fn slow_enabled() -> bool {
    std::env::var("CIRCUIT_CODES_SLOW").is_ok_and(|v| v == "1")
}

fn coils_at_max(d: usize, prune: PruneLevel) -> (usize, Vec<Code>) {
    let cfg = SearchConfig {
        prune,
        ..SearchConfig::new(d, 2, CodeKind::Coil)
    };
    let s = direct_search(&cfg, &mut |_| {}).expect("valid config");
    (s.max_length, s.maximal.into_values().collect())
}

fn criterion_1() -> Status {
    let known: BTreeSet<&str> = ["coil-s3-d9-n58", "coil-s6-d13-n50"].into();
    let mut failures = Vec::new();
    for e in CORPUS {
        let seq = match e.sequence() {
            Ok(s) => s,
            Err(err) => {
                failures.push((e.id, format!("parse error: {err}")));
                continue;
            }
        };
        let check = verify_spread(e.kind, e.spread, &seq).expect("positive spread");
        let mut why = Vec::new();
        if let SpreadCheck::Violated(v) = check {
            why.push(format!("x_{} and x_{} at distance {}", v.i, v.j, v.distance));
        } else if check != SpreadCheck::Valid {
            why.push(format!("{check:?}"));
        }
        if seq.len() != e.expected_len {
            let spread_note = if check.is_valid() { "valid at the stated spread, " } else { "" };
            why.push(format!("{spread_note}N={} but expected {}", seq.len(), e.expected_len));
        }
        if !why.is_empty() {
            failures.push((e.id, why.join("; ")));
        }
    }
    let summary = format!(
        "{}/{} entries verify at stated (d, k, N)",
        CORPUS.len() - failures.len(),
        CORPUS.len()
    );
    if failures.is_empty() {
        return Status::Pass(summary);
    }
    let detail: Vec<String> = failures.iter().map(|(id, why)| format!("{id}: {why}")).collect();
    let msg = format!("{summary}; {}", detail.join(" | "));
    if failures.iter().all(|(id, _)| known.contains(id)) {
        Status::KnownFail(msg)
    } else {
        Status::Fail(msg)
    }
}

fn criterion_2() -> Status {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (d, want) in [(2, 4), (3, 6), (4, 8)] {
        let (pruned, _) = coils_at_max(d, PruneLevel::Subsequence);
        let (brute, _) = coils_at_max(d, PruneLevel::None);
        ok &= pruned == want && brute == want;
        notes.push(format!("d={d}: {pruned}"));
    }
    for (d, want_len, want_classes) in [(5, 14, 3), (6, 26, 4)] {
        let (n, classes) = coils_at_max(d, PruneLevel::Subsequence);
        ok &= n == want_len && classes.len() == want_classes;
        notes.push(format!("d={d}: {n} ({} classes)", classes.len()));
    }
    let msg = format!("{} in {:.2?}", notes.join(", "), t.elapsed());
    if ok {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn criterion_3() -> Status {
    let mut ok = true;
    // Every coil class in d <= 5, not just the longest.
    let mut classes = 0;
    for d in 2..=5 {
        let cfg = SearchConfig {
            min_report_length: Some(4),
            ..SearchConfig::new(d, 2, CodeKind::Coil)
        };
        let mut keys = BTreeSet::new();
        direct_search(&cfg, &mut |c| {
            if keys.insert(canonical_circuit(c.seq()).unwrap()) {
                ok &= classify_inversion(&c).unwrap().invertible;
            }
        })
        .unwrap();
        classes += keys.len();
    }
    let (_, five) = coils_at_max(5, PruneLevel::Subsequence);
    let kinds: Vec<(bool, InversionClass)> = five
        .iter()
        .map(|c| (is_natural_up_to_rotation(c), classify_inversion(c).unwrap()))
        .collect();
    let natural: Vec<_> = kinds.iter().filter(|(n, _)| *n).collect();
    let others: Vec<_> = kinds.iter().filter(|(n, _)| !*n).collect();
    let vertex_only = others.iter().filter(|(_, c)| c.vertex_fixed && !c.change_fixed).count();
    let change_only = others.iter().filter(|(_, c)| c.change_fixed && !c.vertex_fixed).count();
    ok &= natural.len() == 1 && natural[0].1.vertex_fixed && vertex_only == 1 && change_only == 1;
    let natural_class = natural.first().map(|(_, c)| c.to_string()).unwrap_or_default();

    let (_, six) = coils_at_max(6, PruneLevel::Subsequence);
    let invertible6 = six.iter().filter(|c| classify_inversion(c).unwrap().invertible).count();
    ok &= invertible6 == 1;
    let msg = format!(
        "{classes} coil classes with d<=5 all invertible; N=14: natural [{natural_class}], \
         {vertex_only} vertex-fixed, {change_only} change-fixed (the natural coil's odd half turn \
         also gives it a change-fixed alignment); {invertible6} of {} maximal 6-coils invertible",
        six.len()
    );
    if ok {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn is_natural_up_to_rotation(c: &Code) -> bool {
    // c_{i+N/2} = c_i is invariant under rotation, so one presentation suffices.
    is_natural(c.seq())
}

fn criterion_4() -> Status {
    let perm = Permutation::parse_one_line("345201").unwrap();
    let s = derive_skeleton(&perm, Vertex::parse_bits("011000").unwrap(), 2, SkeletonPolicy::Default).unwrap();
    let leaps: Vec<String> = s
        .leaps()
        .iter()
        .map(|&l| Vertex::new(l, 6).unwrap().to_string())
        .collect();
    let want = ["011000", "000011", "110000", "000110", "101000", "000101"];
    let chain_ok = s.period() == 6 && leaps == want;

    let all = SearchLimits {
        exhaustive: true,
        ..Default::default()
    };
    let (found, _) = search_initial_vec(&s, 2, &all);
    let n24 = found
        .iter()
        .any(|c| c.code.seq().to_string() == "012034532012534512014534" && c.initial.changes() == [0, 1, 2, 0]);

    let t = Permutation::parse_cycles("(24)", 6).unwrap();
    let ts = derive_skeleton(&t, Vertex::parse_bits("111011").unwrap(), 2, SkeletonPolicy::Default).unwrap();
    let (found, _) = search_initial_vec(&ts, 2, &all);
    let target = canonical_circuit(&parse_sequence("0120314025312 0140312045314", 6).unwrap()).unwrap();
    let n26 = ts.period() == 2
        && found
            .iter()
            .any(|c| c.len() == 26 && canonical_circuit(c.code.seq()).unwrap() == target);
    let msg = format!(
        "leap chain P={} {}; N=24 coil {}; transposition P={} N=26 coil {}",
        s.period(),
        if chain_ok { "matches" } else { "differs" },
        if n24 { "found" } else { "missing" },
        ts.period(),
        if n26 { "found" } else { "missing" }
    );
    if chain_ok && n24 && n26 {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn criterion_5() -> Status {
    let t = Instant::now();
    let cfg = PermutedSearch {
        min_period: 12,
        ..PermutedSearch::new(9, 2)
    };
    let (codes, stats) = cfg.run_parallel();
    let best = codes.iter().max_by_key(|c| c.len());
    let longest = best.map_or(0, |c| c.len());
    let hit = codes.iter().find(|c| c.len() == 180);
    let msg = format!(
        "longest {longest}{}; {} nodes, complete={}, {:.2?}",
        hit.map(|c| format!(" (length 180 at perm {} P={})", c.perm.cycle_notation(), c.period))
            .unwrap_or_default(),
        stats.nodes,
        stats.complete,
        t.elapsed()
    );
    if hit.is_some() && t.elapsed().as_secs() < 3600 {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn criterion_6() -> Status {
    let mut ok = true;
    for d in 2..=13 {
        let s = construct_special(SpecialKind::SpreadD, d).unwrap();
        ok &= s.len() == 2 * d && verify_spread(CodeKind::Coil, d, s.code.seq()).unwrap().is_valid();
        if d >= 3 {
            let n = construct_special(SpecialKind::NeighborsCoil, d).unwrap();
            ok &= verify_spread(CodeKind::Coil, 2, n.code.seq()).unwrap().is_valid();
            let start = Vertex::unit(0, d).unwrap();
            let on: BTreeSet<u64> = circuit_codes::walk(start, n.code.seq())
                .unwrap()
                .iter()
                .map(|v| v.bits())
                .collect();
            ok &= (0..d).all(|i| on.contains(&(1 << i)));
        }
    }
    let perm = Permutation::rotation(5);
    let s = derive_skeleton(&perm, Vertex::parse_bits("11010").unwrap(), 2, SkeletonPolicy::Default).unwrap();
    let mut n10 = false;
    let limits = SearchLimits {
        max_initial_len: Some(3),
        ..Default::default()
    };
    search_truncated(&s, 2, &limits, &mut |c| {
        if c.initial.changes() == [1, 0, 3] && c.truncation.is_some() && c.len() == 10 {
            n10 |= verify_spread(CodeKind::Coil, 2, c.code.seq()).unwrap().is_valid();
        }
    });
    let msg = format!(
        "spread_d and neighbors_coil for d=2..13 {}; truncated (1,0,3) example {}",
        if ok { "verify" } else { "fail" },
        if n10 { "gives N=10" } else { "missing" }
    );
    if ok && n10 {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn criterion_7() -> Status {
    if !slow_enabled() {
        return Status::Skip("optional slow run; the corpus N=94 natural coil (criterion 1) stands in".into());
    }
    let t = Instant::now();
    let (found, stats) = search_natural_vec(8, 2, &SearchLimits::default());
    let longest = found.iter().map(|c| c.len()).max().unwrap_or(0);
    let msg = format!("longest natural 8-coil {longest}, complete={}, {:.2?}", stats.complete, t.elapsed());
    if longest == 94 {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn all_snakes(d: usize) -> Vec<Code> {
    fn go(ch: &mut SpreadChecker, out: &mut Vec<Code>) {
        if !ch.is_empty() {
            out.push(Code::new(CodeKind::Snake, 2, ch.sequence()).unwrap());
        }
        for c in 0..ch.dim() as u8 {
            if ch.push(c).unwrap() {
                go(ch, out);
            }
            ch.pop().unwrap();
        }
    }
    let mut ch = SpreadChecker::new(CodeKind::Snake, d, 2).unwrap();
    let mut out = Vec::new();
    go(&mut ch, &mut out);
    out
}

fn criterion_8() -> Status {
    let d = 2;
    let pool = all_snakes(d);
    let mut pairs = 0;
    let mut ok = true;
    for b in &pool {
        for c in &pool {
            for target in [CodeKind::Snake, CodeKind::Coil] {
                pairs += 1;
                let task = JoinTask::new(b.clone(), c.clone(), target).unwrap();
                let (found, _) = join_vec(&task, &JoinLimits::default());
                let got: BTreeSet<String> = found.iter().map(|r| r.code.seq().to_string()).collect();
                let mut want = BTreeSet::new();
                for map in [[0u8, 1], [1, 0]] {
                    let sigma = Permutation::from_one_line(map.to_vec()).unwrap();
                    let mut ch: Vec<u8> = b.seq().changes().to_vec();
                    ch.push(d as u8);
                    ch.extend(c.seq().changes().iter().map(|&x| sigma.apply(x)));
                    if target == CodeKind::Coil {
                        ch.push(d as u8);
                    }
                    let seq = TransitionSequence::new(d + 1, ch).unwrap();
                    if verify_spread(target, 2, &seq).unwrap().is_valid() {
                        want.insert(seq.to_string());
                    }
                }
                ok &= got == want && got.len() == found.len();
            }
        }
    }
    let msg = format!("{} snakes, {pairs} (pair, target) joins match brute force over 2! permutations", pool.len());
    if ok {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn random_coil(raw: &[u8], rotation: usize, reverse: bool, perm: &[u8]) -> (TransitionSequence, TransitionSequence) {
    let d = perm.len();
    let mut changes = raw.to_vec();
    changes.extend_from_slice(raw);
    let base = TransitionSequence::new(d, changes).unwrap();
    let mut other = base.rotated(rotation % base.len());
    if reverse {
        other = other.reversed();
    }
    let sigma = Permutation::from_one_line(perm.to_vec()).unwrap();
    (base, other.permuted(&sigma).unwrap())
}

fn criterion_9() -> Status {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let strat = (2usize..=7).prop_flat_map(|d| {
        (
            prop::collection::vec(0..d as u8, 1..20),
            0usize..40,
            any::<bool>(),
            Just((0..d as u8).collect::<Vec<u8>>()).prop_shuffle(),
        )
    });
    let r = runner.run(&strat, |(raw, rot, rev, perm)| {
        let (a, b) = random_coil(&raw, rot, rev, &perm);
        prop_assert_eq!(canonical_circuit(&a).unwrap(), canonical_circuit(&b).unwrap());
        prop_assert_eq!(canonical_path(&a), canonical_path(&a.reversed().permuted(&Permutation::from_one_line(perm.clone()).unwrap()).unwrap()));
        Ok(())
    });
    ok &= r.is_ok();
    notes.push(format!("canonical invariance x10000: {}", verdict(&r)));

    let mut runner = TestRunner::new(Config {
        cases: 2_000,
        failure_persistence: None,
        ..Config::default()
    });
    let strat = (2usize..=6, 1usize..=4).prop_flat_map(|(d, k)| (Just(d), Just(k), prop::collection::vec(0..d as u8, 1..40)));
    let r = runner.run(&strat, |(d, k, changes)| {
        let mut snake = SpreadChecker::new(CodeKind::Snake, d, k).unwrap();
        let mut coil = SpreadChecker::new(CodeKind::Coil, d, k).unwrap();
        for (i, &c) in changes.iter().enumerate() {
            let s_ok = snake.push(c).unwrap();
            coil.push(c).unwrap();
            let prefix = TransitionSequence::new(d, changes[..=i].to_vec()).unwrap();
            prop_assert_eq!(s_ok, verify_spread(CodeKind::Snake, k, &prefix).unwrap().is_valid());
            prop_assert_eq!(coil.close(), verify_spread(CodeKind::Coil, k, &prefix).unwrap().is_valid());
        }
        Ok(())
    });
    ok &= r.is_ok();
    notes.push(format!("incremental checker = pairwise x2000: {}", verdict(&r)));

    let mut skeletons = 0;
    let mut skel_ok = true;
    for d in 2..=7 {
        for partition in circuit_codes::permuted::partitions(d, circuit_codes::permuted::PartitionOrder::ReverseLex) {
            let perm = circuit_codes::permuted::representative(&partition);
            for bits in 1..1u64 << d {
                let Ok(s) = derive_skeleton(&perm, Vertex::new(bits, d).unwrap(), 2, SkeletonPolicy::Default) else {
                    continue;
                };
                skeletons += 1;
                let xor = s.leaps().iter().fold(0, |a, &l| a ^ l);
                let distinct: BTreeSet<u64> = s.starts().iter().copied().collect();
                let rule = s.leaps().windows(2).all(|w| perm.apply_bits(w[0]) == w[1]);
                skel_ok &= xor == 0 && distinct.len() == s.period() && s.starts().len() == s.period() && rule;
            }
        }
    }
    ok &= skel_ok;
    notes.push(format!(
        "skeleton invariants over {skeletons} skeletons: {}",
        if skel_ok { "ok" } else { "broken" }
    ));

    let mut runner = TestRunner::new(Config {
        cases: 5_000,
        failure_persistence: None,
        ..Config::default()
    });
    let strat = (prop::collection::vec(0u8..5, 1..16), prop::collection::vec(0u8..5, 1..8));
    let r = runner.run(&strat, |(raw, ext)| {
        if !prune_check(&raw) {
            let mut longer = raw.clone();
            longer.extend(ext);
            prop_assert!(!prune_check(&longer));
        }
        Ok(())
    });
    ok &= r.is_ok();
    notes.push(format!("prune monotonicity x5000: {}", verdict(&r)));

    let mut complete = true;
    for d in 2..=5 {
        let (a, ca) = coils_at_max(d, PruneLevel::Subsequence);
        let (b, cb) = coils_at_max(d, PruneLevel::None);
        let ka: BTreeSet<_> = ca.iter().map(|c| canonical_circuit(c.seq()).unwrap()).collect();
        let kb: BTreeSet<_> = cb.iter().map(|c| canonical_circuit(c.seq()).unwrap()).collect();
        complete &= a == b && ka == kb;
    }
    let (_, par) = direct_search_parallel(&SearchConfig::new(5, 2, CodeKind::Coil), 4).unwrap();
    complete &= par.max_length == 14 && par.class_count() == 3;
    ok &= complete;
    notes.push(format!(
        "pruned = unpruned classes for d<=5: {}",
        if complete { "ok" } else { "differs" }
    ));

    let msg = notes.join("; ");
    if ok {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn verdict<T>(r: &Result<(), proptest::test_runner::TestError<T>>) -> String
where
    T: std::fmt::Debug,
{
    match r {
        Ok(()) => "ok".into(),
        Err(e) => format!("failed ({e})"),
    }
}

fn criterion_10() -> Status {
    if !slow_enabled() {
        return Status::Skip("optional extended run (d=7 direct search)".into());
    }
    let t = Instant::now();
    let (_, s) = direct_search_parallel(&SearchConfig::new(7, 2, CodeKind::Coil), 8).unwrap();
    let classes: Vec<InversionClass> = s.maximal.values().map(|c| classify_inversion(c).unwrap()).collect();
    let invertible = classes.iter().filter(|c| c.invertible).count();
    let vertex = classes.iter().filter(|c| c.vertex_fixed).count();
    let msg = format!(
        "max {}, {} classes, {invertible} invertible, {vertex} with a vertex-fixed inversion, {:.2?}",
        s.max_length,
        s.class_count(),
        t.elapsed()
    );
    if s.max_length == 48 && s.class_count() == 758 && invertible == 37 && vertex == 36 {
        Status::Pass(msg)
    } else {
        Status::Fail(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Status); 10] = [
        ("corpus verification", criterion_1),
        ("exhaustive small-d direct search", criterion_2),
        ("inversion classification", criterion_3),
        ("permuted worked examples", criterion_4),
        ("permuted 9-coil search, P>=12", criterion_5),
        ("special constructions", criterion_6),
        ("natural 8-coil search", criterion_7),
        ("join oracle", criterion_8),
        ("property suites", criterion_9),
        ("d=7 extended run", criterion_10),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, msg) = match run() {
            Status::Pass(m) => ("PASS", m),
            Status::Fail(m) => {
                unexpected += 1;
                ("FAIL", m)
            }
            Status::KnownFail(m) => ("FAIL", format!("{m} [known, see decisions notes]")),
            Status::Skip(m) => ("SKIP", m),
        };
        println!("criterion {:>2} {tag}: {name}: {msg}", i + 1);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
