//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the report is always shown.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use congestion::catalog;
use congestion::dynamics::{default_max_steps, greedy_run};
use congestion::form::{for_each_subset_free_family, random_tree_form_with, resource_name, TreeFormParams};
use congestion::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Payoffs are exact rationals; every comparison below is exact.
const TOLERANCE: i64 = 0;

const TRIALS: u64 = 240;
const MAX_TRIAL_RESOURCES: usize = 10;
const MAX_TRIAL_STRATEGIES: usize = 8;
const EXHAUSTIVE_START_LIMIT: usize = 4096;
const SAMPLED_STARTS: usize = 512;
const RANDOM_NON_TR_FORMS: usize = 150;
const POTENTIAL_TRIPLES: usize = 1500;

const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const SUFFICIENCY_BUDGET: Duration = Duration::from_secs(60);
const NECESSITY_BUDGET: Duration = Duration::from_secs(120);
const RECOGNITION_BUDGET: Duration = Duration::from_secs(60);
const POTENTIAL_BUDGET: Duration = Duration::from_secs(10);
const STRONG_BUDGET: Duration = Duration::from_secs(60);

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn labels(game: &Game, set: &BTreeSet<CanonicalProfile>) -> Vec<String> {
    set.iter().map(|p| p.display(game.form())).collect()
}

fn profile(game: &Game, names: &[&str]) -> StrategyProfile {
    StrategyProfile(names.iter().map(|n| game.form().find_strategy(n).expect("strategy name")).collect())
}

fn example_sets(game: &Game, greedy: &[&str], nash: &[&str], class: Classification) -> Verdict {
    let report = compare(game, false).expect("compare");
    let z = labels(game, &report.greedy);
    let ne = labels(game, &report.nash);
    let mut want_z: Vec<String> = greedy.iter().map(|s| s.to_string()).collect();
    let mut want_ne: Vec<String> = nash.iter().map(|s| s.to_string()).collect();
    want_z.sort_by_key(|s| {
        let names: Vec<&str> = s.trim_matches(['[', ']']).split(", ").collect();
        profile(game, &names).canonical()
    });
    want_ne.sort_by_key(|s| {
        let names: Vec<&str> = s.trim_matches(['[', ']']).split(", ").collect();
        profile(game, &names).canonical()
    });
    let pass = z == want_z && ne == want_ne && report.classification == class;
    check(pass, format!("Z = {z:?}, NE = {ne:?}, {}", report.classification))
}

fn criterion_1() -> Verdict {
    let game = catalog::example1();
    let sets = example_sets(&game, &["[AB, AC, BC]"], &["[AC, AC, BC]"], Classification::Disjoint);
    let before = game.utility(&profile(&game, &["AB", "AC", "BC"]), 0).unwrap();
    let after = game.utility(&profile(&game, &["AC", "AC", "BC"]), 0).unwrap();
    let trace = response_dynamics(
        &game,
        &profile(&game, &["AB", "AC", "BC"]),
        ResponseMode::BestResponse,
        MoverPolicy::LowestIndex,
        default_max_steps(&game),
    )
    .unwrap();
    let step_ok = trace.steps.len() == 1
        && trace.steps[0].utility_before == r(12)
        && trace.steps[0].utility_after == r(13)
        && trace.converged;
    check(
        sets.pass && before == r(12) && after == r(13) && step_ok,
        format!("{}; deviation AB->AC {before} -> {after}", sets.detail),
    )
}

fn criterion_2() -> Verdict {
    example_sets(&catalog::example2(), &["[AC, BD]"], &["[AC, BD]", "[AD, BC]"], Classification::GreedyStrictSubset)
}

fn criterion_3() -> Verdict {
    example_sets(&catalog::example3(), &["[AB, BC]", "[AC, BC]"], &["[AB, BC]"], Classification::NashStrictSubset)
}

fn criterion_4() -> Verdict {
    let game = catalog::example4();
    let sets = example_sets(&game, &["[AB, E]", "[AB, AC]"], &["[AB, E]", "[AC, DB]"], Classification::Overlap);
    // bimatrix as printed in the paper, rows and columns AB, AC, DB, E
    let paper: [[(i64, i64); 4]; 4] = [
        [(-15, -15), (-6, -10), (-11, -12), (-2, -10)],
        [(-10, -6), (-105, -105), (-6, -3), (-6, -10)],
        [(-12, -11), (-3, -6), (-110, -110), (-3, -10)],
        [(-10, -2), (-10, -6), (-10, -3), (-100, -100)],
    ];
    let computed = game.bimatrix().unwrap();
    let order: Vec<String> = (0..4).map(|s| game.form().strategy_label(s)).collect();
    let mut mismatches = 0;
    for i in 0..4 {
        for j in 0..4 {
            let (u, v) = &computed[i][j];
            if *u != r(paper[i][j].0) || *v != r(paper[i][j].1) {
                mismatches += 1;
            }
        }
    }
    check(
        sets.pass && order == ["AB", "AC", "DB", "E"] && mismatches == 0,
        format!("{}; bimatrix mismatches {mismatches}/16", sets.detail),
    )
}

fn criterion_5() -> Verdict {
    let form = catalog::figure1_form();
    let bad = find_bad_configuration(&form);
    let mut tree = build_r_tree(&form).expect("figure 1 tree");
    let induced = induced_strategies(&tree).unwrap();
    let got: BTreeSet<String> = (0..induced.num_strategies()).map(|s| induced.strategy_label(s)).collect();
    let want: BTreeSet<String> = ["ABG", "AH", "CI", "CFJ", "DEK", "DEL"].iter().map(|s| s.to_string()).collect();
    let f = form.resource_index("F").unwrap();
    let j = form.resource_index("J").unwrap();
    tree.swap_resources(f, j).unwrap();
    let swapped = verify_representation(&form, &tree);
    check(
        bad.is_none() && got == want && swapped,
        format!("bad configuration {bad:?}, induced {got:?}, F/J swap verifies: {swapped}"),
    )
}

/// One trial game over a random tree-representable form.
struct Trial {
    seed: u64,
    game: Game,
}

fn random_decreasing(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    loop {
        let mut row: Vec<Rational> = (0..len)
            .map(|_| Rational::new(BigInt::from(rng.gen_range(-60..=60)), BigInt::from(rng.gen_range(1..=6))))
            .collect();
        row.sort_by(|a, b| b.cmp(a));
        if row.windows(2).all(|w| w[0] > w[1]) {
            return row;
        }
    }
}

fn trial_set() -> Vec<Trial> {
    (0..TRIALS)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0000 + seed);
            let params = TreeFormParams {
                resource_budget: MAX_TRIAL_RESOURCES,
                depth_budget: rng.gen_range(1..=4),
                max_strategies: MAX_TRIAL_STRATEGIES,
            };
            let form = random_tree_form_with(seed, params);
            let players = 2 + (seed % 3) as usize;
            let rows = (0..form.num_resources()).map(|_| random_decreasing(&mut rng, players)).collect();
            Trial { seed, game: Game::new(form, players, rows).expect("trial game") }
        })
        .collect()
}

fn criterion_6(trials: &[Trial]) -> Verdict {
    let mut equal = 0;
    let mut failures = Vec::new();
    let mut sizes = (0, 0);
    let mut histogram = [0usize; MAX_TRIAL_STRATEGIES + 1];
    for t in trials {
        let f = t.game.form();
        histogram[f.num_strategies()] += 1;
        sizes.0 = sizes.0.max(f.num_resources());
        sizes.1 = sizes.1.max(f.num_strategies());
        let tr = is_tree_representable(f) && f.is_subset_free().is_none() && t.game.is_monotone();
        let report = compare(&t.game, false).unwrap();
        if tr && report.classification == Classification::Equal {
            equal += 1;
        } else {
            failures.push(t.seed);
        }
    }
    check(
        failures.is_empty() && trials.len() >= 200 && sizes.0 <= MAX_TRIAL_RESOURCES && sizes.1 <= MAX_TRIAL_STRATEGIES,
        format!(
            "{equal}/{} trials EQUAL (max |R| {}, max |Σ| {}, trials by |Σ| {:?}); failing seeds {failures:?}",
            trials.len(),
            sizes.0,
            sizes.1,
            &histogram[1..]
        ),
    )
}

fn random_non_tr_form(rng: &mut ChaCha8Rng) -> GameForm {
    loop {
        let resources = rng.gen_range(4..=7);
        let count = rng.gen_range(3..=6);
        let full = (1u64 << resources) - 1;
        let mut masks: Vec<u64> = Vec::new();
        while masks.len() < count {
            let m = rng.gen_range(1..=full);
            if !masks.contains(&m) {
                masks.push(m);
            }
        }
        let strategies: Vec<Strategy> = masks.iter().map(|&m| Strategy::from_mask(m)).collect();
        let form = GameForm::from_strategies((0..resources).map(resource_name).collect(), &strategies).unwrap();
        if form.is_subset_free().is_none() && !is_tree_representable(&form) {
            return form;
        }
    }
}

fn small_forms() -> Vec<GameForm> {
    let mut out = Vec::new();
    for resources in 1..=5 {
        for_each_subset_free_family(resources, 5, |masks| {
            // families over fewer resources reappear with a larger universe; keep each once
            if masks.iter().fold(0, |acc, m| acc | m) >> (resources - 1) & 1 == 1 {
                let strategies: Vec<Strategy> = masks.iter().map(|&m| Strategy::from_mask(m)).collect();
                out.push(GameForm::from_strategies((0..resources).map(resource_name).collect(), &strategies).unwrap());
            }
        });
    }
    out
}

fn criterion_7(small: &[GameForm]) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7);
    let random: Vec<GameForm> = (0..RANDOM_NON_TR_FORMS).map(|_| random_non_tr_form(&mut rng)).collect();
    let mut cases: BTreeMap<&str, usize> = BTreeMap::new();
    let (mut exhaustive, mut validated, mut failed) = (0, 0, Vec::new());
    let targets = small.iter().filter(|f| !is_tree_representable(f)).inspect(|_| exhaustive += 1).chain(random.iter());
    for form in targets {
        match synthesize_counterexample(form) {
            Ok(cert) if validate_certificate(&cert) && cert.game.is_monotone() => {
                validated += 1;
                *cases.entry(cert.case.as_str()).or_default() += 1;
            }
            Ok(_) => failed.push(format!("{form}: certificate did not validate")),
            Err(e) => failed.push(format!("{form}: {e}")),
        }
    }
    let total = exhaustive + random.len();
    check(
        failed.is_empty() && random.len() >= 100,
        format!(
            "{validated}/{total} validated ({exhaustive} exhaustive, {} random); cases {cases:?}; failures {:?}",
            random.len(),
            failed.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_8(small: &[GameForm]) -> Verdict {
    let (mut agree, mut representable, mut disagreements) = (0, 0, Vec::new());
    for form in small {
        let bad = find_bad_configuration(form);
        let built = build_r_tree(form);
        let ok = match (&bad, &built) {
            (None, Ok(tree)) => verify_representation(form, tree),
            (Some(_), Err(Error::NotRepresentable(_))) => true,
            _ => false,
        };
        if ok {
            agree += 1;
            representable += usize::from(bad.is_none());
        } else {
            disagreements.push(form.to_string());
        }
    }
    check(
        disagreements.is_empty(),
        format!(
            "{agree}/{} forms agree ({representable} representable); disagreements {:?}",
            small.len(),
            disagreements.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9);
    let mut mismatches = 0;
    for _ in 0..POTENTIAL_TRIPLES {
        let resources = rng.gen_range(1..=6);
        let count = rng.gen_range(1..=5);
        let full = (1u64 << resources) - 1;
        let mut masks: Vec<u64> = Vec::new();
        while masks.len() < count.min(full as usize) {
            let m = rng.gen_range(1..=full);
            if !masks.contains(&m) {
                masks.push(m);
            }
        }
        let strategies: Vec<Strategy> = masks.iter().map(|&m| Strategy::from_mask(m)).collect();
        let form = GameForm::from_strategies((0..resources).map(resource_name).collect(), &strategies).unwrap();
        let players = rng.gen_range(1..=5);
        let rows = (0..resources).map(|_| random_decreasing(&mut rng, players)).collect();
        let game = Game::new(form, players, rows).unwrap();
        let m = game.form().num_strategies();
        let start = StrategyProfile((0..players).map(|_| rng.gen_range(0..m)).collect());
        let player = rng.gen_range(0..players);
        let moved = start.with_choice(player, rng.gen_range(0..m));
        let dphi = game.rosenthal_potential(&moved).unwrap() - game.rosenthal_potential(&start).unwrap();
        let du = game.utility(&moved, player).unwrap() - game.utility(&start, player).unwrap();
        if dphi != du {
            mismatches += 1;
        }
    }
    check(mismatches == TOLERANCE, format!("{mismatches} mismatches in {POTENTIAL_TRIPLES} triples"))
}

fn criterion_10(trials: &[Trial]) -> Verdict {
    let (mut checked, mut errors) = (0, Vec::new());
    for t in trials {
        for ne in enumerate_nash(&t.game) {
            let ne = ne.to_profile();
            checked += 1;
            match extract_greedy_order(&t.game, &ne) {
                Ok((order, tie)) => {
                    let rebuilt = greedy_run(&t.game, &order, &tie).map(|p| p.canonical());
                    if rebuilt.as_ref() != Ok(&ne.canonical()) {
                        errors.push(format!("seed {}: replay differs", t.seed));
                    }
                }
                Err(e) => errors.push(format!("seed {}: {e}", t.seed)),
            }
        }
    }
    check(
        errors.is_empty() && checked > 0,
        format!("{checked} equilibria reconstructed, {} errors {:?}", errors.len(), errors.iter().take(3).collect::<Vec<_>>()),
    )
}

fn starts(game: &Game, rng: &mut ChaCha8Rng) -> (Vec<StrategyProfile>, bool) {
    let m = game.form().num_strategies();
    let n = game.players();
    let total = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    if total <= EXHAUSTIVE_START_LIMIT {
        let all = (0..total)
            .map(|mut code| {
                StrategyProfile(
                    (0..n)
                        .map(|_| {
                            let s = code % m;
                            code /= m;
                            s
                        })
                        .collect(),
                )
            })
            .collect();
        (all, true)
    } else {
        let sampled = (0..SAMPLED_STARTS).map(|_| StrategyProfile((0..n).map(|_| rng.gen_range(0..m)).collect())).collect();
        (sampled, false)
    }
}

fn criterion_11(trials: &[Trial]) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let (mut traces, mut unconverged, mut flagged, mut longest, mut sampled) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut flagged_seeds = BTreeSet::new();
    for t in trials {
        let n = t.game.players();
        let (list, exhaustive) = starts(&t.game, &mut rng);
        sampled += usize::from(!exhaustive);
        for (k, start) in list.iter().enumerate() {
            for policy in [MoverPolicy::LowestIndex, MoverPolicy::HighestGain, MoverPolicy::SeededRandom(k as u64)] {
                let trace = response_dynamics(&t.game, start, ResponseMode::BestResponse, policy, default_max_steps(&t.game))
                    .unwrap();
                traces += 1;
                longest = longest.max(trace.steps.len());
                if !trace.converged || is_nash(&t.game, &trace.terminal).unwrap().is_some() {
                    unconverged += 1;
                } else if trace.steps.len() > n {
                    flagged += 1;
                    flagged_seeds.insert(t.seed);
                }
            }
        }
    }
    check(
        unconverged == 0,
        format!(
            "{traces} traces ({sampled} games sampled), {unconverged} unconverged, longest {longest} steps; \
             flagged (more than N steps): {flagged} traces in {} games",
            flagged_seeds.len()
        ),
    )
}

fn criterion_12(trials: &[Trial]) -> Verdict {
    let (mut checked, mut mismatched) = (0, Vec::new());
    for t in trials.iter().filter(|t| t.game.players() <= 3) {
        let strong = enumerate_strong(&t.game).unwrap();
        let nash = enumerate_nash(&t.game);
        let greedy = greedy_enumerate(&t.game);
        checked += 1;
        if strong != nash || nash != greedy {
            mismatched.push(t.seed);
        }
    }
    check(mismatched.is_empty() && checked > 0, format!("{checked} games with N ≤ 3; mismatched seeds {mismatched:?}"))
}

fn timed(results: &mut Vec<bool>, id: u8, name: &str, budget: Option<Duration>, run: impl FnOnce() -> Verdict) {
    let started = Instant::now();
    let verdict = run();
    let elapsed = started.elapsed();
    let in_time = budget.is_none_or(|b| elapsed < b);
    let pass = verdict.pass && in_time;
    let budget_note = budget.map_or(String::new(), |b| format!(" / {:.0} s", b.as_secs_f64()));
    println!(
        "C{id:<2} {} {name} [{:.2} s{budget_note}] {}{}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        verdict.detail,
        if in_time { "" } else { " (over time budget)" }
    );
    results.push(pass);
}

fn main() {
    let mut results = Vec::new();
    timed(&mut results, 1, "example 1 reproduction", Some(EXAMPLE_BUDGET), criterion_1);
    timed(&mut results, 2, "example 2 reproduction", Some(EXAMPLE_BUDGET), criterion_2);
    timed(&mut results, 3, "example 3 reproduction", Some(EXAMPLE_BUDGET), criterion_3);
    timed(&mut results, 4, "example 4 reproduction", Some(EXAMPLE_BUDGET), criterion_4);
    timed(&mut results, 5, "twelve-resource tree form", Some(EXAMPLE_BUDGET), criterion_5);

    let started = Instant::now();
    let trials = trial_set();
    let generation = started.elapsed();
    timed(&mut results, 6, "sufficiency on tree forms", Some(SUFFICIENCY_BUDGET.saturating_sub(generation)), || {
        criterion_6(&trials)
    });

    let small = small_forms();
    timed(&mut results, 7, "necessity by synthesis", Some(NECESSITY_BUDGET), || criterion_7(&small));
    timed(&mut results, 8, "bad configurations vs construction", Some(RECOGNITION_BUDGET), || criterion_8(&small));
    timed(&mut results, 9, "potential identity", Some(POTENTIAL_BUDGET), criterion_9);
    timed(&mut results, 10, "greedy order from equilibria", Some(SUFFICIENCY_BUDGET), || criterion_10(&trials));
    timed(&mut results, 11, "best-response steps vs N", None, || criterion_11(&trials));
    timed(&mut results, 12, "strong equilibria coincide", Some(STRONG_BUDGET), || criterion_12(&trials));

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
