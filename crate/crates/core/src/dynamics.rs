//! Greedy sequential arrival, enumeration of all greedy profiles, and
//! best/better-response dynamics.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equilibrium::is_nash;
use crate::error::{Error, Result};
use crate::form::is_tree_representable;
use crate::model::{CanonicalProfile, CongestionGame, CongestionVector, StrategyProfile};
use crate::scalar::Payoff;

/// `order[k]` is the player who arrives k-th.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrivalOrder(pub Vec<usize>);

impl ArrivalOrder {
    pub fn identity(players: usize) -> Self {
        ArrivalOrder((0..players).collect())
    }

    pub fn players(&self) -> &[usize] {
        &self.0
    }

    fn validate(&self, players: usize) -> Result<()> {
        if self.0.len() != players {
            return Err(Error::InvalidOrder(format!("order has {} entries for {players} players", self.0.len())));
        }
        let mut seen = vec![false; players];
        for &p in &self.0 {
            if p >= players || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidOrder(format!("{:?} is not a permutation", self.0)));
            }
        }
        Ok(())
    }
}

/// How an arriving player picks among tied best responses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TieBreak {
    /// Lowest strategy index in the best-response set.
    #[default]
    LowestIndex,
    /// `choices[k]` is the strategy of the k-th arrival; it must be a best response.
    Explicit(Vec<usize>),
}

/// Players arrive in `order`; each picks a best response to those already present.
pub fn greedy_run<T: Payoff>(game: &CongestionGame<T>, order: &ArrivalOrder, tie: &TieBreak) -> Result<StrategyProfile> {
    let n = game.players();
    order.validate(n)?;
    if let TieBreak::Explicit(choices) = tie {
        if choices.len() != n {
            return Err(Error::InvalidOrder(format!("tie sequence has {} entries for {n} players", choices.len())));
        }
    }
    let form = game.form();
    let mut counts = CongestionVector::zeros(form.num_resources());
    let mut choices = vec![0usize; n];
    for (k, &player) in order.players().iter().enumerate() {
        let best = game.best_responses(counts.counts());
        let pick = match tie {
            TieBreak::LowestIndex => best[0],
            TieBreak::Explicit(seq) => {
                let s = seq[k];
                if best.binary_search(&s).is_err() {
                    return Err(Error::InvalidTie { position: k, strategy: s });
                }
                s
            }
        };
        choices[player] = pick;
        counts.add(form.strategy(pick));
    }
    Ok(StrategyProfile(choices))
}

/// All greedy profiles, canonically.
pub fn greedy_enumerate<T: Payoff>(game: &CongestionGame<T>) -> BTreeSet<CanonicalProfile> {
    greedy_certificates(game).into_keys().collect()
}

/// All greedy profiles, each with one arrival sequence of strategies that
/// produces it (player k arrives k-th and picks `sequence[k]`).
pub fn greedy_certificates<T: Payoff>(game: &CongestionGame<T>) -> BTreeMap<CanonicalProfile, Vec<usize>> {
    let mut search = GreedySearch {
        game,
        counts: CongestionVector::zeros(game.form().num_resources()),
        sequence: Vec::with_capacity(game.players()),
        visited: HashSet::new(),
        found: BTreeMap::new(),
    };
    search.descend();
    search.found
}

struct GreedySearch<'a, T> {
    game: &'a CongestionGame<T>,
    counts: CongestionVector,
    sequence: Vec<usize>,
    // The continuation depends only on the multiset chosen so far.
    visited: HashSet<Vec<usize>>,
    found: BTreeMap<CanonicalProfile, Vec<usize>>,
}

impl<T: Payoff> GreedySearch<'_, T> {
    fn descend(&mut self) {
        if self.sequence.len() == self.game.players() {
            let canonical = CanonicalProfile::from_multiset(self.sequence.clone());
            self.found.entry(canonical).or_insert_with(|| self.sequence.clone());
            return;
        }
        let mut key = self.sequence.clone();
        key.sort_unstable();
        if !self.visited.insert(key) {
            return;
        }
        for s in self.game.best_responses(self.counts.counts()) {
            let strategy = self.game.form().strategy(s);
            self.counts.add(strategy);
            self.sequence.push(s);
            self.descend();
            self.sequence.pop();
            self.counts.remove(strategy);
        }
    }
}

pub fn is_greedy_profile<T: Payoff>(game: &CongestionGame<T>, profile: &StrategyProfile) -> Result<bool> {
    game.validate_profile(profile)?;
    Ok(greedy_enumerate(game).contains(&profile.canonical()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResponseMode {
    BestResponse,
    BetterResponse,
}

/// Which unsatisfied player moves next, and (in better-response mode) where to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoverPolicy {
    /// Lowest-index unsatisfied player; better responses go to the lowest-index improving strategy.
    LowestIndex,
    /// Player with the largest available gain; moves to a best response.
    HighestGain,
    /// Uniformly random unsatisfied player and improving strategy.
    SeededRandom(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step<T> {
    pub player: usize,
    pub from: usize,
    pub to: usize,
    pub utility_before: T,
    pub utility_after: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsTrace<T> {
    pub steps: Vec<Step<T>>,
    pub terminal: StrategyProfile,
    pub converged: bool,
}

/// A player with improving moves: (player, current value, improving (strategy, value) pairs).
type Unsatisfied<T> = (usize, T, Vec<(usize, T)>);

/// Default step cap: `N · |Σ| · 10`.
pub fn default_max_steps<T: Payoff>(game: &CongestionGame<T>) -> usize {
    game.players() * game.form().num_strategies() * 10
}

/// Moves unsatisfied players one at a time until no one can improve or
/// `max_steps` moves have been made.
pub fn response_dynamics<T: Payoff>(
    game: &CongestionGame<T>,
    start: &StrategyProfile,
    mode: ResponseMode,
    policy: MoverPolicy,
    max_steps: usize,
) -> Result<DynamicsTrace<T>> {
    game.validate_profile(start)?;
    let form = game.form();
    let mut rng = match policy {
        MoverPolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut profile = start.clone();
    let mut counts = game.counts_of(profile.choices());
    let mut steps = Vec::new();
    loop {
        let mut unsatisfied: Vec<Unsatisfied<T>> = Vec::new();
        for player in 0..game.players() {
            let from = form.strategy(profile.0[player]);
            let current = game.held_value(from, counts.counts());
            let better: Vec<(usize, T)> = (0..form.num_strategies())
                .filter(|&t| t != profile.0[player])
                .map(|t| (t, game.switch_value(from, form.strategy(t), counts.counts())))
                .filter(|(_, v)| *v > current)
                .collect();
            if !better.is_empty() {
                unsatisfied.push((player, current, better));
            }
        }
        if unsatisfied.is_empty() {
            return Ok(DynamicsTrace { steps, terminal: profile, converged: true });
        }
        if steps.len() >= max_steps {
            return Ok(DynamicsTrace { steps, terminal: profile, converged: false });
        }

        let chosen = match policy {
            MoverPolicy::LowestIndex => 0,
            MoverPolicy::HighestGain => {
                let mut best = 0;
                for i in 1..unsatisfied.len() {
                    if gain_of(&unsatisfied[i]) > gain_of(&unsatisfied[best]) {
                        best = i;
                    }
                }
                best
            }
            MoverPolicy::SeededRandom(_) => rng.as_mut().unwrap().gen_range(0..unsatisfied.len()),
        };
        let (player, before, better) = unsatisfied.swap_remove(chosen);
        let (to, after) = match (mode, policy) {
            (ResponseMode::BetterResponse, MoverPolicy::LowestIndex) => better[0].clone(),
            (ResponseMode::BetterResponse, MoverPolicy::SeededRandom(_)) => {
                let i = rng.as_mut().unwrap().gen_range(0..better.len());
                better[i].clone()
            }
            _ => best_of(better),
        };
        let from = profile.0[player];
        counts.remove(form.strategy(from));
        counts.add(form.strategy(to));
        profile.0[player] = to;
        steps.push(Step { player, from, to, utility_before: before, utility_after: after });
    }
}

fn gain_of<T: Payoff>(entry: &Unsatisfied<T>) -> T {
    let top = entry.2.iter().map(|(_, v)| v).fold(None, |m: Option<&T>, v| match m {
        Some(m) if m >= v => Some(m),
        _ => Some(v),
    });
    top.expect("nonempty").clone() - entry.1.clone()
}

/// First (lowest index) strategy of maximal value.
fn best_of<T: Payoff>(options: Vec<(usize, T)>) -> (usize, T) {
    let mut iter = options.into_iter();
    let mut best = iter.next().expect("nonempty");
    for candidate in iter {
        if candidate.1 > best.1 {
            best = candidate;
        }
    }
    best
}

/// Recovers an arrival order and explicit tie choices that make
/// [`greedy_run`] reproduce `ne` (up to renaming).
///
/// Repeatedly removes a player of minimal utility among those remaining
/// (lowest index on ties); the arrival order is the removal order reversed.
/// On a tree-representable form of a monotone game every such prefix is an
/// equilibrium of the smaller game, so each arrival is a best response.
pub fn extract_greedy_order<T: Payoff>(
    game: &CongestionGame<T>,
    ne: &StrategyProfile,
) -> Result<(ArrivalOrder, TieBreak)> {
    game.validate_profile(ne)?;
    if !game.is_monotone() {
        return Err(Error::Precondition("game is not monotone".into()));
    }
    if let Some((s, t)) = game.form().is_subset_free() {
        return Err(Error::Precondition(format!(
            "form is not subset-free: {} ⊂ {}",
            game.form().strategy_label(s),
            game.form().strategy_label(t)
        )));
    }
    if !is_tree_representable(game.form()) {
        return Err(Error::Precondition("form is not tree representable".into()));
    }
    if is_nash(game, ne)?.is_some() {
        return Err(Error::Precondition("profile is not a Nash equilibrium".into()));
    }

    let form = game.form();
    let mut remaining: Vec<usize> = (0..game.players()).collect();
    let mut counts = game.counts_of(ne.choices());
    let mut peeled = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut pick = 0;
        let mut lowest = game.held_value(form.strategy(ne.0[remaining[0]]), counts.counts());
        for (i, &p) in remaining.iter().enumerate().skip(1) {
            let u = game.held_value(form.strategy(ne.0[p]), counts.counts());
            if u < lowest {
                lowest = u;
                pick = i;
            }
        }
        let player = remaining.remove(pick);
        counts.remove(form.strategy(ne.0[player]));
        peeled.push(player);
    }
    peeled.reverse();
    let choices: Vec<usize> = peeled.iter().map(|&p| ne.0[p]).collect();
    let order = ArrivalOrder(peeled);
    let tie = TieBreak::Explicit(choices);

    let rebuilt = match greedy_run(game, &order, &tie) {
        Ok(p) => p,
        Err(Error::InvalidTie { position, strategy }) => {
            return Err(Error::TheoremViolation(format!(
                "arrival {position} choosing {} is not a best response",
                form.strategy_label(strategy)
            )))
        }
        Err(e) => return Err(e),
    };
    if rebuilt.canonical() != ne.canonical() {
        return Err(Error::TheoremViolation("greedy reconstruction differs from the equilibrium".into()));
    }
    Ok((order, tie))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::equilibrium::enumerate_nash;
    use crate::form::random_tree_form;
    use crate::model::GameForm;
    use crate::Rational;

    fn labels(game: &crate::Game, set: &BTreeSet<CanonicalProfile>) -> Vec<String> {
        set.iter().map(|p| p.display(game.form())).collect()
    }

    fn prof(game: &crate::Game, l: &[&str]) -> StrategyProfile {
        StrategyProfile(l.iter().map(|s| game.form().find_strategy(s).unwrap()).collect())
    }

    #[test]
    fn example1_greedy_is_unique_for_every_order() {
        let g = catalog::example1();
        for order in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            let p = greedy_run(&g, &ArrivalOrder(order.to_vec()), &TieBreak::LowestIndex).unwrap();
            assert_eq!(p.canonical().display(g.form()), "[AB, AC, BC]");
        }
        assert_eq!(labels(&g, &greedy_enumerate(&g)), ["[AB, AC, BC]"]);
    }

    #[test]
    fn example2_and_3_runs() {
        let g = catalog::example2();
        let p = greedy_run(&g, &ArrivalOrder::identity(2), &TieBreak::LowestIndex).unwrap();
        assert_eq!(p, prof(&g, &["AC", "BD"]));

        let g = catalog::example3();
        let ac = g.form().find_strategy("AC").unwrap();
        let bc = g.form().find_strategy("BC").unwrap();
        let p = greedy_run(&g, &ArrivalOrder::identity(2), &TieBreak::Explicit(vec![ac, bc])).unwrap();
        assert_eq!(p, prof(&g, &["AC", "BC"]));
        let err = greedy_run(&g, &ArrivalOrder::identity(2), &TieBreak::Explicit(vec![bc, ac])).unwrap_err();
        assert_eq!(err, Error::InvalidTie { position: 0, strategy: bc });
        assert!(greedy_run(&g, &ArrivalOrder(vec![0, 0]), &TieBreak::LowestIndex).is_err());
    }

    #[test]
    fn enumerations_match_catalog() {
        let g = catalog::example3();
        assert_eq!(labels(&g, &greedy_enumerate(&g)), ["[AB, BC]", "[AC, BC]"]);
        let g = catalog::example4();
        assert_eq!(labels(&g, &greedy_enumerate(&g)), ["[AB, AC]", "[AB, E]"]);
    }

    #[test]
    fn membership() {
        let g = catalog::example1();
        assert!(is_greedy_profile(&g, &prof(&g, &["AB", "AC", "BC"])).unwrap());
        assert!(!is_greedy_profile(&g, &prof(&g, &["AC", "AC", "BC"])).unwrap());
        let g = catalog::example4();
        assert!(!is_greedy_profile(&g, &prof(&g, &["AC", "DB"])).unwrap());
    }

    #[test]
    fn certificates_replay() {
        for (g, _) in catalog::all() {
            for (canon, seq) in greedy_certificates(&g) {
                let p = greedy_run(&g, &ArrivalOrder::identity(g.players()), &TieBreak::Explicit(seq)).unwrap();
                assert_eq!(p.canonical(), canon);
            }
        }
    }

    #[test]
    fn dynamics_examples() {
        let g = catalog::example1();
        let ne = prof(&g, &["AC", "AC", "BC"]);
        let t = response_dynamics(&g, &ne, ResponseMode::BestResponse, MoverPolicy::LowestIndex, 10).unwrap();
        assert!(t.converged && t.steps.is_empty());

        let start = prof(&g, &["AB", "AC", "BC"]);
        let t = response_dynamics(&g, &start, ResponseMode::BestResponse, MoverPolicy::LowestIndex, 10).unwrap();
        assert!(t.converged);
        assert_eq!(t.steps.len(), 1);
        let step = &t.steps[0];
        assert_eq!((step.player, step.from, step.to), (0, 0, 1));
        assert_eq!(step.utility_before, Rational::from_integer(12.into()));
        assert_eq!(step.utility_after, Rational::from_integer(13.into()));
        assert_eq!(t.terminal, ne);
    }

    #[test]
    fn dynamics_step_cap() {
        let g = catalog::example1();
        let start = prof(&g, &["AB", "AB", "AB"]);
        let t = response_dynamics(&g, &start, ResponseMode::BestResponse, MoverPolicy::LowestIndex, 0).unwrap();
        assert!(!t.converged && t.steps.is_empty());
    }

    #[test]
    fn better_response_increases_potential() {
        for seed in 0..40u64 {
            let form = random_tree_form(seed, 6, 3);
            let g = random_game(&form, 3, seed);
            let start = StrategyProfile(vec![0; 3]);
            for policy in [MoverPolicy::LowestIndex, MoverPolicy::HighestGain, MoverPolicy::SeededRandom(seed)] {
                let t = response_dynamics(&g, &start, ResponseMode::BetterResponse, policy, 10_000).unwrap();
                assert!(t.converged);
                let mut p = start.clone();
                let mut phi = g.rosenthal_potential(&p).unwrap();
                for step in &t.steps {
                    assert!(step.utility_after > step.utility_before);
                    p = p.with_choice(step.player, step.to);
                    let next = g.rosenthal_potential(&p).unwrap();
                    assert!(next > phi);
                    phi = next;
                }
            }
        }
    }

    fn random_game(form: &GameForm, players: usize, seed: u64) -> crate::Game {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..form.num_resources())
            .map(|_| {
                let mut v = rng.gen_range(-10i64..30);
                (0..players)
                    .map(|_| {
                        let x = Rational::from_integer(v.into());
                        v -= rng.gen_range(1..6);
                        x
                    })
                    .collect()
            })
            .collect();
        crate::Game::new(form.clone(), players, rows).unwrap()
    }

    #[test]
    fn extraction_examples() {
        let form = GameForm::parse_labels(&["A"], &["A"]).unwrap();
        let g = crate::Game::from_integers(form, 1, &[&[3]]).unwrap();
        let (order, _) = extract_greedy_order(&g, &StrategyProfile(vec![0])).unwrap();
        assert_eq!(order.players(), &[0]);

        let form = GameForm::parse_labels(&["A", "B"], &["A", "B"]).unwrap();
        let g = crate::Game::from_integers(form, 2, &[&[10, 4], &[6, 5]]).unwrap();
        let ne = StrategyProfile(vec![0, 1]);
        let (order, tie) = extract_greedy_order(&g, &ne).unwrap();
        assert_eq!(order.players(), &[0, 1]);
        assert_eq!(tie, TieBreak::Explicit(vec![0, 1]));
        let ne = StrategyProfile(vec![1, 0]);
        let (order, _) = extract_greedy_order(&g, &ne).unwrap();
        assert_eq!(order.players(), &[1, 0]);

        let g = catalog::example1();
        let err = extract_greedy_order(&g, &prof(&g, &["AC", "AC", "BC"])).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn extraction_on_random_games_over_figure1() {
        let form = catalog::figure1_form();
        for seed in 0..25 {
            let g = random_game(&form, 3, seed);
            for ne in enumerate_nash(&g) {
                let (order, tie) = extract_greedy_order(&g, &ne.to_profile()).unwrap();
                let p = greedy_run(&g, &order, &tie).unwrap();
                assert_eq!(p.canonical(), ne);
                assert!(greedy_enumerate(&g).contains(&ne));
            }
        }
    }
}
