//! Pure Nash and strong equilibria, and the comparison of equilibria with
//! greedy profiles.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dynamics::greedy_enumerate;
use crate::error::{Error, Result};
use crate::model::{CanonicalProfile, CongestionGame, StrategyProfile};
use crate::scalar::Payoff;

/// Largest player count accepted by the coalition sweep.
pub const MAX_STRONG_PLAYERS: usize = 12;

/// A profitable deviation by one player or a coalition.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationWitness<T> {
    pub players: Vec<usize>,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub gains: Vec<T>,
}

/// First strictly improving unilateral deviation in (player, strategy) order,
/// or `None` if the profile is a pure Nash equilibrium.
pub fn is_nash<T: Payoff>(game: &CongestionGame<T>, profile: &StrategyProfile) -> Result<Option<DeviationWitness<T>>> {
    game.validate_profile(profile)?;
    let form = game.form();
    let counts = game.counts_of(profile.choices());
    for (player, &s) in profile.choices().iter().enumerate() {
        let from = form.strategy(s);
        let current = game.held_value(from, counts.counts());
        for t in 0..form.num_strategies() {
            if t == s {
                continue;
            }
            let value = game.switch_value(from, form.strategy(t), counts.counts());
            if value > current {
                return Ok(Some(DeviationWitness {
                    players: vec![player],
                    from: vec![s],
                    to: vec![t],
                    gains: vec![value - current.clone()],
                }));
            }
        }
    }
    Ok(None)
}

/// Calls `visit` with every multiset of `size` strategy indices below `strategies`,
/// in lexicographic order.
pub fn for_each_multiset(strategies: usize, size: usize, mut visit: impl FnMut(&[usize])) {
    if strategies == 0 {
        return;
    }
    let mut current = vec![0usize; size];
    loop {
        visit(&current);
        // advance to the next nondecreasing sequence
        let Some(i) = (0..size).rev().find(|&i| current[i] + 1 < strategies) else {
            return;
        };
        let next = current[i] + 1;
        for slot in &mut current[i..] {
            *slot = next;
        }
    }
}

fn multiset_is_nash<T: Payoff>(game: &CongestionGame<T>, multiset: &[usize]) -> bool {
    let form = game.form();
    let counts = game.counts_of(multiset);
    let mut previous = None;
    for &s in multiset {
        // players on the same strategy face the same deviations
        if previous == Some(s) {
            continue;
        }
        previous = Some(s);
        let from = form.strategy(s);
        let current = game.held_value(from, counts.counts());
        for t in 0..form.num_strategies() {
            if t != s && game.switch_value(from, form.strategy(t), counts.counts()) > current {
                return false;
            }
        }
    }
    true
}

/// All pure Nash equilibria up to player renaming.
pub fn enumerate_nash<T: Payoff>(game: &CongestionGame<T>) -> BTreeSet<CanonicalProfile> {
    let mut out = BTreeSet::new();
    for_each_multiset(game.form().num_strategies(), game.players(), |m| {
        if multiset_is_nash(game, m) {
            out.insert(CanonicalProfile::from_multiset(m.to_vec()));
        }
    });
    out
}

/// First coalition deviation that strictly improves every member, or `None`
/// for a strong equilibrium. Coalitions are scanned by ascending member bit
/// mask, joint reassignments lexicographically.
pub fn is_strong_equilibrium<T: Payoff>(
    game: &CongestionGame<T>,
    profile: &StrategyProfile,
) -> Result<Option<DeviationWitness<T>>> {
    game.validate_profile(profile)?;
    let n = game.players();
    if n > MAX_STRONG_PLAYERS {
        return Err(Error::Precondition(format!(
            "coalition sweep supports at most {MAX_STRONG_PLAYERS} players, game has {n}"
        )));
    }
    let form = game.form();
    let m = form.num_strategies();
    let counts = game.counts_of(profile.choices());
    let current: Vec<T> = profile
        .choices()
        .iter()
        .map(|&s| game.held_value(form.strategy(s), counts.counts()))
        .collect();

    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut base = counts.clone();
        for &i in &members {
            base.remove(form.strategy(profile.0[i]));
        }
        let mut joint = vec![0usize; members.len()];
        loop {
            if members.iter().zip(&joint).any(|(&i, &t)| profile.0[i] != t) {
                let mut after = base.clone();
                for &t in &joint {
                    after.add(form.strategy(t));
                }
                let values: Vec<T> = joint.iter().map(|&t| game.held_value(form.strategy(t), after.counts())).collect();
                if members.iter().zip(&values).all(|(&i, v)| *v > current[i]) {
                    return Ok(Some(DeviationWitness {
                        from: members.iter().map(|&i| profile.0[i]).collect(),
                        to: joint.clone(),
                        gains: members.iter().zip(values).map(|(&i, v)| v - current[i].clone()).collect(),
                        players: members,
                    }));
                }
            }
            // odometer over |Σ|^|members|
            let Some(pos) = (0..joint.len()).rev().find(|&k| joint[k] + 1 < m) else {
                break;
            };
            joint[pos] += 1;
            for slot in &mut joint[pos + 1..] {
                *slot = 0;
            }
        }
    }
    Ok(None)
}

/// All strong equilibria up to player renaming; always a subset of the Nash set.
pub fn enumerate_strong<T: Payoff>(game: &CongestionGame<T>) -> Result<BTreeSet<CanonicalProfile>> {
    let mut out = BTreeSet::new();
    for ne in enumerate_nash(game) {
        if is_strong_equilibrium(game, &ne.to_profile())?.is_none() {
            out.insert(ne);
        }
    }
    Ok(out)
}

/// How the greedy set `Z` relates to the Nash set `NE`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Equal,
    GreedyStrictSubset,
    NashStrictSubset,
    Overlap,
    Disjoint,
}

impl Classification {
    pub fn of(greedy: &BTreeSet<CanonicalProfile>, nash: &BTreeSet<CanonicalProfile>) -> Self {
        if greedy == nash {
            Classification::Equal
        } else if greedy.is_subset(nash) {
            Classification::GreedyStrictSubset
        } else if nash.is_subset(greedy) {
            Classification::NashStrictSubset
        } else if greedy.is_disjoint(nash) {
            Classification::Disjoint
        } else {
            Classification::Overlap
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Equal => "EQUAL",
            Classification::GreedyStrictSubset => "GREEDY_STRICT_SUBSET",
            Classification::NashStrictSubset => "NASH_STRICT_SUBSET",
            Classification::Overlap => "OVERLAP",
            Classification::Disjoint => "DISJOINT",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionReport {
    pub greedy: BTreeSet<CanonicalProfile>,
    pub nash: BTreeSet<CanonicalProfile>,
    pub strong: Option<BTreeSet<CanonicalProfile>>,
    pub classification: Classification,
}

pub fn compare<T: Payoff>(game: &CongestionGame<T>, include_strong: bool) -> Result<SolutionReport> {
    let greedy = greedy_enumerate(game);
    let nash = enumerate_nash(game);
    let strong = if include_strong { Some(enumerate_strong(game)?) } else { None };
    let classification = Classification::of(&greedy, &nash);
    Ok(SolutionReport { greedy, nash, strong, classification })
}
