//! Built-in example games illustrating each relation between greedy profiles
//! and pure equilibria, plus the twelve-resource tree-representable form.

use crate::model::{CanonicalProfile, GameForm};
use crate::{Game, Classification};

fn game(resources: &[&str], strategies: &[&str], players: usize, rows: &[&[i64]]) -> Game {
    let form = GameForm::parse_labels(resources, strategies).expect("catalog form");
    Game::from_integers(form, players, rows).expect("catalog game")
}

/// Three players on all pairs of three resources. Greedy and equilibrium sets
/// are disjoint.
pub fn example1() -> Game {
    game(&["A", "B", "C"], &["AB", "AC", "BC"], 3, &[&[10, 8, 1], &[10, 4, 1], &[8, 6, 5]])
}

/// Two players; each strategy takes one of A, B and one of C, D. The greedy set
/// is strictly inside the equilibrium set.
pub fn example2() -> Game {
    game(
        &["A", "B", "C", "D"],
        &["AC", "AD", "BC", "BD"],
        2,
        &[&[40, 10], &[30, 11], &[20, 12], &[15, 13]],
    )
}

/// Two players on all pairs of three resources. The equilibrium set is strictly
/// inside the greedy set.
pub fn example3() -> Game {
    game(&["A", "B", "C"], &["AB", "AC", "BC"], 2, &[&[10, 1], &[8, 7], &[8, 6]])
}

/// Two players, negative payoffs; the two sets overlap without containment.
pub fn example4() -> Game {
    game(
        &["A", "B", "C", "D", "E"],
        &["AB", "AC", "DB", "E"],
        2,
        &[&[-1, -5], &[-1, -10], &[-5, -100], &[-2, -100], &[-10, -100]],
    )
}

/// A simple (singleton-strategy) game; the sets coincide.
pub fn example5() -> Game {
    game(&["A", "B", "C"], &["A", "B", "C"], 3, &[&[9, 5, 2], &[7, 4, 1], &[6, 3, 0]])
}

/// Twelve resources, six strategies, tree representable.
pub fn figure1_form() -> GameForm {
    GameForm::parse_labels(
        &["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"],
        &["ABG", "AH", "CI", "CFJ", "DEK", "DEL"],
    )
    .expect("catalog form")
}

/// Expected sets for one catalog example, written as strategy labels.
#[derive(Clone, Debug)]
pub struct ExpectedOutcome {
    pub id: u8,
    pub title: &'static str,
    pub greedy: Vec<Vec<&'static str>>,
    pub nash: Vec<Vec<&'static str>>,
    pub classification: Classification,
}

impl ExpectedOutcome {
    pub fn greedy_profiles(&self, form: &GameForm) -> Vec<CanonicalProfile> {
        to_profiles(form, &self.greedy)
    }

    pub fn nash_profiles(&self, form: &GameForm) -> Vec<CanonicalProfile> {
        to_profiles(form, &self.nash)
    }
}

fn to_profiles(form: &GameForm, sets: &[Vec<&str>]) -> Vec<CanonicalProfile> {
    let mut out: Vec<CanonicalProfile> = sets
        .iter()
        .map(|labels| {
            CanonicalProfile::from_multiset(
                labels.iter().map(|l| form.find_strategy(l).expect("catalog label")).collect(),
            )
        })
        .collect();
    out.sort();
    out
}

/// The catalog entries in order, each with its expected outcome.
pub fn all() -> Vec<(Game, ExpectedOutcome)> {
    vec![
        (
            example1(),
            ExpectedOutcome {
                id: 1,
                title: "greedy profiles and equilibria are mutually exclusive",
                greedy: vec![vec!["AB", "AC", "BC"]],
                nash: vec![vec!["AC", "AC", "BC"]],
                classification: Classification::Disjoint,
            },
        ),
        (
            example2(),
            ExpectedOutcome {
                id: 2,
                title: "greedy profiles strictly contained in equilibria",
                greedy: vec![vec!["AC", "BD"]],
                nash: vec![vec!["AC", "BD"], vec!["AD", "BC"]],
                classification: Classification::GreedyStrictSubset,
            },
        ),
        (
            example3(),
            ExpectedOutcome {
                id: 3,
                title: "equilibria strictly contained in greedy profiles",
                greedy: vec![vec!["AB", "BC"], vec!["AC", "BC"]],
                nash: vec![vec!["AB", "BC"]],
                classification: Classification::NashStrictSubset,
            },
        ),
        (
            example4(),
            ExpectedOutcome {
                id: 4,
                title: "overlapping without containment",
                greedy: vec![vec!["AB", "E"], vec!["AB", "AC"]],
                nash: vec![vec!["AB", "E"], vec!["AC", "DB"]],
                classification: Classification::Overlap,
            },
        ),
        (
            example5(),
            ExpectedOutcome {
                id: 5,
                title: "simple game: equivalence",
                greedy: vec![vec!["A", "B", "C"]],
                nash: vec![vec!["A", "B", "C"]],
                classification: Classification::Equal,
            },
        ),
    ]
}
