//! Counterexample games for forms that are not tree representable.
//!
//! Given a subset-free form with a bad configuration, build a two-player
//! monotone game whose greedy profiles differ from its pure equilibria, then
//! confirm the separation by brute force. Role names follow the usual
//! relabeling of a bad configuration: `A ∈ (s1 ∩ s3) \ s2` and
//! `C ∈ (s1 ∩ s2) \ s3`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::greedy_enumerate;
use crate::equilibrium::enumerate_nash;
use crate::error::{Error, Result};
use crate::form::{bad_configurations, BadConfiguration};
use crate::model::{CanonicalProfile, GameForm, Strategy};
use crate::{Game, Rational};

/// Which payoff template produced the game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConstructionCase {
    /// A resource `E ∈ (s2 ∩ s3) \ s1` exists: triangle on `A, C, E`.
    #[serde(rename = "LEMMA8_E_EXISTS")]
    SharedOutsideFirst,
    /// No strategy other than `s2` fits inside `s2 ∪ (s3 \ s1)`: all-negative
    /// class table.
    #[serde(rename = "LEMMA10_NO_S4")]
    NoFourthStrategy,
    /// A fourth strategy exists and its extra resource `E` lies in `s1`:
    /// triangle on `A, D, E`.
    #[serde(rename = "PROP12_CASE1")]
    FourthInsideFirst,
    /// A fourth strategy exists and `E ∉ s1`: two-layer game on `A, E, C, D`.
    #[serde(rename = "PROP12_CASE2")]
    FourthOutsideFirst,
    /// No template separates; integer payoffs found by a seeded search.
    #[serde(rename = "SEARCH_FALLBACK")]
    SeededSearch,
}

impl ConstructionCase {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionCase::SharedOutsideFirst => "LEMMA8_E_EXISTS",
            ConstructionCase::NoFourthStrategy => "LEMMA10_NO_S4",
            ConstructionCase::FourthInsideFirst => "PROP12_CASE1",
            ConstructionCase::FourthOutsideFirst => "PROP12_CASE2",
            ConstructionCase::SeededSearch => "SEARCH_FALLBACK",
        }
    }

    fn preferred_side(self) -> SeparationSide {
        match self {
            ConstructionCase::NoFourthStrategy => SeparationSide::GreedyNotNash,
            _ => SeparationSide::NashNotGreedy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SeparationSide {
    #[serde(rename = "NE_NOT_GREEDY")]
    NashNotGreedy,
    #[serde(rename = "GREEDY_NOT_NE")]
    GreedyNotNash,
}

impl SeparationSide {
    pub fn as_str(self) -> &'static str {
        match self {
            SeparationSide::NashNotGreedy => "NE_NOT_GREEDY",
            SeparationSide::GreedyNotNash => "GREEDY_NOT_NE",
        }
    }
}

/// Concrete resources and strategies playing each role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RoleMap {
    pub a: usize,
    pub c: usize,
    pub d: Option<usize>,
    pub e: Option<usize>,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub s4: Option<usize>,
}

impl RoleMap {
    /// Checks the defining memberships for `case`.
    pub fn consistent(&self, form: &GameForm, case: ConstructionCase) -> bool {
        let (s1, s2, s3) = (form.strategy(self.s1), form.strategy(self.s2), form.strategy(self.s3));
        let base = s1.contains(self.a)
            && s3.contains(self.a)
            && !s2.contains(self.a)
            && s1.contains(self.c)
            && s2.contains(self.c)
            && !s3.contains(self.c);
        if !base {
            return false;
        }
        match case {
            ConstructionCase::SharedOutsideFirst => self
                .e
                .is_some_and(|e| s2.contains(e) && s3.contains(e) && !s1.contains(e)),
            ConstructionCase::NoFourthStrategy => {
                self.s4.is_none() && fourth_candidates(form, self.s1, self.s2, self.s3).is_empty()
            }
            ConstructionCase::SeededSearch => self.d.is_none() && self.e.is_none() && self.s4.is_none(),
            ConstructionCase::FourthInsideFirst | ConstructionCase::FourthOutsideFirst => {
                let (Some(s4), Some(d), Some(e)) = (self.s4, self.d, self.e) else {
                    return false;
                };
                let t = form.strategy(s4);
                let in_first = s1.contains(e);
                s4 != self.s2
                    && t.is_subset_of(s2.union(s3.difference(s1)))
                    && t.contains(d)
                    && s3.contains(d)
                    && !s1.contains(d)
                    && !s2.contains(d)
                    && t.contains(e)
                    && !s3.contains(e)
                    && in_first == (case == ConstructionCase::FourthInsideFirst)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleCertificate {
    pub game: Game,
    pub case: ConstructionCase,
    pub bad_config: BadConfiguration,
    pub roles: RoleMap,
    pub witness: CanonicalProfile,
    pub side: SeparationSide,
}

/// Strategies `t ≠ s2` with `t ⊆ s2 ∪ (s3 \ s1)`.
fn fourth_candidates(form: &GameForm, s1: usize, s2: usize, s3: usize) -> Vec<usize> {
    let room = form.strategy(s2).union(form.strategy(s3).difference(form.strategy(s1)));
    (0..form.num_strategies())
        .filter(|&t| t != s2 && form.strategy(t).is_subset_of(room))
        .collect()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn frac(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Filler-based template: the named resources get integer rows, every other
/// resource `(1/M, 1/(2M))` with `M = 2|R| + 1`.
fn filler_game(form: &GameForm, named: &[(usize, [i64; 2])]) -> Result<Game> {
    let m = big(2 * form.num_resources() as i64 + 1);
    let rows = (0..form.num_resources())
        .map(|r| match named.iter().find(|(res, _)| *res == r) {
            Some((_, [p1, p2])) => vec![int(big(*p1)), int(big(*p2))],
            None => vec![frac(BigInt::one(), m.clone()), frac(BigInt::one(), big(2) * &m)],
        })
        .collect();
    Game::new(form.clone(), 2, rows)
}

/// All-negative table over the seven membership classes of `s1, s2, s3`,
/// with `M = |R|^9 + 1`.
fn class_table_game(form: &GameForm, s1: Strategy, s2: Strategy, s3: Strategy) -> Result<Game> {
    let n = big(form.num_resources() as i64);
    let m = n.pow(9) + BigInt::one();
    let one = BigInt::one();
    let mut rows = Vec::with_capacity(form.num_resources());
    for r in 0..form.num_resources() {
        let (in1, in2, in3) = (s1.contains(r), s2.contains(r), s3.contains(r));
        let (p1, p2) = match (in1, in2, in3) {
            (true, true, true) => (-frac(one.clone(), m.pow(2)), -frac(one.clone(), n.clone())),
            (true, true, false) => (-frac(one.clone(), m.pow(2)), -int(n.pow(6))),
            (true, false, true) => (-frac(one.clone(), n.pow(5)), -int(big(2) * &m)),
            (true, false, false) => (-frac(one.clone(), n.pow(5)), -int(big(2) * &m)),
            (false, true, false) => (-frac(one.clone(), n.clone()), -int(big(2) * &m)),
            (false, false, true) => (-frac(one.clone(), n.pow(4)), -int(big(2) * &m)),
            (false, false, false) => (-int(m.clone()), -int(big(2) * &m)),
            (false, true, true) => {
                return Err(Error::Precondition("class table needs (s2 ∩ s3) \\ s1 to be empty".into()))
            }
        };
        rows.push(vec![p1, p2]);
    }
    Game::new(form.clone(), 2, rows)
}

/// Candidate constructions for one bad configuration, in preference order.
fn candidates(form: &GameForm, bad: BadConfiguration) -> Result<Vec<(ConstructionCase, RoleMap, Game)>> {
    let (a, c) = (bad.resource_a, bad.resource_b);
    let (s1, s2, s3) = (bad.s1, bad.s3, bad.s2);
    let (t1, t2, t3) = (form.strategy(s1), form.strategy(s2), form.strategy(s3));
    let base = RoleMap { a, c, d: None, e: None, s1, s2, s3, s4: None };
    let mut out = Vec::new();

    let shared = t2.intersection(t3).difference(t1);
    if !shared.is_empty() {
        for e in shared.resources() {
            let game = filler_game(form, &[(a, [10, 1]), (c, [9, 6]), (e, [8, 7])])?;
            out.push((ConstructionCase::SharedOutsideFirst, RoleMap { e: Some(e), ..base }, game));
        }
        return Ok(out);
    }

    let fourth = fourth_candidates(form, s1, s2, s3);
    if fourth.is_empty() {
        out.push((ConstructionCase::NoFourthStrategy, base, class_table_game(form, t1, t2, t3)?));
        return Ok(out);
    }
    for s4 in fourth {
        let t4 = form.strategy(s4);
        for d in t4.intersection(t3.difference(t1.union(t2))).resources() {
            for e in t4.difference(t3).resources() {
                let roles = RoleMap { d: Some(d), e: Some(e), s4: Some(s4), ..base };
                if t1.contains(e) {
                    let game = filler_game(form, &[(a, [10, 1]), (d, [9, 6]), (e, [8, 7])])?;
                    out.push((ConstructionCase::FourthInsideFirst, roles, game));
                } else {
                    let game = filler_game(form, &[(a, [40, 10]), (e, [30, 11]), (c, [20, 12]), (d, [15, 13])])?;
                    out.push((ConstructionCase::FourthOutsideFirst, roles, game));
                }
            }
        }
    }
    Ok(out)
}

/// Attempts per player count in the fallback search.
pub const SEARCH_ATTEMPTS: usize = 4000;
const SEARCH_SEED: u64 = 0x6772_6565_6479;
const SEARCH_RANGE: usize = 41;

/// Strictly decreasing integer rows in `[-20, 20]`.
fn searched_game(form: &GameForm, players: usize, rng: &mut ChaCha8Rng) -> Result<Game> {
    let rows = (0..form.num_resources())
        .map(|_| {
            let mut picks = sample(rng, SEARCH_RANGE, players).into_vec();
            picks.sort_unstable_by(|a, b| b.cmp(a));
            picks.into_iter().map(|v| int(big(v as i64 - 20))).collect()
        })
        .collect();
    Game::new(form.clone(), players, rows)
}

fn pick_witness(
    case: ConstructionCase,
    greedy: &BTreeSet<CanonicalProfile>,
    nash: &BTreeSet<CanonicalProfile>,
) -> Option<(CanonicalProfile, SeparationSide)> {
    let nash_only = nash.difference(greedy).next().cloned().map(|p| (p, SeparationSide::NashNotGreedy));
    let greedy_only = greedy.difference(nash).next().cloned().map(|p| (p, SeparationSide::GreedyNotNash));
    match case.preferred_side() {
        SeparationSide::NashNotGreedy => nash_only.or(greedy_only),
        SeparationSide::GreedyNotNash => greedy_only.or(nash_only),
    }
}

/// Builds and verifies a two-player monotone game on `form` whose greedy
/// profiles differ from its pure Nash equilibria.
///
/// Bad configurations are tried in lexicographic order and, within each, the
/// role choices in ascending index order; the first construction whose
/// separation survives brute-force verification is returned. Templates can
/// all fail when other strategies cover every role resource; a seeded search
/// over small strictly decreasing integer payoffs, two players then three,
/// takes over in that case.
pub fn synthesize_counterexample(form: &GameForm) -> Result<CounterexampleCertificate> {
    if let Some((s, t)) = form.is_subset_free() {
        return Err(Error::Precondition(format!(
            "form is not subset-free: {} ⊂ {}",
            form.strategy_label(s),
            form.strategy_label(t)
        )));
    }
    let mut tried = 0usize;
    let mut first = None;
    for bad in bad_configurations(form) {
        first.get_or_insert(bad);
        for (case, roles, game) in candidates(form, bad)? {
            tried += 1;
            let greedy = greedy_enumerate(&game);
            let nash = enumerate_nash(&game);
            if let Some((witness, side)) = pick_witness(case, &greedy, &nash) {
                return Ok(CounterexampleCertificate { game, case, bad_config: bad, roles, witness, side });
            }
        }
    }
    let Some(first) = first else {
        return Err(Error::Precondition("form is tree representable".into()));
    };
    let roles = RoleMap {
        a: first.resource_a,
        c: first.resource_b,
        d: None,
        e: None,
        s1: first.s1,
        s2: first.s3,
        s3: first.s2,
        s4: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for players in 2..=3 {
        for _ in 0..SEARCH_ATTEMPTS {
            tried += 1;
            let game = searched_game(form, players, &mut rng)?;
            let greedy = greedy_enumerate(&game);
            let nash = enumerate_nash(&game);
            let case = ConstructionCase::SeededSearch;
            if let Some((witness, side)) = pick_witness(case, &greedy, &nash) {
                return Ok(CounterexampleCertificate { game, case, bad_config: first, roles, witness, side });
            }
        }
    }
    Err(Error::TheoremViolation(format!(
        "none of {tried} constructed games separates greedy profiles from equilibria"
    )))
}

/// Recomputes everything a certificate claims.
pub fn validate_certificate(cert: &CounterexampleCertificate) -> bool {
    let game = &cert.game;
    let form = game.form();
    if !game.is_monotone() || !cert.bad_config.holds_in(form) || !cert.roles.consistent(form, cert.case) {
        return false;
    }
    if cert.witness.len() != game.players() || cert.witness.strategies().iter().any(|&s| s >= form.num_strategies()) {
        return false;
    }
    let greedy = greedy_enumerate(game);
    let nash = enumerate_nash(game);
    let (in_greedy, in_nash) = (greedy.contains(&cert.witness), nash.contains(&cert.witness));
    match cert.side {
        SeparationSide::NashNotGreedy => in_nash && !in_greedy,
        SeparationSide::GreedyNotNash => in_greedy && !in_nash,
    }
}
