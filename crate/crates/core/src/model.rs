//! Game forms, games, profiles and the quantities defined on them.
//!
//! Strategies are bit masks over a resource universe of at most
//! [`MAX_RESOURCES`] resources. Payoff tables are generic over [`Payoff`];
//! the crate root provides exact-rational aliases.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Payoff;

/// Width of the strategy bit mask.
pub const MAX_RESOURCES: usize = 64;

/// A set of resources, stored as a bit mask over resource indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy(u64);

impl Strategy {
    pub const EMPTY: Strategy = Strategy(0);

    pub fn from_mask(mask: u64) -> Self {
        Strategy(mask)
    }

    pub fn from_resources<I: IntoIterator<Item = usize>>(resources: I) -> Self {
        let mut mask = 0u64;
        for r in resources {
            assert!(r < MAX_RESOURCES, "resource index {r} exceeds mask width");
            mask |= 1 << r;
        }
        Strategy(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, resource: usize) -> bool {
        resource < MAX_RESOURCES && self.0 & (1 << resource) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Strategy) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Strategy) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn intersection(self, other: Strategy) -> Strategy {
        Strategy(self.0 & other.0)
    }

    pub fn union(self, other: Strategy) -> Strategy {
        Strategy(self.0 | other.0)
    }

    pub fn difference(self, other: Strategy) -> Strategy {
        Strategy(self.0 & !other.0)
    }

    pub fn intersects(self, other: Strategy) -> bool {
        self.0 & other.0 != 0
    }

    /// Resource indices in ascending order.
    pub fn resources(self) -> Resources {
        Resources(self.0)
    }

    /// Lowest resource index in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

/// Iterator over the resources of a [`Strategy`].
#[derive(Clone, Debug)]
pub struct Resources(u64);

impl Iterator for Resources {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let r = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(r)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Resources {}

/// The pair (resources, strategies).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameForm {
    resources: Vec<String>,
    strategies: Vec<Strategy>,
    // Resource order as written by the caller; only used for labels and files.
    declared: Vec<Vec<usize>>,
}

impl GameForm {
    /// Builds a form from resource names and per-strategy resource index lists.
    pub fn new(resources: Vec<String>, strategies: Vec<Vec<usize>>) -> Result<Self> {
        if resources.len() > MAX_RESOURCES {
            return Err(Error::InvalidForm(format!(
                "{} resources exceed the supported maximum of {MAX_RESOURCES}",
                resources.len()
            )));
        }
        let mut names = HashSet::new();
        for name in &resources {
            if name.is_empty() {
                return Err(Error::InvalidForm("empty resource name".into()));
            }
            if !names.insert(name.as_str()) {
                return Err(Error::InvalidForm(format!("duplicate resource name {name:?}")));
            }
        }
        if strategies.is_empty() {
            return Err(Error::InvalidForm("a form needs at least one strategy".into()));
        }
        let mut masks = Vec::with_capacity(strategies.len());
        let mut seen = HashSet::new();
        for (i, members) in strategies.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidForm(format!("strategy {i} is empty")));
            }
            let mut distinct = HashSet::new();
            for &r in members {
                if r >= resources.len() {
                    return Err(Error::InvalidForm(format!(
                        "strategy {i} references resource index {r} outside the universe"
                    )));
                }
                if !distinct.insert(r) {
                    return Err(Error::InvalidForm(format!(
                        "strategy {i} lists resource {} twice",
                        resources[r]
                    )));
                }
            }
            let mask = Strategy::from_resources(members.iter().copied());
            if !seen.insert(mask) {
                return Err(Error::InvalidForm(format!("strategy {i} duplicates an earlier strategy")));
            }
            masks.push(mask);
        }
        Ok(GameForm { resources, strategies: masks, declared: strategies })
    }

    /// Builds a form from resource names and strategy bit masks.
    pub fn from_strategies(resources: Vec<String>, strategies: &[Strategy]) -> Result<Self> {
        let lists = strategies.iter().map(|s| s.resources().collect()).collect();
        Self::new(resources, lists)
    }

    /// Shorthand: `GameForm::parse_labels(&["A", "B", "C"], &["AB", "AC"])`.
    ///
    /// A strategy label containing a comma is split on commas, otherwise on
    /// characters.
    pub fn parse_labels(resources: &[&str], strategies: &[&str]) -> Result<Self> {
        let names: Vec<String> = resources.iter().map(|s| s.to_string()).collect();
        let mut lists = Vec::with_capacity(strategies.len());
        for label in strategies {
            let parts: Vec<String> = if label.contains(',') {
                label.split(',').map(|p| p.trim().to_string()).collect()
            } else {
                label.chars().map(|c| c.to_string()).collect()
            };
            let mut members = Vec::with_capacity(parts.len());
            for p in parts {
                let idx = names
                    .iter()
                    .position(|n| *n == p)
                    .ok_or_else(|| Error::InvalidForm(format!("unknown resource {p:?} in {label:?}")))?;
                members.push(idx);
            }
            lists.push(members);
        }
        Self::new(names, lists)
    }

    pub fn resources(&self) -> &[String] {
        &self.resources
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn num_resources(&self) -> usize {
        self.resources.len()
    }

    pub fn num_strategies(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, index: usize) -> Strategy {
        self.strategies[index]
    }

    pub fn resource_name(&self, index: usize) -> &str {
        &self.resources[index]
    }

    pub fn resource_index(&self, name: &str) -> Option<usize> {
        self.resources.iter().position(|n| n == name)
    }

    /// Resource indices of a strategy in declaration order.
    pub fn declared_members(&self, index: usize) -> &[usize] {
        &self.declared[index]
    }

    pub fn strategy_index(&self, strategy: Strategy) -> Option<usize> {
        self.strategies.iter().position(|&s| s == strategy)
    }

    fn single_char_names(&self) -> bool {
        self.resources.iter().all(|n| n.chars().count() == 1)
    }

    /// Display label: concatenated resource names when every name is a single
    /// character, `s<index>` otherwise.
    pub fn strategy_label(&self, index: usize) -> String {
        if self.single_char_names() {
            self.declared[index].iter().map(|&r| self.resources[r].as_str()).collect()
        } else {
            format!("s{index}")
        }
    }

    /// Resolves a strategy written as its label, as `s<index>`, or (for
    /// single-character resource names) as any ordering of its resources.
    pub fn find_strategy(&self, token: &str) -> Option<usize> {
        let token = token.trim();
        if let Some(rest) = token.strip_prefix('s') {
            if let Ok(i) = rest.parse::<usize>() {
                if i < self.strategies.len() {
                    return Some(i);
                }
            }
        }
        if let Some(i) = (0..self.strategies.len()).find(|&i| self.strategy_label(i) == token) {
            return Some(i);
        }
        if self.single_char_names() {
            let mut members = Vec::new();
            for c in token.chars() {
                members.push(self.resource_index(&c.to_string())?);
            }
            let mask = Strategy::from_resources(members.iter().copied());
            if mask.len() == members.len() {
                return self.strategy_index(mask);
            }
        }
        None
    }

    /// Returns an ordered pair `(s, t)` of strategy indices with `s ⊂ t`, or
    /// `None` when no strategy contains another.
    pub fn is_subset_free(&self) -> Option<(usize, usize)> {
        for (i, &s) in self.strategies.iter().enumerate() {
            for (j, &t) in self.strategies.iter().enumerate() {
                if i != j && s.is_proper_subset_of(t) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Keeps only the listed strategies, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let lists = keep.iter().map(|&i| self.declared[i].clone()).collect();
        Self::new(self.resources.clone(), lists)
    }
}

/// One strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile(pub Vec<usize>);

impl StrategyProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        StrategyProfile(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn canonical(&self) -> CanonicalProfile {
        canonicalize(self)
    }

    pub fn with_choice(&self, player: usize, strategy: usize) -> Self {
        let mut next = self.0.clone();
        next[player] = strategy;
        StrategyProfile(next)
    }
}

/// Sorted multiset of strategy indices: a profile up to player renaming.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalProfile(Vec<usize>);

impl CanonicalProfile {
    pub fn from_multiset(mut strategies: Vec<usize>) -> Self {
        strategies.sort_unstable();
        CanonicalProfile(strategies)
    }

    pub fn strategies(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The labeled profile that assigns the multiset to players in sorted order.
    pub fn to_profile(&self) -> StrategyProfile {
        StrategyProfile(self.0.clone())
    }

    /// `[AB, AC, BC]`-style rendering using the form's labels.
    pub fn display(&self, form: &GameForm) -> String {
        let parts: Vec<String> = self.0.iter().map(|&s| form.strategy_label(s)).collect();
        format!("[{}]", parts.join(", "))
    }
}

pub fn canonicalize(profile: &StrategyProfile) -> CanonicalProfile {
    CanonicalProfile::from_multiset(profile.0.clone())
}

/// Number of players on each resource.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CongestionVector(pub Vec<u32>);

impl CongestionVector {
    pub fn zeros(resources: usize) -> Self {
        CongestionVector(vec![0; resources])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, resource: usize) -> u32 {
        self.0[resource]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn add(&mut self, strategy: Strategy) {
        for r in strategy.resources() {
            self.0[r] += 1;
        }
    }

    pub fn remove(&mut self, strategy: Strategy) {
        for r in strategy.resources() {
            self.0[r] -= 1;
        }
    }
}

/// A symmetric congestion game: form, player count, payoff table.
#[derive(Clone, Debug, PartialEq)]
pub struct CongestionGame<T> {
    form: GameForm,
    players: usize,
    payoffs: Vec<Vec<T>>,
}

impl<T: Payoff> CongestionGame<T> {
    /// `payoffs[r][k-1]` is the payment of resource `r` to each of its `k` users.
    /// Rows may be longer than `players`; the tail is ignored.
    pub fn new(form: GameForm, players: usize, payoffs: Vec<Vec<T>>) -> Result<Self> {
        if players == 0 {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        if payoffs.len() != form.num_resources() {
            return Err(Error::InvalidGame(format!(
                "payoff table has {} rows for {} resources",
                payoffs.len(),
                form.num_resources()
            )));
        }
        for (r, row) in payoffs.iter().enumerate() {
            if row.len() < players {
                return Err(Error::InvalidGame(format!(
                    "resource {} has {} payoff entries, need {players}",
                    form.resource_name(r),
                    row.len()
                )));
            }
        }
        Ok(CongestionGame { form, players, payoffs })
    }

    /// Builds a game from integer payoff rows, one row per resource.
    pub fn from_integers(form: GameForm, players: usize, rows: &[&[i64]]) -> Result<Self> {
        let payoffs = rows
            .iter()
            .map(|row| row.iter().map(|&v| T::from_i64(v).expect("integer payoff")).collect())
            .collect();
        Self::new(form, players, payoffs)
    }

    pub fn form(&self) -> &GameForm {
        &self.form
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn payoff_rows(&self) -> &[Vec<T>] {
        &self.payoffs
    }

    /// `P_r(k)` for `1 <= k <= players`.
    pub fn payoff(&self, resource: usize, users: usize) -> &T {
        debug_assert!(users >= 1 && users <= self.payoffs[resource].len());
        &self.payoffs[resource][users - 1]
    }

    /// Same game form and payoffs, different player count.
    pub fn with_players(&self, players: usize) -> Result<Self> {
        Self::new(self.form.clone(), players, self.payoffs.clone())
    }

    pub fn validate_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.len() != self.players {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries for {} players",
                profile.len(),
                self.players
            )));
        }
        if let Some(&bad) = profile.choices().iter().find(|&&s| s >= self.form.num_strategies()) {
            return Err(Error::InvalidProfile(format!(
                "strategy index {bad} out of range (form has {} strategies)",
                self.form.num_strategies()
            )));
        }
        Ok(())
    }

    pub(crate) fn counts_of(&self, choices: &[usize]) -> CongestionVector {
        let mut cv = CongestionVector::zeros(self.form.num_resources());
        for &s in choices {
            cv.add(self.form.strategies[s]);
        }
        cv
    }

    pub fn congestion_vector(&self, profile: &StrategyProfile) -> Result<CongestionVector> {
        self.validate_profile(profile)?;
        Ok(self.counts_of(profile.choices()))
    }

    /// Payoff of holding `strategy` when `counts` already includes its holder.
    pub(crate) fn held_value(&self, strategy: Strategy, counts: &[u32]) -> T {
        let mut total = T::zero();
        for r in strategy.resources() {
            total += self.payoff(r, counts[r] as usize);
        }
        total
    }

    /// Payoff of joining with `strategy` on top of `counts`.
    pub(crate) fn arrival_value(&self, strategy: Strategy, counts: &[u32]) -> T {
        let mut total = T::zero();
        for r in strategy.resources() {
            total += self.payoff(r, counts[r] as usize + 1);
        }
        total
    }

    /// Payoff a holder of `from` would get by switching to `to`, where `counts`
    /// includes the holder on `from`.
    pub(crate) fn switch_value(&self, from: Strategy, to: Strategy, counts: &[u32]) -> T {
        let mut total = T::zero();
        for r in to.resources() {
            let users = if from.contains(r) { counts[r] } else { counts[r] + 1 };
            total += self.payoff(r, users as usize);
        }
        total
    }

    pub fn utility(&self, profile: &StrategyProfile, player: usize) -> Result<T> {
        self.validate_profile(profile)?;
        if player >= self.players {
            return Err(Error::InvalidPlayer { player, players: self.players });
        }
        let cv = self.counts_of(profile.choices());
        Ok(self.held_value(self.form.strategies[profile.0[player]], cv.counts()))
    }

    /// Utilities `(row, column)` for every pair of strategies in a two-player
    /// game, rows and columns in declared strategy order.
    pub fn bimatrix(&self) -> Result<Vec<Vec<(T, T)>>> {
        if self.players != 2 {
            return Err(Error::Precondition(format!("bimatrix needs two players, game has {}", self.players)));
        }
        let m = self.form.num_strategies();
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let profile = StrategyProfile(vec![i, j]);
                row.push((self.utility(&profile, 0)?, self.utility(&profile, 1)?));
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Every payoff vector strictly decreases over `1..=players`.
    pub fn is_monotone(&self) -> bool {
        self.payoffs
            .iter()
            .all(|row| row[..self.players].windows(2).all(|w| w[0] > w[1]))
    }

    /// All payoffs positive, or all negative.
    pub fn is_single_signed(&self) -> bool {
        let entries = || self.payoffs.iter().flat_map(|row| row[..self.players].iter());
        entries().all(|v| v.is_positive()) || entries().all(|v| v.is_negative())
    }

    /// Deletes dominated strategies: with positive payoffs every strategy
    /// strictly contained in another, with negative payoffs every strategy
    /// strictly containing another.
    pub fn reduce_to_subset_free(&self) -> Result<Self> {
        if !self.is_monotone() {
            return Err(Error::Precondition("game is not monotone".into()));
        }
        if !self.is_single_signed() {
            return Err(Error::Precondition("game is not single-signed".into()));
        }
        let positive = self.payoffs[0][0].is_positive();
        let strategies = self.form.strategies();
        let keep: Vec<usize> = (0..strategies.len())
            .filter(|&i| {
                let s = strategies[i];
                !strategies.iter().any(|&t| {
                    if positive {
                        s.is_proper_subset_of(t)
                    } else {
                        t.is_proper_subset_of(s)
                    }
                })
            })
            .collect();
        let form = self.form.restrict(&keep)?;
        Self::new(form, self.players, self.payoffs.clone())
    }

    /// Rosenthal's potential `Σ_r Σ_{k=1}^{c_r} P_r(k)`.
    pub fn rosenthal_potential(&self, profile: &StrategyProfile) -> Result<T> {
        let cv = self.congestion_vector(profile)?;
        let mut total = T::zero();
        for (r, &c) in cv.counts().iter().enumerate() {
            for k in 1..=c as usize {
                total += self.payoff(r, k);
            }
        }
        Ok(total)
    }

    /// All strategies maximizing `Σ_{r∈t} P_r(background_r + 1)`, ascending.
    pub fn best_response_set(&self, background: &CongestionVector) -> Result<Vec<usize>> {
        if background.0.len() != self.form.num_resources() {
            return Err(Error::InvalidProfile("congestion vector has wrong length".into()));
        }
        if let Some(r) = background.0.iter().position(|&c| c as usize >= self.players) {
            return Err(Error::InvalidProfile(format!(
                "background congestion on {} leaves no room for another player",
                self.form.resource_name(r)
            )));
        }
        Ok(self.best_responses(background.counts()))
    }

    pub(crate) fn best_responses(&self, counts: &[u32]) -> Vec<usize> {
        let mut best: Option<T> = None;
        let mut set = Vec::new();
        for (i, &s) in self.form.strategies.iter().enumerate() {
            let value = self.arrival_value(s, counts);
            match &best {
                Some(b) if value < *b => {}
                Some(b) if value == *b => set.push(i),
                _ => {
                    best = Some(value);
                    set.clear();
                    set.push(i);
                }
            }
        }
        set
    }
}

impl fmt::Display for GameForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.num_strategies()).map(|i| self.strategy_label(i)).collect();
        write!(f, "R = {{{}}}, Σ = {{{}}}", self.resources.join(", "), labels.join(", "))
    }
}
