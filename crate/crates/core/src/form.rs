//! Tree representability of game forms.
//!
//! A form is tree representable iff it has no bad configuration: resources
//! `a`, `b` and strategies `s1`, `s2`, `s3` with `a, b ∈ s1`, `a ∈ s2 \ s3`
//! and `b ∈ s3 \ s2`. [`build_r_tree`] constructs an explicit R-tree for a
//! representable subset-free form and checks it before returning.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{GameForm, Strategy};

/// A witness that a form is not tree representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BadConfiguration {
    pub resource_a: usize,
    pub resource_b: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
}

impl BadConfiguration {
    /// Checks the defining memberships against `form`.
    pub fn holds_in(&self, form: &GameForm) -> bool {
        let (a, b) = (self.resource_a, self.resource_b);
        let (s1, s2, s3) = (form.strategy(self.s1), form.strategy(self.s2), form.strategy(self.s3));
        s1.contains(a)
            && s1.contains(b)
            && s2.contains(a)
            && !s3.contains(a)
            && s3.contains(b)
            && !s2.contains(b)
    }
}

/// First bad configuration in lexicographic order of `(a, b, s1, s2, s3)`.
pub fn find_bad_configuration(form: &GameForm) -> Option<BadConfiguration> {
    bad_configurations(form).next()
}

/// Every bad configuration, in lexicographic order of `(a, b, s1, s2, s3)`.
pub fn bad_configurations(form: &GameForm) -> impl Iterator<Item = BadConfiguration> + '_ {
    let n = form.num_resources();
    let strategies = form.strategies();
    let m = strategies.len();
    (0..n).flat_map(move |a| {
        (0..n).filter(move |&b| b != a).flat_map(move |b| {
            (0..m)
                .filter(move |&s1| strategies[s1].contains(a) && strategies[s1].contains(b))
                .flat_map(move |s1| {
                    (0..m)
                        .filter(move |&s2| strategies[s2].contains(a) && !strategies[s2].contains(b))
                        .flat_map(move |s2| {
                            (0..m)
                                .filter(move |&s3| strategies[s3].contains(b) && !strategies[s3].contains(a))
                                .map(move |s3| BadConfiguration { resource_a: a, resource_b: b, s1, s2, s3 })
                        })
                })
        })
    })
}

pub fn is_tree_representable(form: &GameForm) -> bool {
    find_bad_configuration(form).is_none()
}

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub resource: Option<usize>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub terminal: bool,
}

/// Rooted tree whose non-root nodes carry distinct resource labels. The
/// root-to-terminal paths induce a strategy set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTree {
    resources: Vec<String>,
    nodes: Vec<Node>,
}

impl RTree {
    pub const ROOT: NodeId = 0;

    pub fn new(resources: Vec<String>) -> Self {
        RTree {
            resources,
            nodes: vec![Node { resource: None, parent: None, children: Vec::new(), terminal: false }],
        }
    }

    pub fn resources(&self) -> &[String] {
        &self.resources
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn add_child(&mut self, parent: NodeId, resource: usize) -> Result<NodeId> {
        if resource >= self.resources.len() {
            return Err(Error::InvalidForm(format!("resource index {resource} outside the universe")));
        }
        if self.nodes.iter().any(|n| n.resource == Some(resource)) {
            return Err(Error::InvalidForm(format!(
                "resource {} already labels a node",
                self.resources[resource]
            )));
        }
        if self.nodes[parent].terminal {
            return Err(Error::InvalidForm("terminal nodes must stay leaves".into()));
        }
        let id = self.nodes.len();
        self.nodes.push(Node { resource: Some(resource), parent: Some(parent), children: Vec::new(), terminal: false });
        self.nodes[parent].children.push(id);
        Ok(id)
    }

    pub fn set_terminal(&mut self, node: NodeId) -> Result<()> {
        if node == Self::ROOT {
            return Err(Error::InvalidForm("the root cannot be terminal".into()));
        }
        if !self.nodes[node].children.is_empty() {
            return Err(Error::InvalidForm("only leaves can be terminal".into()));
        }
        self.nodes[node].terminal = true;
        Ok(())
    }

    pub fn find(&self, resource: usize) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.resource == Some(resource))
    }

    /// Exchanges the labels of the nodes carrying `a` and `b`.
    pub fn swap_resources(&mut self, a: usize, b: usize) -> Result<()> {
        let na = self.find(a).ok_or_else(|| Error::InvalidForm("resource not in tree".into()))?;
        let nb = self.find(b).ok_or_else(|| Error::InvalidForm("resource not in tree".into()))?;
        self.nodes[na].resource = Some(b);
        self.nodes[nb].resource = Some(a);
        Ok(())
    }

    /// Terminal nodes in depth-first preorder.
    pub fn terminals(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![Self::ROOT];
        while let Some(id) = stack.pop() {
            if self.nodes[id].terminal {
                out.push(id);
            }
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    /// Resource labels on the path from the root down to `node`.
    pub fn path(&self, node: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = Some(node);
        while let Some(id) = cur {
            if let Some(r) = self.nodes[id].resource {
                out.push(r);
            }
            cur = self.nodes[id].parent;
        }
        out.reverse();
        out
    }

    /// Indented outline, terminals marked with `*`.
    pub fn outline(&self) -> String {
        let mut out = String::from("(root)\n");
        self.outline_into(Self::ROOT, 1, &mut out);
        out
    }

    fn outline_into(&self, id: NodeId, depth: usize, out: &mut String) {
        for &c in &self.nodes[id].children {
            let node = &self.nodes[c];
            let name = &self.resources[node.resource.expect("labeled child")];
            let _ = writeln!(out, "{}{}{}", "  ".repeat(depth), name, if node.terminal { " *" } else { "" });
            self.outline_into(c, depth + 1, out);
        }
    }

    /// Machine-readable nested form: the root's children, each a
    /// `{resource, terminal, children}` record.
    pub fn nested(&self) -> Vec<TreeRecord> {
        self.nodes[Self::ROOT].children.iter().map(|&c| self.record(c)).collect()
    }

    fn record(&self, id: NodeId) -> TreeRecord {
        let node = &self.nodes[id];
        TreeRecord {
            resource: self.resources[node.resource.expect("labeled child")].clone(),
            terminal: node.terminal,
            children: node.children.iter().map(|&c| self.record(c)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeRecord {
    pub resource: String,
    pub terminal: bool,
    pub children: Vec<TreeRecord>,
}

/// The form induced by a tree: one strategy per terminal node, in preorder.
pub fn induced_strategies(tree: &RTree) -> Result<GameForm> {
    let strategies = tree.terminals().into_iter().map(|t| tree.path(t)).collect();
    GameForm::new(tree.resources.clone(), strategies)
}

/// True iff the tree induces exactly the form's strategy set.
pub fn verify_representation(form: &GameForm, tree: &RTree) -> bool {
    let Ok(induced) = induced_strategies(tree) else {
        return false;
    };
    let a: BTreeSet<Strategy> = form.strategies().iter().copied().collect();
    let b: BTreeSet<Strategy> = induced.strategies().iter().copied().collect();
    a == b && induced.num_strategies() == b.len()
}

/// Builds an R-tree by recursive factoring of common resources.
pub fn build_r_tree(form: &GameForm) -> Result<RTree> {
    if let Some((s, t)) = form.is_subset_free() {
        return Err(Error::Precondition(format!(
            "form is not subset-free: {} ⊂ {}",
            form.strategy_label(s),
            form.strategy_label(t)
        )));
    }
    if let Some(bad) = find_bad_configuration(form) {
        return Err(Error::NotRepresentable(format!(
            "bad configuration on {}, {}",
            form.resource_name(bad.resource_a),
            form.resource_name(bad.resource_b)
        )));
    }
    let tree = factor_tree(form)?;
    if !verify_representation(form, &tree) {
        return Err(Error::RepresentationBug("induced strategies differ from the form".into()));
    }
    Ok(tree)
}

/// The factoring step alone, without the bad-configuration precheck.
/// Fails with `NotRepresentable` when a component shares no common resource.
pub fn factor_tree(form: &GameForm) -> Result<RTree> {
    let mut tree = RTree::new(form.resources().to_vec());
    let members: Vec<Strategy> = form.strategies().to_vec();
    factor(&mut tree, RTree::ROOT, members, form)?;
    Ok(tree)
}

fn factor(tree: &mut RTree, at: NodeId, members: Vec<Strategy>, form: &GameForm) -> Result<()> {
    let common = members.iter().fold(Strategy::from_mask(u64::MAX), |acc, &s| acc.intersection(s));
    let mut node = at;
    for r in common.resources() {
        node = tree.add_child(node, r)?;
    }
    let rest: Vec<Strategy> = members.iter().map(|s| s.difference(common)).collect();
    if rest.iter().any(|s| s.is_empty()) {
        if rest.len() != 1 {
            return Err(Error::NotRepresentable("one strategy is the common part of several".into()));
        }
        if node == RTree::ROOT {
            return Err(Error::NotRepresentable("empty strategy".into()));
        }
        return tree.set_terminal(node);
    }
    let components = components(&rest);
    if components.len() == 1 && common.is_empty() {
        let labels: Vec<String> = members
            .iter()
            .filter_map(|&s| form.strategy_index(s))
            .map(|i| form.strategy_label(i))
            .collect();
        return Err(Error::NotRepresentable(format!(
            "strategies {{{}}} overlap without a common resource",
            labels.join(", ")
        )));
    }
    for group in components {
        factor(tree, node, group, form)?;
    }
    Ok(())
}

/// Connected components under "shares a resource", ordered by first member.
fn components(sets: &[Strategy]) -> Vec<Vec<Strategy>> {
    let mut label: Vec<Option<usize>> = vec![None; sets.len()];
    let mut groups = Vec::new();
    for start in 0..sets.len() {
        if label[start].is_some() {
            continue;
        }
        let g = groups.len();
        label[start] = Some(g);
        let mut stack = vec![start];
        let mut group = Vec::new();
        while let Some(i) = stack.pop() {
            group.push(i);
            for j in 0..sets.len() {
                if label[j].is_none() && sets[i].intersects(sets[j]) {
                    label[j] = Some(g);
                    stack.push(j);
                }
            }
        }
        group.sort_unstable();
        groups.push(group.into_iter().map(|i| sets[i]).collect());
    }
    groups
}

/// Parameters for [`random_tree_form_with`].
#[derive(Clone, Copy, Debug)]
pub struct TreeFormParams {
    /// Upper bound on the number of labeled nodes (resources).
    pub resource_budget: usize,
    /// Maximum root-to-leaf depth.
    pub depth_budget: usize,
    /// Upper bound on the number of leaves (strategies).
    pub max_strategies: usize,
}

/// Random tree-representable, subset-free form from a random R-tree.
pub fn random_tree_form(seed: u64, resource_budget: usize, depth_budget: usize) -> GameForm {
    random_tree_form_with(
        seed,
        TreeFormParams { resource_budget, depth_budget, max_strategies: resource_budget },
    )
}

pub fn random_tree_form_with(seed: u64, params: TreeFormParams) -> GameForm {
    assert!(params.resource_budget >= 1 && params.depth_budget >= 1 && params.max_strategies >= 1);
    let budget = params.resource_budget.min(crate::model::MAX_RESOURCES);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(1..=budget);

    // parent[i] for node i + 1; node 0 is the root.
    let mut parent: Vec<usize> = Vec::new();
    let mut depth = vec![0usize];
    let mut children = vec![0usize];
    let mut leaves = 0usize;
    while parent.len() < target {
        let candidates: Vec<usize> = (0..depth.len())
            .filter(|&n| depth[n] < params.depth_budget)
            .filter(|&n| {
                // extending a leaf keeps the leaf count; branching adds one
                let extends_leaf = n != 0 && children[n] == 0;
                extends_leaf || leaves < params.max_strategies
            })
            .collect();
        if candidates.is_empty() {
            break;
        }
        let p = candidates[rng.gen_range(0..candidates.len())];
        if p == 0 || children[p] > 0 {
            leaves += 1;
        }
        children[p] += 1;
        parent.push(p);
        depth.push(depth[p] + 1);
        children.push(0);
    }

    let used = parent.len();
    let mut labels: Vec<usize> = (0..used).collect();
    for i in (1..used).rev() {
        let j = rng.gen_range(0..=i);
        labels.swap(i, j);
    }
    let names = (0..used).map(resource_name).collect();
    let mut strategies = Vec::new();
    for (node, &count) in children.iter().enumerate().skip(1) {
        if count == 0 {
            let mut path = Vec::new();
            let mut cur = node;
            while cur != 0 {
                path.push(labels[cur - 1]);
                cur = parent[cur - 1];
            }
            path.reverse();
            strategies.push(path);
        }
    }
    GameForm::new(names, strategies).expect("tree forms are valid")
}

/// Calls `visit` with every subset-free family of at most `max_strategies`
/// nonempty subsets of `resources` resources, as ascending bit masks.
pub fn for_each_subset_free_family(resources: usize, max_strategies: usize, mut visit: impl FnMut(&[u64])) {
    fn go(all: &[u64], from: usize, chosen: &mut Vec<u64>, max: usize, visit: &mut dyn FnMut(&[u64])) {
        if !chosen.is_empty() {
            visit(chosen);
        }
        if chosen.len() == max {
            return;
        }
        for i in from..all.len() {
            let s = all[i];
            if chosen.iter().all(|&t| s & !t != 0 && t & !s != 0) {
                chosen.push(s);
                go(all, i + 1, chosen, max, visit);
                chosen.pop();
            }
        }
    }
    let all: Vec<u64> = (1..(1u64 << resources)).collect();
    go(&all, 0, &mut Vec::new(), max_strategies, &mut visit);
}

/// `A`..`Z`, then `R26`, `R27`, ...
pub fn resource_name(index: usize) -> String {
    if index < 26 {
        ((b'A' + index as u8) as char).to_string()
    } else {
        format!("R{index}")
    }
}
