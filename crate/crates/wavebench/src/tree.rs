//! Finite trees of matroids of overlap 1 and their assembled matroids.
//!
//! Adjacent nodes share exactly one dummy element; the global ground set is
//! the union of the node grounds minus all dummies. A precircuit is a
//! connected subtree with a circuit choice per node, each circuit using
//! exactly the dummies toward the other chosen nodes; the minimal nonempty
//! underlying sets of precircuits are the circuits of the assembled
//! matroid. On finite trees the end machinery is vacuous, so it does not
//! appear in this API.

use std::collections::BTreeMap;

use crate::arena::Arena;
use crate::error::{Error, Result};
use crate::ground::{GroundSet, Mask};
use crate::matroid::{Matroid, MatroidPair};

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub id: String,
    pub matroid: Matroid,
    pub parent: Option<usize>,
    /// Name of the dummy shared with the parent.
    pub parent_dummy: Option<String>,
    pub children: Vec<usize>,
}

/// A rooted tree of matroids of overlap 1 (node 0 is the root).
#[derive(Clone, Debug)]
pub struct MatroidTree {
    pub nodes: Vec<TreeNode>,
    ground: GroundSet,
}

/// A connected subtree with a circuit per node (node-local masks), indexed
/// by the tree's node indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Precircuit {
    pub nodes: Vec<usize>,
    pub circuits: Vec<Mask>,
}

impl Precircuit {
    pub fn circuit_at(&self, node: usize) -> Option<Mask> {
        self.nodes.iter().position(|&t| t == node).map(|i| self.circuits[i])
    }
}

fn is_dummy(node: &TreeNode, tree: &MatroidTree, name: &str) -> bool {
    if node.parent_dummy.as_deref() == Some(name) {
        return true;
    }
    node.children.iter().any(|&c| tree.nodes[c].parent_dummy.as_deref() == Some(name))
}

impl MatroidTree {
    /// Build from per-node matroids and parent links; node 0 must be the
    /// root and children must come after their parents.
    pub fn new(nodes: Vec<TreeNode>) -> Result<MatroidTree> {
        if nodes.is_empty() {
            return Err(Error::invalid("tree needs at least one node"));
        }
        if nodes[0].parent.is_some() {
            return Err(Error::invalid("node 0 must be the root"));
        }
        for (i, n) in nodes.iter().enumerate().skip(1) {
            match (n.parent, &n.parent_dummy) {
                (Some(p), Some(d)) => {
                    if p >= i {
                        return Err(Error::invalid("children must come after their parent"));
                    }
                    if nodes[p].matroid.ground().index_of(d).is_none()
                        || n.matroid.ground().index_of(d).is_none()
                    {
                        return Err(Error::invalid(format!(
                            "dummy `{d}` must lie in both endpoint grounds"
                        )));
                    }
                }
                _ => return Err(Error::invalid("non-root nodes need a parent and dummy")),
            }
        }
        // grounds disjoint except for the tree-edge dummies
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate().skip(i + 1) {
                let shared: Vec<&String> = a
                    .matroid
                    .ground()
                    .names()
                    .iter()
                    .filter(|x| b.matroid.ground().index_of(x).is_some())
                    .collect();
                let edge_dummy = if nodes[j].parent == Some(i) {
                    nodes[j].parent_dummy.clone()
                } else if nodes[i].parent == Some(j) {
                    nodes[i].parent_dummy.clone()
                } else {
                    None
                };
                match edge_dummy {
                    Some(d) => {
                        if shared.len() != 1 || shared[0] != &d {
                            return Err(Error::invalid(format!(
                                "adjacent nodes `{}`, `{}` must share exactly the dummy `{d}`",
                                a.id, b.id
                            )));
                        }
                    }
                    None => {
                        if !shared.is_empty() {
                            return Err(Error::invalid(format!(
                                "non-adjacent nodes `{}`, `{}` share elements",
                                a.id, b.id
                            )));
                        }
                    }
                }
            }
        }
        let mut names = Vec::new();
        let mut tree = MatroidTree { nodes, ground: GroundSet::new(Vec::<String>::new())? };
        for n in &tree.nodes {
            for name in n.matroid.ground().names() {
                if !is_dummy(n, &tree, name) {
                    names.push(name.clone());
                }
            }
        }
        tree.ground = GroundSet::new(names)?;
        Ok(tree)
    }

    /// The global ground set: node grounds in tree order, minus dummies.
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node-local mask of the dummies of `t`.
    pub fn dummy_mask(&self, t: usize) -> Mask {
        let node = &self.nodes[t];
        let g = node.matroid.ground();
        let mut m = Mask::EMPTY;
        for i in 0..g.len() {
            if is_dummy(node, self, g.name(i)) {
                m = m.with(i);
            }
        }
        m
    }

    /// Translate a node-local mask to the global ground (dummies dropped).
    pub fn node_to_global(&self, t: usize, local: Mask) -> Mask {
        let g = self.nodes[t].matroid.ground();
        let mut out = Mask::EMPTY;
        for i in local.iter() {
            if let Some(j) = self.ground.index_of(g.name(i)) {
                out = out.with(j);
            }
        }
        out
    }

    /// Translate a global mask into node-local coordinates.
    pub fn global_to_node(&self, t: usize, global: Mask) -> Mask {
        let g = self.nodes[t].matroid.ground();
        let mut out = Mask::EMPTY;
        for i in global.iter() {
            if let Some(j) = g.index_of(self.ground.name(i)) {
                out = out.with(j);
            }
        }
        out
    }

    fn connected(&self, node_set: u32) -> bool {
        if node_set == 0 {
            return false;
        }
        let start = node_set.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            let mut nbrs = self.nodes[t].children.clone();
            if let Some(p) = self.nodes[t].parent {
                nbrs.push(p);
            }
            for u in nbrs {
                if node_set >> u & 1 == 1 && seen >> u & 1 == 0 {
                    seen |= 1 << u;
                    stack.push(u);
                }
            }
        }
        seen == node_set
    }

    /// All precircuits together with their (possibly empty, possibly
    /// non-minimal) underlying sets, in canonical order.
    pub fn all_precircuits(&self) -> Vec<(Precircuit, Mask)> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        for node_set in 1u32..(1 << n) {
            if !self.connected(node_set) {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&t| node_set >> t & 1 == 1).collect();
            // per node: circuits using exactly the dummies toward members
            let mut options: Vec<Vec<Mask>> = Vec::with_capacity(members.len());
            for &t in &members {
                let g = self.nodes[t].matroid.ground();
                let mut required = Mask::EMPTY;
                let all_dummies = self.dummy_mask(t);
                let mut toward = |other: usize, d: &str| {
                    if node_set >> other & 1 == 1 {
                        required = required.with(g.index_of(d).unwrap());
                    }
                };
                if let (Some(p), Some(d)) = (self.nodes[t].parent, &self.nodes[t].parent_dummy) {
                    toward(p, d);
                }
                for &c in &self.nodes[t].children {
                    let d = self.nodes[c].parent_dummy.clone().unwrap();
                    toward(c, &d);
                }
                let opts: Vec<Mask> = self.nodes[t]
                    .matroid
                    .circuits()
                    .into_iter()
                    .filter(|&c| c.intersect(all_dummies) == required)
                    .collect();
                options.push(opts);
            }
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            // product over the options, odometer order
            let mut idx = vec![0usize; members.len()];
            loop {
                let circuits: Vec<Mask> =
                    idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                let mut underlying = Mask::EMPTY;
                for (k, &t) in members.iter().enumerate() {
                    underlying = underlying.union(self.node_to_global(t, circuits[k]));
                }
                out.push((Precircuit { nodes: members.clone(), circuits }, underlying));
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < options[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        out
    }

    /// The assembled circuits: minimal nonempty underlying sets of
    /// precircuits, each with one witnessing precircuit.
    pub fn psi_circuits(&self) -> Vec<(Mask, Precircuit)> {
        let mut by_set: BTreeMap<Mask, Precircuit> = BTreeMap::new();
        for (pc, underlying) in self.all_precircuits() {
            if !underlying.is_empty() {
                by_set.entry(underlying).or_insert(pc);
            }
        }
        let sets: Vec<Mask> = by_set.keys().copied().collect();
        by_set
            .into_iter()
            .filter(|(s, _)| !sets.iter().any(|&t| t != *s && t.is_subset_of(*s)))
            .collect()
    }

    /// Assemble the matroid whose circuits are the precircuit minima. The
    /// circuit axioms are re-validated; a failure would contradict the
    /// finite assembly theorem and is reported as such.
    pub fn assemble(&self) -> Result<Matroid> {
        let circuits: Vec<Mask> = self.psi_circuits().into_iter().map(|(c, _)| c).collect();
        Matroid::from_circuits(self.ground.clone(), &circuits).map_err(|e| match e {
            Error::NotAMatroid(msg) => {
                Error::TheoremViolation(format!("assembled circuit family is not a matroid: {msg}"))
            }
            other => other,
        })
    }

    /// Validate a precircuit: connected nodes, genuine node circuits, and
    /// the dummy condition in both directions.
    pub fn check_precircuit(&self, pc: &Precircuit) -> Result<()> {
        if pc.nodes.len() != pc.circuits.len() || pc.nodes.is_empty() {
            return Err(Error::invalid("malformed precircuit"));
        }
        let mut node_set = 0u32;
        for &t in &pc.nodes {
            node_set |= 1 << t;
        }
        if !self.connected(node_set) {
            return Err(Error::invalid("precircuit nodes not connected"));
        }
        for (&t, &c) in pc.nodes.iter().zip(&pc.circuits) {
            let mat = &self.nodes[t].matroid;
            if mat.indep(c) || !c.iter().all(|i| mat.indep(c.without(i))) {
                return Err(Error::invalid("precircuit entry is not a circuit"));
            }
            let g = mat.ground();
            let check = |other: usize, d: &str| -> Result<()> {
                let di = g.index_of(d).unwrap();
                if c.contains(di) != (node_set >> other & 1 == 1) {
                    return Err(Error::invalid(format!(
                        "dummy `{d}` membership disagrees with subtree at node {t}"
                    )));
                }
                Ok(())
            };
            if let (Some(p), Some(d)) = (self.nodes[t].parent, &self.nodes[t].parent_dummy) {
                check(p, d)?;
            }
            for &ch in &self.nodes[t].children {
                let d = self.nodes[ch].parent_dummy.clone().unwrap();
                check(ch, &d)?;
            }
        }
        Ok(())
    }

    pub fn underlying_set(&self, pc: &Precircuit) -> Mask {
        let mut u = Mask::EMPTY;
        for (&t, &c) in pc.nodes.iter().zip(&pc.circuits) {
            u = u.union(self.node_to_global(t, c));
        }
        u
    }

    /// Node-wise minor by global subsets (which never touch dummies).
    pub fn tree_minor(&self, contract: Mask, delete: Mask) -> Result<MatroidTree> {
        let full = self.ground.full_mask();
        if !contract.union(delete).is_subset_of(full) || contract.intersects(delete) {
            return Err(Error::invalid("minor sets must be disjoint subsets of the ground"));
        }
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(t, n)| {
                let c = self.global_to_node(t, contract);
                let d = self.global_to_node(t, delete);
                Ok(TreeNode { matroid: n.matroid.minor(c, d)?, ..n.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        MatroidTree::new(nodes)
    }

    /// The subtree hanging at `t` (including `t`), re-rooted there; the
    /// dummy toward the old parent becomes an ordinary ground element.
    pub fn subtree(&self, t: usize) -> MatroidTree {
        let mut members = Vec::new();
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            members.push(u);
            stack.extend(self.nodes[u].children.iter().copied());
        }
        members.sort();
        let index_of = |u: usize| members.iter().position(|&v| v == u).unwrap();
        let nodes = members
            .iter()
            .map(|&u| {
                let n = &self.nodes[u];
                let children = n.children.iter().map(|&c| index_of(c)).collect();
                if u == t {
                    TreeNode { parent: None, parent_dummy: None, children, ..n.clone() }
                } else {
                    TreeNode {
                        parent: Some(index_of(n.parent.unwrap())),
                        children,
                        ..n.clone()
                    }
                }
            })
            .collect();
        MatroidTree::new(nodes).expect("subtree of a valid tree is valid")
    }

    /// The tree with the subtree hanging at `t` removed (`t` must not be
    /// the root); the dummy toward `t` becomes ordinary in the remainder.
    pub fn without_subtree(&self, t: usize) -> MatroidTree {
        assert!(self.nodes[t].parent.is_some(), "cannot remove the root subtree");
        let mut removed = vec![false; self.nodes.len()];
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            removed[u] = true;
            stack.extend(self.nodes[u].children.iter().copied());
        }
        let members: Vec<usize> = (0..self.nodes.len()).filter(|&u| !removed[u]).collect();
        let index_of = |u: usize| members.iter().position(|&v| v == u).unwrap();
        let nodes = members
            .iter()
            .map(|&u| {
                let n = &self.nodes[u];
                TreeNode {
                    parent: n.parent.map(index_of),
                    children: n.children.iter().filter(|&&c| !removed[c]).map(|&c| index_of(c)).collect(),
                    ..n.clone()
                }
            })
            .collect();
        MatroidTree::new(nodes).expect("remainder of a valid tree is valid")
    }

    /// Compatible witnessing precircuits: for every node `t` whose parent
    /// dummy is spanned by `X ∩ E(subtree(t))` in the assembled subtree
    /// matroid, a precircuit of that subtree (in whole-tree node indices)
    /// with `e(t⁻t) ∈ underlying ⊆ X + e(t⁻t)`, such that any two chosen
    /// precircuits agree on shared nodes. Nodes are processed by height,
    /// reusing the minimal earlier choice that covers them.
    pub fn pick_compatible_precircuits(&self, x: Mask) -> Result<Vec<(usize, Precircuit)>> {
        if !x.is_subset_of(self.ground.full_mask()) {
            return Err(Error::invalid("X outside ground"));
        }
        let mut picked: Vec<Option<Precircuit>> = vec![None; self.nodes.len()];
        let mut result = Vec::new();
        for t in 1..self.nodes.len() {
            let sub = self.subtree(t);
            let dummy = self.nodes[t].parent_dummy.clone().unwrap();
            let assembled = sub.assemble()?;
            let e_sub = assembled.ground().index_of(&dummy).unwrap();
            let x_sub = self.ground.translate(
                x.intersect(translate_ground_mask(&sub, &self.ground)),
                assembled.ground(),
            )?;
            if !assembled.spans(x_sub, Mask::singleton(e_sub)) {
                continue;
            }
            // inherit from the minimal earlier pick containing t
            let mut inherited = None;
            for s in 1..t {
                if let Some(pc) = &picked[s] {
                    if pc.nodes.contains(&t) {
                        inherited = Some(pc.clone());
                        break;
                    }
                }
            }
            let pc = match inherited {
                Some(parent_pc) => {
                    let sub_nodes: Vec<usize> = {
                        let mut m = Vec::new();
                        let mut stack = vec![t];
                        while let Some(u) = stack.pop() {
                            m.push(u);
                            stack.extend(self.nodes[u].children.iter().copied());
                        }
                        m
                    };
                    let keep: Vec<usize> = parent_pc
                        .nodes
                        .iter()
                        .copied()
                        .filter(|u| sub_nodes.contains(u))
                        .collect();
                    let circuits = keep
                        .iter()
                        .map(|&u| parent_pc.circuit_at(u).unwrap())
                        .collect();
                    Precircuit { nodes: keep, circuits }
                }
                None => {
                    let mut found = None;
                    for (circ, pc_sub) in sub.psi_circuits() {
                        if circ.contains(e_sub) && circ.without(e_sub).is_subset_of(x_sub) {
                            // re-index precircuit nodes to whole-tree indices
                            let members: Vec<usize> = {
                                let mut m = Vec::new();
                                let mut stack = vec![t];
                                while let Some(u) = stack.pop() {
                                    m.push(u);
                                    stack.extend(self.nodes[u].children.iter().copied());
                                }
                                m.sort();
                                m
                            };
                            let nodes: Vec<usize> =
                                pc_sub.nodes.iter().map(|&u| members[u]).collect();
                            found = Some(Precircuit { nodes, circuits: pc_sub.circuits });
                            break;
                        }
                    }
                    found.ok_or_else(|| {
                        Error::TheoremViolation(format!(
                            "dummy `{dummy}` spanned but no witnessing precircuit"
                        ))
                    })?
                }
            };
            picked[t] = Some(pc.clone());
            result.push((t, pc));
        }
        // witnessing inclusion per pick, compatibility verified pairwise
        for (t, pc) in &result {
            self.check_precircuit_in_subtree(*t, pc)?;
            let underlying = self.underlying_set_with_dummy(pc);
            let dummy = self.nodes[*t].parent_dummy.as_ref().unwrap();
            let sub = self.subtree(*t);
            let d_mask = {
                let g = sub.ground();
                let allowed = self.ground.translate(
                    x.intersect(translate_ground_mask(&sub, &self.ground)),
                    g,
                )?;
                allowed.with(g.index_of(dummy).unwrap())
            };
            if !underlying.0.is_subset_of(d_mask) || !underlying.0.contains(underlying.1) {
                return Err(Error::TheoremViolation(format!(
                    "pick for `{dummy}` misses the witnessing inclusion"
                )));
            }
        }
        for (i, (_, a)) in result.iter().enumerate() {
            for (_, b) in result.iter().skip(i + 1) {
                for &w in a.nodes.iter().filter(|w| b.nodes.contains(w)) {
                    if a.circuit_at(w) != b.circuit_at(w) {
                        return Err(Error::TheoremViolation(format!(
                            "incompatible precircuit choices at node {w}"
                        )));
                    }
                }
            }
        }
        Ok(result)
    }

    /// Check a precircuit expressed in whole-tree node indices against the
    /// subtree at `t`.
    fn check_precircuit_in_subtree(&self, t: usize, pc: &Precircuit) -> Result<()> {
        let sub = self.subtree(t);
        let mut members = Vec::new();
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            members.push(u);
            stack.extend(self.nodes[u].children.iter().copied());
        }
        members.sort();
        let local = Precircuit {
            nodes: pc
                .nodes
                .iter()
                .map(|u| {
                    members
                        .iter()
                        .position(|&v| v == *u)
                        .ok_or_else(|| Error::invalid("precircuit leaves the subtree"))
                })
                .collect::<Result<Vec<_>>>()?,
            circuits: pc.circuits.clone(),
        };
        sub.check_precircuit(&local)
    }

    /// Underlying set of a subtree precircuit within the subtree's ground
    /// (which includes the parent dummy), plus that dummy's index there.
    fn underlying_set_with_dummy(&self, pc: &Precircuit) -> (Mask, usize) {
        let t = *pc.nodes.iter().min().unwrap();
        let sub = self.subtree(t);
        let mut members = Vec::new();
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            members.push(u);
            stack.extend(self.nodes[u].children.iter().copied());
        }
        members.sort();
        let mut out = Mask::EMPTY;
        for (&u, &c) in pc.nodes.iter().zip(&pc.circuits) {
            let local_idx = members.iter().position(|&v| v == u).unwrap();
            out = out.union(sub.node_to_global(local_idx, c));
        }
        let dummy = self.nodes[t].parent_dummy.as_ref().unwrap();
        (out, sub.ground().index_of(dummy).unwrap())
    }
}

/// The mask of `sub`'s ground within `outer` (shared names only).
fn translate_ground_mask(sub: &MatroidTree, outer: &GroundSet) -> Mask {
    let mut m = Mask::EMPTY;
    for name in sub.ground().names() {
        if let Some(i) = outer.index_of(name) {
            m = m.with(i);
        }
    }
    m
}

/// Two trees of matroids over the same shape and node grounds, with a
/// designated lower edge in the root's ground.
#[derive(Clone, Debug)]
pub struct PairTree {
    pub m: MatroidTree,
    pub n: MatroidTree,
    /// Name of the designated lower edge of the root.
    pub lower: String,
}

impl PairTree {
    pub fn new(m: MatroidTree, n: MatroidTree, lower: impl Into<String>) -> Result<PairTree> {
        let lower = lower.into();
        if m.len() != n.len() {
            return Err(Error::invalid("side trees differ in shape"));
        }
        for (a, b) in m.nodes.iter().zip(&n.nodes) {
            if a.id != b.id
                || a.parent != b.parent
                || a.parent_dummy != b.parent_dummy
                || a.matroid.ground() != b.matroid.ground()
            {
                return Err(Error::invalid("side trees differ in shape or node grounds"));
            }
        }
        if m.ground().index_of(&lower).is_none() {
            return Err(Error::invalid(format!(
                "lower edge `{lower}` must be a non-dummy element of the ground"
            )));
        }
        if m.nodes[0].matroid.ground().index_of(&lower).is_none() {
            return Err(Error::invalid(format!("lower edge `{lower}` must lie in the root node")));
        }
        Ok(PairTree { m, n, lower })
    }

    pub fn ground(&self) -> &GroundSet {
        self.m.ground()
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Assemble both sides into a matroid pair on the global ground.
    pub fn assemble(&self) -> Result<MatroidPair> {
        MatroidPair::new(self.m.assemble()?, self.n.assemble()?)
    }

    /// The arena of a node: upper edges are the dummies toward children,
    /// the lower edge is the dummy toward the parent (the designated lower
    /// edge at the root).
    pub fn arena_at(&self, t: usize) -> Result<Arena> {
        if t >= self.len() {
            return Err(Error::invalid("no such node"));
        }
        let g = self.m.nodes[t].matroid.ground();
        let pair =
            MatroidPair::new(self.m.nodes[t].matroid.clone(), self.n.nodes[t].matroid.clone())?;
        let mut upper = Mask::EMPTY;
        for &c in &self.m.nodes[t].children {
            let d = self.m.nodes[c].parent_dummy.as_ref().unwrap();
            upper = upper.with(g.index_of(d).unwrap());
        }
        let lower_name = match &self.m.nodes[t].parent_dummy {
            Some(d) => d.clone(),
            None => self.lower.clone(),
        };
        Arena::new(pair, upper, g.index_of(&lower_name).unwrap())
    }

    /// Node-wise dual of both sides (the covering game's board).
    pub fn dual(&self) -> PairTree {
        let dualize = |tree: &MatroidTree| {
            let nodes = tree
                .nodes
                .iter()
                .map(|n| TreeNode { matroid: n.matroid.dual(), ..n.clone() })
                .collect();
            MatroidTree::new(nodes).expect("dual tree is valid")
        };
        PairTree { m: dualize(&self.m), n: dualize(&self.n), lower: self.lower.clone() }
    }

    /// Both sides restricted to the subtree at `t`, the parent dummy
    /// becoming the lower edge.
    pub fn subtree(&self, t: usize) -> PairTree {
        let lower = match &self.m.nodes[t].parent_dummy {
            Some(d) => d.clone(),
            None => self.lower.clone(),
        };
        PairTree { m: self.m.subtree(t), n: self.n.subtree(t), lower }
    }

    /// Both sides with the subtree at `t` removed.
    pub fn without_subtree(&self, t: usize) -> PairTree {
        PairTree {
            m: self.m.without_subtree(t),
            n: self.n.without_subtree(t),
            lower: self.lower.clone(),
        }
    }
}

/// Node-wise minors agree with assembled minors.
pub fn verify_tom_minor(tree: &MatroidTree, contract: Mask, delete: Mask) -> Result<bool> {
    let minor_then_assemble = tree.tree_minor(contract, delete)?.assemble()?;
    let assemble_then_minor = tree.assemble()?.minor(contract, delete)?;
    Ok(minor_then_assemble == assemble_then_minor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(m: usize, names: &[&str]) -> Matroid {
        Matroid::uniform(m, GroundSet::new(names.to_vec()).unwrap()).unwrap()
    }

    /// Two U_{1,2} nodes glued at p: {e,p} -- p -- {p,g}.
    fn two_node_tree() -> PairTree {
        let mk = |_: ()| {
            MatroidTree::new(vec![
                TreeNode {
                    id: "t0".into(),
                    matroid: u(1, &["e", "p"]),
                    parent: None,
                    parent_dummy: None,
                    children: vec![1],
                },
                TreeNode {
                    id: "t1".into(),
                    matroid: u(1, &["p", "g"]),
                    parent: Some(0),
                    parent_dummy: Some("p".into()),
                    children: vec![],
                },
            ])
            .unwrap()
        };
        PairTree::new(mk(()), mk(()), "e").unwrap()
    }

    #[test]
    fn two_node_psi_circuits() {
        let tree = two_node_tree();
        let circs = tree.m.psi_circuits();
        assert_eq!(circs.len(), 1);
        let g = tree.ground().clone();
        assert_eq!(g.show(circs[0].0), "{e,g}");
        tree.m.check_precircuit(&circs[0].1).unwrap();
    }

    #[test]
    fn single_node_assembly_is_identity() {
        let m = u(1, &["a", "b"]);
        let tree = MatroidTree::new(vec![TreeNode {
            id: "t0".into(),
            matroid: m.clone(),
            parent: None,
            parent_dummy: None,
            children: vec![],
        }])
        .unwrap();
        assert_eq!(tree.assemble().unwrap(), m);
    }

    #[test]
    fn assembly_matches_two_sum() {
        let tree = two_node_tree();
        let assembled = tree.m.assemble().unwrap();
        let by_two_sum =
            Matroid::two_sum(&u(1, &["e", "p"]), &u(1, &["p", "g"]), "p").unwrap();
        assert_eq!(assembled, by_two_sum);
    }

    #[test]
    fn three_node_path_of_parallel_pairs() {
        // U_{1,2} chained: {a,p} - {p,q} - {q,b} assembles to U_{1,2} on {a,b}
        let mk = || {
            MatroidTree::new(vec![
                TreeNode {
                    id: "t0".into(),
                    matroid: u(1, &["a", "p"]),
                    parent: None,
                    parent_dummy: None,
                    children: vec![1],
                },
                TreeNode {
                    id: "t1".into(),
                    matroid: u(1, &["p", "q"]),
                    parent: Some(0),
                    parent_dummy: Some("p".into()),
                    children: vec![2],
                },
                TreeNode {
                    id: "t2".into(),
                    matroid: u(1, &["q", "b"]),
                    parent: Some(1),
                    parent_dummy: Some("q".into()),
                    children: vec![],
                },
            ])
            .unwrap()
        };
        let assembled = mk().assemble().unwrap();
        assert_eq!(assembled, u(1, &["a", "b"]));
    }

    #[test]
    fn node_circuit_without_dummies_survives() {
        // a loop at a leaf node appears unchanged in the assembly
        let loop_b = Matroid::from_circuits(
            GroundSet::new(["p", "b"]).unwrap(),
            &[Mask(0b10)],
        )
        .unwrap();
        let tree = MatroidTree::new(vec![
            TreeNode {
                id: "t0".into(),
                matroid: u(1, &["a", "p"]),
                parent: None,
                parent_dummy: None,
                children: vec![1],
            },
            TreeNode {
                id: "t1".into(),
                matroid: loop_b,
                parent: Some(0),
                parent_dummy: Some("p".into()),
                children: vec![],
            },
        ])
        .unwrap();
        let circs: Vec<Mask> = tree.psi_circuits().into_iter().map(|(c, _)| c).collect();
        let g = tree.ground();
        assert!(circs.contains(&g.mask_of(["b"]).unwrap()));
    }

    #[test]
    fn tom_minor_identity_and_deletion() {
        let tree = two_node_tree();
        assert!(verify_tom_minor(&tree.m, Mask::EMPTY, Mask::EMPTY).unwrap());
        let g = tree.ground().clone();
        let a = g.mask_of(["e"]).unwrap();
        assert!(verify_tom_minor(&tree.m, Mask::EMPTY, a).unwrap());
        assert!(verify_tom_minor(&tree.m, a, Mask::EMPTY).unwrap());
    }

    #[test]
    fn arena_at_examples() {
        let tree = two_node_tree();
        let root = tree.arena_at(0).unwrap();
        assert_eq!(root.ground().show(root.upper), "{p}");
        assert_eq!(root.ground().name(root.lower), "e");
        let leaf = tree.arena_at(1).unwrap();
        assert!(leaf.upper.is_empty());
        assert_eq!(leaf.ground().name(leaf.lower), "p");
    }

    #[test]
    fn pick_compatible_on_two_node_tree() {
        // X = {g}: p is spanned in the subtree at t1; circuit {p,g}
        let tree = two_node_tree();
        let x = tree.ground().mask_of(["g"]).unwrap();
        let picks = tree.m.pick_compatible_precircuits(x).unwrap();
        assert_eq!(picks.len(), 1);
        let (t, pc) = &picks[0];
        assert_eq!(*t, 1);
        let local = pc.circuit_at(1).unwrap();
        assert_eq!(tree.m.nodes[1].matroid.ground().show(local), "{p,g}");

        // X = ∅: nothing spanned
        assert!(tree.m.pick_compatible_precircuits(Mask::EMPTY).unwrap().is_empty());
    }

    #[test]
    fn assembled_circuits_respect_tree_paths() {
        // the witness precircuit of any circuit meeting the grounds of two
        // non-adjacent nodes passes through every node between them
        let mk = |r1: usize| {
            MatroidTree::new(vec![
                TreeNode {
                    id: "t0".into(),
                    matroid: u(1, &["a", "p"]),
                    parent: None,
                    parent_dummy: None,
                    children: vec![1],
                },
                TreeNode {
                    id: "t1".into(),
                    matroid: u(r1, &["p", "c", "q"]),
                    parent: Some(0),
                    parent_dummy: Some("p".into()),
                    children: vec![2],
                },
                TreeNode {
                    id: "t2".into(),
                    matroid: u(1, &["q", "b"]),
                    parent: Some(1),
                    parent_dummy: Some("q".into()),
                    children: vec![],
                },
            ])
            .unwrap()
        };
        for r1 in 1..=2 {
            let tree = mk(r1);
            let g = tree.ground().clone();
            for (c, pc) in tree.psi_circuits() {
                tree.check_precircuit(&pc).unwrap();
                if c.intersects(g.mask_of(["a"]).unwrap())
                    && c.intersects(g.mask_of(["b"]).unwrap())
                {
                    assert_eq!(pc.nodes, vec![0, 1, 2], "path node skipped for {}", g.show(c));
                }
            }
        }
    }

    #[test]
    fn pick_compatible_on_random_trees() {
        // picks re-verify: witnessing inclusion plus pairwise agreement
        // (both asserted inside the operation)
        for seed in 0..40u64 {
            let tree = crate::gen::random_pairtree(seed, 4, 4);
            let full = tree.ground().full_mask();
            let x = Mask((seed as u32).wrapping_mul(2654435761) % (full.0 + 1)).intersect(full);
            tree.m.pick_compatible_precircuits(x).unwrap();
            tree.n.pick_compatible_precircuits(full).unwrap();
        }
    }

    #[test]
    fn precircuit_underlying_is_union_of_circuits() {
        let tree = two_node_tree();
        let circuits: Vec<Mask> = tree.m.psi_circuits().into_iter().map(|(c, _)| c).collect();
        for (_, underlying) in tree.m.all_precircuits() {
            if underlying.is_empty() {
                continue;
            }
            let mut covered = Mask::EMPTY;
            for &c in circuits.iter().filter(|c| c.is_subset_of(underlying)) {
                covered = covered.union(c);
            }
            assert_eq!(covered, underlying);
        }
    }
}
