//! The Packing game and the Covering game on finite trees of matroids.
//!
//! Packer plays tactics attaining the current promise in the current
//! node's arena; Coverina challenges an upper edge with a non-`⊥` label,
//! moving play to the child behind it. On a finite tree every play ends
//! with a stuck player, and a player with no legal move loses: Coverina
//! stuck means Packer has packed the reachable subtree, Packer stuck means
//! the promise was unattainable. This convention is not assumed but
//! validated: the solver's winner must coincide with direct wave search in
//! the assembled pair (the finite game/wave equivalence suite).
//!
//! The Covering game is the Packing game on the node-wise dual board with
//! starred promises and the players' roles reversed.

use std::collections::BTreeMap;

use crate::arena::Arena;
use crate::error::{Error, Result};
use crate::ground::Mask;
use crate::promise::{Base, Promise, BASES};
use crate::tactics::{first_completion, verify_tactic, Phi, Tactic};
use crate::tree::{PairTree, Precircuit};
use crate::waves::{verify_wave, Wave};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Player {
    Packer,
    Coverina,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Packer => Player::Coverina,
            Player::Coverina => Player::Packer,
        }
    }
}

/// A position with Packer to move (the edge is the lower edge of the
/// node's arena).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GameState {
    pub node: usize,
    pub promise: Base,
}

/// Per-node, per-promise table of positions Packer wins.
#[derive(Clone, Debug)]
pub struct WinTable {
    pub win: Vec<[bool; 6]>,
}

impl WinTable {
    pub fn packer_wins(&self, state: GameState) -> bool {
        self.win[state.node][state.promise as usize]
    }

    /// The set of promises Packer can win from at a node.
    pub fn promises_at(&self, node: usize) -> Vec<Base> {
        BASES.iter().copied().filter(|&b| self.win[node][b as usize]).collect()
    }
}

/// Packer's strategy: a tactic for every reachable winning state.
#[derive(Clone, Debug)]
pub struct PackerStrategy {
    pub moves: BTreeMap<GameState, Tactic>,
}

/// Coverina's strategy, represented by the rule "challenge the least
/// labelled edge whose child position Packer does not win".
#[derive(Clone, Debug)]
pub struct CoverinaStrategy {
    pub table: WinTable,
}

#[derive(Clone, Debug)]
pub enum Strategy {
    Packer(PackerStrategy),
    Coverina(CoverinaStrategy),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum GameKind {
    Packing,
    Covering,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub kind: GameKind,
    /// Winner in the labels of the game that was asked for.
    pub winner: Player,
    /// Solved on the packing board (the dual board for the covering game).
    pub table: WinTable,
    pub strategy: Strategy,
    pub initial: GameState,
}

/// Everything the backward induction needs about one board.
pub struct Board {
    pub tree: PairTree,
    pub arenas: Vec<Arena>,
    /// upper-edge element (node-local) -> child node index
    pub child_of: Vec<BTreeMap<usize, usize>>,
    m_circuits: Vec<Vec<Mask>>,
    n_circuits: Vec<Vec<Mask>>,
}

impl Board {
    pub fn new(tree: &PairTree) -> Result<Board> {
        let mut arenas = Vec::new();
        let mut child_of = Vec::new();
        let mut m_circuits = Vec::new();
        let mut n_circuits = Vec::new();
        for t in 0..tree.len() {
            let arena = tree.arena_at(t)?;
            let g = arena.ground().clone();
            let mut map = BTreeMap::new();
            for &c in &tree.m.nodes[t].children {
                let d = tree.m.nodes[c].parent_dummy.as_ref().unwrap();
                map.insert(g.index_of(d).unwrap(), c);
            }
            m_circuits.push(arena.pair.m.circuits());
            n_circuits.push(arena.pair.n.circuits());
            arenas.push(arena);
            child_of.push(map);
        }
        Ok(Board { tree: tree.clone(), arenas, child_of, m_circuits, n_circuits })
    }

    /// Backward induction over (node, promise), bottom-up; records the
    /// canonically least winning tactic per winning state.
    pub fn solve(&self) -> (WinTable, BTreeMap<GameState, Tactic>) {
        let n = self.tree.len();
        let mut win = vec![[false; 6]; n];
        let mut witness = BTreeMap::new();
        for t in (0..n).rev() {
            for &base in &BASES {
                let arena = &self.arenas[t];
                let mut found = None;
                'phis: for phi in Phi::enumerate(arena.upper) {
                    for (f, b) in phi.entries() {
                        if b != Base::Bot {
                            let child = self.child_of[t][&f];
                            if !win[child][b as usize] {
                                continue 'phis;
                            }
                        }
                    }
                    if let Some(tac) = first_completion(
                        arena,
                        &phi,
                        base,
                        &self.m_circuits[t],
                        &self.n_circuits[t],
                    )
                    .expect("φ matches the arena")
                    {
                        found = Some(tac);
                        break;
                    }
                }
                if let Some(tac) = found {
                    win[t][base as usize] = true;
                    witness.insert(GameState { node: t, promise: base }, tac);
                }
            }
        }
        (WinTable { win }, witness)
    }
}

fn reachable_strategy(
    board: &Board,
    witness: &BTreeMap<GameState, Tactic>,
    initial: GameState,
) -> PackerStrategy {
    let mut moves = BTreeMap::new();
    let mut stack = vec![initial];
    while let Some(state) = stack.pop() {
        if moves.contains_key(&state) {
            continue;
        }
        let tactic = witness[&state].clone();
        for (f, b) in tactic.phi.entries() {
            if b != Base::Bot {
                stack.push(GameState { node: board.child_of[state.node][&f], promise: b });
            }
        }
        moves.insert(state, tactic);
    }
    PackerStrategy { moves }
}

/// Packer's legal moves at a state: every tactic attaining the current
/// promise in the current node's arena. (States always have Packer to
/// move; Coverina's replies are edges of the played tactic.)
pub fn legal_tactics(tree: &PairTree, state: GameState) -> Result<Vec<Tactic>> {
    let arena = tree.arena_at(state.node)?;
    crate::tactics::enumerate_tactics(&arena, Promise::plain(state.promise))
}

/// Solve the Packing game `G(P0)` from the designated lower edge.
pub fn solve_packing_game(tree: &PairTree, p0: Promise) -> Result<SolveResult> {
    if p0.starred {
        return Err(Error::invalid("the Packing game takes a plain promise"));
    }
    let board = Board::new(tree)?;
    let (table, witness) = board.solve();
    let initial = GameState { node: 0, promise: p0.base };
    let (winner, strategy) = if table.packer_wins(initial) {
        (Player::Packer, Strategy::Packer(reachable_strategy(&board, &witness, initial)))
    } else {
        (Player::Coverina, Strategy::Coverina(CoverinaStrategy { table: table.clone() }))
    };
    Ok(SolveResult { kind: GameKind::Packing, winner, table, strategy, initial })
}

/// Solve the Covering game `G*(P0*)`: the Packing game on the dual board
/// with roles reversed, winner relabelled accordingly.
pub fn solve_covering_game(tree: &PairTree, p0: Promise) -> Result<SolveResult> {
    if !p0.starred {
        return Err(Error::invalid("the Covering game takes a starred promise"));
    }
    let dual = tree.dual();
    let mut res = solve_packing_game(&dual, Promise::plain(p0.base))?;
    res.kind = GameKind::Covering;
    res.winner = res.winner.other();
    Ok(res)
}

/// How the mover picks tactics in a trace.
pub enum PackerPolicy {
    Strategy(PackerStrategy),
    FirstLegal,
}

/// How the challenger picks edges in a trace.
pub enum CoverinaPolicy {
    Strategy(CoverinaStrategy),
    FirstLegal,
}

#[derive(Clone, Debug)]
pub struct TraceMove {
    pub state: GameState,
    pub tactic: Tactic,
    /// Coverina's reply, if she had one: (edge element within the node's
    /// arena, M-strong, N-strong).
    pub challenge: Option<(usize, bool, bool)>,
}

#[derive(Clone, Debug)]
pub struct Transcript {
    pub moves: Vec<TraceMove>,
    pub winner: Player,
    pub stuck: Player,
}

/// Replay one play of the Packing game under the given policies. The
/// transcript records strong/weak flags per challenge; they do not affect
/// finite winners.
pub fn play_trace(
    tree: &PairTree,
    p0: Promise,
    packer: &PackerPolicy,
    coverina: &CoverinaPolicy,
) -> Result<Transcript> {
    if p0.starred {
        return Err(Error::invalid("traces run on the packing board; dualize first"));
    }
    let board = Board::new(tree)?;
    let mut state = GameState { node: 0, promise: p0.base };
    let mut moves = Vec::new();
    loop {
        let arena = &board.arenas[state.node];
        let tactic = match packer {
            PackerPolicy::Strategy(s) => match s.moves.get(&state) {
                Some(t) => {
                    let t = t.clone();
                    if verify_tactic(arena, &t).is_err() || t.attained.base != state.promise {
                        return Err(Error::StrategyInvalid(format!(
                            "packer move at node {} promise {} is illegal",
                            state.node,
                            Promise::plain(state.promise)
                        )));
                    }
                    Some(t)
                }
                None => None,
            },
            PackerPolicy::FirstLegal => {
                let mut first = None;
                for phi in Phi::enumerate(arena.upper) {
                    if let Some(t) = first_completion(
                        arena,
                        &phi,
                        state.promise,
                        &board.m_circuits[state.node],
                        &board.n_circuits[state.node],
                    )? {
                        first = Some(t);
                        break;
                    }
                }
                first
            }
        };
        let Some(tactic) = tactic else {
            // Packer cannot move
            return Ok(Transcript { moves, winner: Player::Coverina, stuck: Player::Packer });
        };
        let labelled: Vec<usize> =
            tactic.phi.entries().filter(|&(_, b)| b != Base::Bot).map(|(f, _)| f).collect();
        let reply = match coverina {
            CoverinaPolicy::FirstLegal => labelled.first().copied(),
            CoverinaPolicy::Strategy(s) => labelled
                .iter()
                .copied()
                .find(|&f| {
                    let child = board.child_of[state.node][&f];
                    let b = tactic.phi.get(f).unwrap();
                    !s.table.win[child][b as usize]
                })
                .or_else(|| labelled.first().copied()),
        };
        match reply {
            None => {
                moves.push(TraceMove { state, tactic, challenge: None });
                return Ok(Transcript { moves, winner: Player::Packer, stuck: Player::Coverina });
            }
            Some(f) => {
                let b = tactic.phi.get(f).unwrap();
                let m_strong = matches!(b, Base::Top | Base::MPlus | Base::MMinus)
                    && tactic.circuit_m.is_some_and(|c| c.contains(f));
                let n_strong = matches!(b, Base::Top | Base::NPlus | Base::NMinus)
                    && tactic.circuit_n.is_some_and(|c| c.contains(f));
                let child = board.child_of[state.node][&f];
                moves.push(TraceMove { state, tactic, challenge: Some((f, m_strong, n_strong)) });
                state = GameState { node: child, promise: b };
            }
        }
    }
}

/// Glue the tactics of a winning Packer strategy over the reachable
/// subtree into a wave of the assembled pair fulfilling the initial
/// promise.
pub fn strategy_to_wave(tree: &PairTree, p0: Promise, strategy: &PackerStrategy) -> Result<Wave> {
    if p0.starred {
        return Err(Error::invalid("glue cowaves on the dual board"));
    }
    let board = Board::new(tree)?;
    let initial = GameState { node: 0, promise: p0.base };
    let mut wave = Wave::EMPTY;
    let mut stack = vec![initial];
    let mut seen = Vec::new();
    while let Some(state) = stack.pop() {
        if seen.contains(&state.node) {
            continue;
        }
        seen.push(state.node);
        let tactic = strategy
            .moves
            .get(&state)
            .ok_or_else(|| Error::StrategyInvalid(format!("no move at node {}", state.node)))?;
        verify_tactic(&board.arenas[state.node], tactic)
            .map_err(|e| Error::invalid(format!("strategy not winning: {e}")))?;
        if tactic.attained.base != state.promise {
            return Err(Error::invalid("strategy not winning: wrong promise attained"));
        }
        let side = &board.tree.m;
        wave = Wave {
            x: wave.x.union(side.node_to_global(state.node, tactic.wave.x)),
            side_m: wave.side_m.union(side.node_to_global(state.node, tactic.wave.side_m)),
            side_n: wave.side_n.union(side.node_to_global(state.node, tactic.wave.side_n)),
        };
        for (f, b) in tactic.phi.entries() {
            if b != Base::Bot {
                stack.push(GameState { node: board.child_of[state.node][&f], promise: b });
            }
        }
    }
    let assembled = tree.assemble()?;
    let e = assembled.ground().index_of(&tree.lower).unwrap();
    let arena = Arena::new(assembled, Mask::EMPTY, e)?;
    if !verify_wave(&arena.pair, &wave) {
        return Err(Error::invalid("glued triple is not a wave of the assembled pair"));
    }
    if !crate::arena::fulfils(&arena, &wave, Promise::plain(p0.base))? {
        return Err(Error::invalid("glued wave does not fulfil the initial promise"));
    }
    Ok(wave)
}

/// For a wave fulfilling `M+`/`N+`, the witnessing assembled circuit
/// through the lower edge inside `S + e`, together with its precircuit.
pub fn fulfilment_witness_circuit(
    tree: &PairTree,
    wave: &Wave,
    p0: Promise,
) -> Result<Option<(Mask, Precircuit)>> {
    let side_tree = match p0.base {
        Base::MPlus => &tree.m,
        Base::NPlus => &tree.n,
        _ => return Ok(None),
    };
    let e = side_tree.ground().index_of(&tree.lower).unwrap();
    let side = if p0.base == Base::MPlus { wave.side_m } else { wave.side_n };
    for (c, pc) in side_tree.psi_circuits() {
        if c.contains(e) && c.without(e).is_subset_of(side) {
            return Ok(Some((c, pc)));
        }
    }
    Ok(None)
}

/// Break a wave of the assembled pair fulfilling `P0` into per-node
/// promises, relying waves and witness circuits: a Packer strategy that
/// wins the Packing game.
pub fn wave_to_strategy(tree: &PairTree, p0: Promise, wave: &Wave) -> Result<PackerStrategy> {
    if p0.starred {
        return Err(Error::invalid("cowave strategies live on the dual board"));
    }
    let assembled = tree.assemble()?;
    let ground = assembled.ground().clone();
    let e0 = ground.index_of(&tree.lower).unwrap();
    let arena0 = Arena::new(assembled.clone(), Mask::EMPTY, e0)?;
    if !crate::arena::fulfils(&arena0, wave, Promise::plain(p0.base))? {
        return Err(Error::invalid("wave does not fulfil the initial promise"));
    }

    let board = Board::new(tree)?;
    let n = tree.len();

    // Per-node promises by the case ladder, and the subtree waves Z(t).
    let mut promise = vec![Base::Bot; n];
    let mut z_wave: Vec<Wave> = vec![Wave::EMPTY; n];
    promise[0] = p0.base;
    z_wave[0] = *wave;
    for t in 1..n {
        let sub = tree.subtree(t);
        let sub_pair = sub.assemble()?;
        let sub_ground = sub_pair.ground();
        let e_t = sub_ground.index_of(sub.m.nodes[0].matroid.ground().name(
            sub.m.nodes[0].matroid.ground().index_of(&sub.lower).unwrap(),
        ))
        .unwrap();
        let restrict = |m: Mask| -> Mask {
            let mut out = Mask::EMPTY;
            for i in m.iter() {
                if let Some(j) = sub_ground.index_of(ground.name(i)) {
                    out = out.with(j);
                }
            }
            out
        };
        let (x, sm, sn) = (restrict(wave.x), restrict(wave.side_m), restrict(wave.side_n));
        let e_mask = Mask::singleton(e_t);
        let top = Wave { x: x.union(e_mask), side_m: sm, side_n: sn };
        let mplus = Wave { x, side_m: sm, side_n: sn };
        let mminus = Wave { x: x.union(e_mask), side_m: sm, side_n: sn.union(e_mask) };
        let nminus = Wave { x: x.union(e_mask), side_m: sm.union(e_mask), side_n: sn };
        // ⊤ is tested with the dummy inside the hindrance but fulfilled by
        // the wave without it ("W + e is a hindrance focusing on e")
        let (p, z) = if verify_wave(&sub_pair, &top) && top.focuses_on(e_t) {
            (Base::Top, mplus)
        } else if verify_wave(&sub_pair, &mplus) && sub_pair.m.spans(sm, e_mask) {
            (Base::MPlus, mplus)
        } else if verify_wave(&sub_pair, &mminus) {
            (Base::MMinus, mminus)
        } else if verify_wave(&sub_pair, &mplus) && sub_pair.n.spans(sn, e_mask) {
            (Base::NPlus, mplus)
        } else if verify_wave(&sub_pair, &nminus) {
            (Base::NMinus, nminus)
        } else {
            (Base::Bot, Wave::EMPTY)
        };
        promise[t] = p;
        z_wave[t] = z;
    }

    // Per-node tactics over the subtree reachable through non-⊥ promises.
    let mut moves = BTreeMap::new();
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        let arena = &board.arenas[t];
        let node_g = arena.ground();
        let phi_values: Vec<Base> = arena
            .upper
            .iter()
            .map(|f| promise[board.child_of[t][&f]])
            .collect();
        let phi = Phi::new(arena.upper, phi_values)?;

        // node-local part of Z(t): elements of the node ground named in it
        let localize = |m: Mask, outer: &crate::ground::GroundSet| -> Mask {
            let mut out = Mask::EMPTY;
            for i in m.iter() {
                if let Some(j) = node_g.index_of(outer.name(i)) {
                    out = out.with(j);
                }
            }
            out
        };
        let outer_ground: crate::ground::GroundSet = if t == 0 {
            ground.clone()
        } else {
            tree.subtree(t).assemble()?.ground().clone()
        };
        let z = z_wave[t];
        let (mut y, mut side_m, mut side_n) = (
            localize(z.x, &outer_ground),
            localize(z.side_m, &outer_ground),
            localize(z.side_n, &outer_ground),
        );

        // F_t(M−) adjustments: child edges promised M− that are N-spanned
        // from the remainder of the tree (and dually).
        for (f, b) in phi.entries() {
            if b != Base::MMinus && b != Base::NMinus {
                continue;
            }
            let child = board.child_of[t][&f];
            let remainder = tree.without_subtree(child);
            let f_name = node_g.name(f);
            let spanned_from_rest = |side_tree: &crate::tree::MatroidTree, s: Mask| -> Result<bool> {
                let rem = side_tree.assemble()?;
                let rem_g = rem.ground();
                let f_idx = rem_g.index_of(f_name).unwrap();
                let mut s_rem = Mask::EMPTY;
                for i in s.iter() {
                    if let Some(j) = rem_g.index_of(ground.name(i)) {
                        s_rem = s_rem.with(j);
                    }
                }
                Ok(rem.spans(s_rem, Mask::singleton(f_idx)))
            };
            match b {
                Base::MMinus if spanned_from_rest(&remainder.n, wave.side_n)? => {
                    y = y.with(f);
                    side_m = side_m.with(f);
                }
                Base::NMinus if spanned_from_rest(&remainder.m, wave.side_m)? => {
                    y = y.with(f);
                    side_n = side_n.with(f);
                }
                _ => {}
            }
        }
        let w_t = Wave { x: y, side_m, side_n };

        // witness circuits: node-level search within the tactic's bound
        let find_circuit = |mat: &crate::matroid::Matroid, allowed: Mask| -> Option<Mask> {
            mat.circuits()
                .into_iter()
                .find(|c| c.contains(arena.lower) && c.is_subset_of(allowed.with(arena.lower)))
        };
        let circuit_m = if matches!(promise[t], Base::Top | Base::MPlus | Base::MMinus) {
            let allowed =
                side_m.union(phi.preimage(&[Base::Top, Base::MPlus, Base::MMinus]));
            Some(find_circuit(&arena.pair.m, allowed).ok_or_else(|| {
                Error::invalid(format!("no M-witness circuit at node {t}"))
            })?)
        } else {
            None
        };
        let circuit_n = if matches!(promise[t], Base::Top | Base::NPlus | Base::NMinus) {
            let allowed =
                side_n.union(phi.preimage(&[Base::Top, Base::NPlus, Base::NMinus]));
            Some(find_circuit(&arena.pair.n, allowed).ok_or_else(|| {
                Error::invalid(format!("no N-witness circuit at node {t}"))
            })?)
        } else {
            None
        };

        let tactic = Tactic {
            phi: phi.clone(),
            wave: w_t,
            circuit_m,
            circuit_n,
            attained: Promise::plain(promise[t]),
        };
        verify_tactic(arena, &tactic)
            .map_err(|e| Error::invalid(format!("constructed tactic at node {t}: {e}")))?;
        moves.insert(GameState { node: t, promise: promise[t] }, tactic);
        for (f, b) in phi.entries() {
            if b != Base::Bot {
                stack.push(board.child_of[t][&f]);
            }
        }
    }
    let strategy = PackerStrategy { moves };
    verify_winning(tree, p0, &strategy)?;
    Ok(strategy)
}

/// Walk every Coverina reply against the strategy and check Packer always
/// moves legally until Coverina is stuck.
pub fn verify_winning(tree: &PairTree, p0: Promise, strategy: &PackerStrategy) -> Result<()> {
    let board = Board::new(tree)?;
    let mut stack = vec![GameState { node: 0, promise: p0.base }];
    while let Some(state) = stack.pop() {
        let tactic = strategy.moves.get(&state).ok_or_else(|| {
            Error::StrategyInvalid(format!(
                "no prescribed tactic at node {} promise {}",
                state.node,
                Promise::plain(state.promise)
            ))
        })?;
        if tactic.attained.base != state.promise {
            return Err(Error::StrategyInvalid("tactic attains the wrong promise".into()));
        }
        verify_tactic(&board.arenas[state.node], tactic)
            .map_err(|e| Error::StrategyInvalid(format!("node {}: {e}", state.node)))?;
        for (f, b) in tactic.phi.entries() {
            if b != Base::Bot {
                stack.push(GameState { node: board.child_of[state.node][&f], promise: b });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSet;
    use crate::matroid::Matroid;
    use crate::tree::{MatroidTree, TreeNode};

    fn u(m: usize, names: &[&str]) -> Matroid {
        Matroid::uniform(m, GroundSet::new(names.to_vec()).unwrap()).unwrap()
    }

    fn two_node_tree() -> PairTree {
        let mk = || {
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
        PairTree::new(mk(), mk(), "e").unwrap()
    }

    fn single_node_tree(rm: usize, rn: usize) -> PairTree {
        let mk = |r: usize| {
            MatroidTree::new(vec![TreeNode {
                id: "t0".into(),
                matroid: u(r, &["e"]),
                parent: None,
                parent_dummy: None,
                children: vec![],
            }])
            .unwrap()
        };
        PairTree::new(mk(rm), mk(rn), "e").unwrap()
    }

    #[test]
    fn packer_wins_two_node_m_minus() {
        let tree = two_node_tree();
        let res = solve_packing_game(&tree, Promise::parse("M-").unwrap()).unwrap();
        assert_eq!(res.winner, Player::Packer);
        let Strategy::Packer(strategy) = &res.strategy else { panic!("expected strategy") };
        // root tactic: φ(p)=M−, wave ({e,p},{p},{e})
        let root = &strategy.moves[&GameState { node: 0, promise: Base::MMinus }];
        assert_eq!(root.phi.get(1), Some(Base::MMinus));
        assert_eq!(root.wave, Wave::new(Mask(0b11), Mask(0b10), Mask(0b01)));
        // leaf tactic wave ({p,g},{g},{p})
        let leaf = &strategy.moves[&GameState { node: 1, promise: Base::MMinus }];
        assert_eq!(leaf.wave, Wave::new(Mask(0b11), Mask(0b10), Mask(0b01)));
    }

    #[test]
    fn legal_tactics_examples() {
        // leaf arena, ⊥: at least the empty tactic
        let tree = two_node_tree();
        let ts = legal_tactics(&tree, GameState { node: 1, promise: Base::Bot }).unwrap();
        assert!(!ts.is_empty());
        // coloop leaf, M+: Packer is stuck
        let stuck = single_node_tree(1, 1);
        let ts = legal_tactics(&stuck, GameState { node: 0, promise: Base::MPlus }).unwrap();
        assert!(ts.is_empty());
        // the worked root tactic appears among the legal moves
        let ts = legal_tactics(&tree, GameState { node: 0, promise: Base::MMinus }).unwrap();
        assert!(ts
            .iter()
            .any(|t| t.phi.get(1) == Some(Base::MMinus)
                && t.wave == Wave::new(Mask(0b11), Mask(0b10), Mask(0b01))));
    }

    #[test]
    fn coverina_wins_single_coloop() {
        let res = solve_packing_game(&single_node_tree(1, 1), Promise::parse("M-").unwrap())
            .unwrap();
        assert_eq!(res.winner, Player::Coverina);
    }

    #[test]
    fn bot_always_packer() {
        for tree in [two_node_tree(), single_node_tree(1, 1), single_node_tree(0, 0)] {
            let res = solve_packing_game(&tree, Promise::parse("bot").unwrap()).unwrap();
            assert_eq!(res.winner, Player::Packer);
        }
    }

    #[test]
    fn trace_two_node_game() {
        let tree = two_node_tree();
        let res = solve_packing_game(&tree, Promise::parse("M-").unwrap()).unwrap();
        let Strategy::Packer(strategy) = res.strategy else { panic!() };
        let t = play_trace(
            &tree,
            Promise::parse("M-").unwrap(),
            &PackerPolicy::Strategy(strategy),
            &CoverinaPolicy::FirstLegal,
        )
        .unwrap();
        assert_eq!(t.winner, Player::Packer);
        assert_eq!(t.stuck, Player::Coverina);
        assert_eq!(t.moves.len(), 2);
        assert!(t.moves[0].challenge.is_some());
        assert!(t.moves[1].challenge.is_none());
    }

    #[test]
    fn trace_packer_stuck_immediately() {
        let tree = single_node_tree(1, 1);
        let t = play_trace(
            &tree,
            Promise::parse("M-").unwrap(),
            &PackerPolicy::FirstLegal,
            &CoverinaPolicy::FirstLegal,
        )
        .unwrap();
        assert_eq!(t.winner, Player::Coverina);
        assert_eq!(t.stuck, Player::Packer);
        assert!(t.moves.is_empty());
    }

    #[test]
    fn glue_and_split_roundtrip() {
        let tree = two_node_tree();
        let p0 = Promise::parse("M-").unwrap();
        let res = solve_packing_game(&tree, p0).unwrap();
        let Strategy::Packer(strategy) = res.strategy else { panic!() };
        let wave = strategy_to_wave(&tree, p0, &strategy).unwrap();
        // assembled pair is (U_{1,2},U_{1,2}) on {e,g}: wave ({e,g},{g},{e})
        assert_eq!(wave, Wave::new(Mask(0b11), Mask(0b10), Mask(0b01)));

        let rebuilt = wave_to_strategy(&tree, p0, &wave).unwrap();
        let again = strategy_to_wave(&tree, p0, &rebuilt).unwrap();
        let assembled = tree.assemble().unwrap();
        let e = assembled.ground().index_of("e").unwrap();
        let arena = Arena::new(assembled, Mask::EMPTY, e).unwrap();
        assert!(crate::arena::fulfils(&arena, &again, p0).unwrap());
    }

    #[test]
    fn wave_to_strategy_rejects_unfulfilling_wave() {
        let tree = two_node_tree();
        assert!(wave_to_strategy(&tree, Promise::parse("top").unwrap(), &Wave::EMPTY).is_err());
    }

    #[test]
    fn covering_game_duality() {
        // Coverina wins G*(⊤*) on the single-node coloop board iff a cowave
        // fulfils ⊤* there; (U_{1,1},U_{1,1}) has one.
        let res = solve_covering_game(&single_node_tree(1, 1), Promise::parse("top*").unwrap())
            .unwrap();
        assert_eq!(res.winner, Player::Coverina);
        let res = solve_covering_game(&single_node_tree(0, 0), Promise::parse("top*").unwrap())
            .unwrap();
        assert_eq!(res.winner, Player::Packer);
    }

    #[test]
    fn equivalence_on_small_boards() {
        // Packer wins G(P0) iff a wave fulfilling P0 exists in the
        // assembled pair; dually for the covering game.
        for tree in [two_node_tree(), single_node_tree(1, 1), single_node_tree(0, 1)] {
            let assembled = tree.assemble().unwrap();
            let e = assembled.ground().index_of(&tree.lower).unwrap();
            let arena = Arena::new(assembled, Mask::EMPTY, e).unwrap();
            for &base in &BASES {
                let game = solve_packing_game(&tree, Promise::plain(base)).unwrap();
                let wave_exists =
                    crate::arena::attainable(&arena, Promise::plain(base)).unwrap();
                assert_eq!(game.winner == Player::Packer, wave_exists, "base {base:?}");

                let cogame = solve_covering_game(&tree, Promise::starred(base)).unwrap();
                let cowave_exists =
                    crate::arena::attainable(&arena, Promise::starred(base)).unwrap();
                assert_eq!(cogame.winner == Player::Coverina, cowave_exists, "base {base:?}*");
            }
        }
    }

    #[test]
    fn witness_circuit_for_spanning_promises() {
        // single node (U_{1,2},U_{1,2}) on {e,f}: X={f} fulfils M+ at e
        let mk = || {
            MatroidTree::new(vec![TreeNode {
                id: "t0".into(),
                matroid: u(1, &["e", "f"]),
                parent: None,
                parent_dummy: None,
                children: vec![],
            }])
            .unwrap()
        };
        let tree = PairTree::new(mk(), mk(), "e").unwrap();
        let wave = Wave::new(Mask(0b10), Mask(0b10), Mask::EMPTY);
        let got = fulfilment_witness_circuit(&tree, &wave, Promise::parse("M+").unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(got.0, Mask(0b11));
    }
}
