//! Exchange chains and chain-based augmentation.
//!
//! An even `(I_M, I_N)`-exchange chain from `y` to `x` is a sequence
//! `y = y_0, …, y_n = x` of pairwise-consecutive distinct elements where
//! every even step is witnessed by an M-circuit `C_i` with
//! `{y_i, y_{i+1}} ⊆ C_i ⊆ I_M + y_i`, and every odd step by an N-circuit
//! inside `I_N + y_i`. Odd chains swap the roles of M and N. Since the
//! sets are independent, each witness is the unique fundamental circuit of
//! `y_i`, so the chain graph is deterministic.

use crate::error::{Error, Result};
use crate::ground::Mask;
use crate::matroid::MatroidPair;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExchangeChain {
    pub nodes: Vec<usize>,
    pub parity: Parity,
    /// Per-step witness circuits; `witnesses.len() == nodes.len() - 1`.
    pub witnesses: Vec<Mask>,
}

impl ExchangeChain {
    pub fn start(&self) -> usize {
        self.nodes[0]
    }

    pub fn end(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Is step `step` of a chain with the given parity an M-step?
fn is_m_step(parity: Parity, step: usize) -> bool {
    matches!((parity, step % 2 == 0), (Parity::Even, true) | (Parity::Odd, false))
}

/// Validate a chain against the pair and the independent sets it exchanges
/// over.
pub fn check_chain(
    pair: &MatroidPair,
    i_m: Mask,
    i_n: Mask,
    chain: &ExchangeChain,
) -> Result<()> {
    if chain.nodes.is_empty() {
        return Err(Error::invalid("chain has no nodes"));
    }
    if chain.witnesses.len() + 1 != chain.nodes.len() {
        return Err(Error::invalid("chain witness count mismatch"));
    }
    if !pair.m.indep(i_m) || !pair.n.indep(i_n) {
        return Err(Error::invalid("exchange sets must be independent"));
    }
    let x = chain.end();
    if !i_m.union(i_n).contains(x) {
        return Err(Error::invalid("chain must end inside I_M ∪ I_N"));
    }
    for step in 0..chain.len() {
        let (a, b) = (chain.nodes[step], chain.nodes[step + 1]);
        if a == b {
            return Err(Error::invalid("consecutive chain nodes must differ"));
        }
        let c = chain.witnesses[step];
        let m_step = is_m_step(chain.parity, step);
        let (mat, base) = if m_step { (&pair.m, i_m) } else { (&pair.n, i_n) };
        if !c.contains(a) || !c.contains(b) {
            return Err(Error::invalid(format!("witness circuit at step {step} misses endpoints")));
        }
        if !c.is_subset_of(base.with(a)) {
            return Err(Error::invalid(format!(
                "witness circuit at step {step} not within I + y_i"
            )));
        }
        let is_circuit = !mat.indep(c) && c.iter().all(|i| mat.indep(c.without(i)));
        if !is_circuit {
            return Err(Error::invalid(format!("witness at step {step} is not a circuit")));
        }
    }
    Ok(())
}

/// Breadth-first search for the shortest chain from `y` to `x`, returning
/// the lexicographically least shortest chain (by node sequence), or `None`.
pub fn find_exchange_chain(
    pair: &MatroidPair,
    i_m: Mask,
    i_n: Mask,
    y: usize,
    x: usize,
    parity: Parity,
) -> Result<Option<ExchangeChain>> {
    let full = pair.full_mask();
    if !full.contains(y) || !full.contains(x) {
        return Err(Error::invalid("chain endpoints outside ground"));
    }
    if !pair.m.indep(i_m) || !pair.n.indep(i_n) {
        return Err(Error::invalid("exchange sets must be independent"));
    }
    if !i_m.union(i_n).contains(x) {
        return Err(Error::invalid("chain target must lie in I_M ∪ I_N"));
    }

    let n = pair.ground().len();
    // state = element * 2 + (step parity); dist from the start state
    let num_states = 2 * n;
    let state = |elem: usize, step: usize| elem * 2 + step % 2;
    let mut dist = vec![u32::MAX; num_states];
    let start = state(y, 0);
    dist[start] = 0;
    let mut frontier = vec![start];
    // successors(elem, step_parity): fundamental circuit members
    let succ = |elem: usize, step: usize| -> Option<Mask> {
        let m_step = is_m_step(parity, step);
        let (mat, base) = if m_step { (&pair.m, i_m) } else { (&pair.n, i_n) };
        mat.fundamental_circuit(base, elem).map(|c| c.without(elem))
    };
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            let (elem, par) = (s / 2, s % 2);
            if let Some(nbrs) = succ(elem, par) {
                for z in nbrs.iter() {
                    let t = state(z, par + 1);
                    if dist[t] == u32::MAX {
                        dist[t] = dist[s] + 1;
                        next.push(t);
                    }
                }
            }
        }
        frontier = next;
    }

    let best = dist[state(x, 0)].min(dist[state(x, 1)]);
    if best == u32::MAX {
        return Ok(None);
    }

    // Greedy lexicographic reconstruction along shortest paths: at each
    // layer pick the least-index successor from which the target remains
    // reachable in the remaining number of steps.
    let reaches = |from_elem: usize, from_step: usize, steps_left: u32| -> bool {
        // BFS bounded by steps_left from (from_elem, from_step)
        if steps_left == 0 {
            return from_elem == x;
        }
        let mut layer = Mask::singleton(from_elem);
        let mut step = from_step;
        for _ in 0..steps_left {
            let mut nxt = Mask::EMPTY;
            for elem in layer.iter() {
                if let Some(s) = succ(elem, step) {
                    nxt = nxt.union(s);
                }
            }
            layer = nxt;
            step += 1;
        }
        layer.contains(x)
    };

    let mut nodes = vec![y];
    let mut witnesses = Vec::new();
    let mut cur = y;
    for step in 0..best as usize {
        let left = best - step as u32 - 1;
        let nbrs = succ(cur, step).expect("BFS found a path");
        let m_step = is_m_step(parity, step);
        let (mat, base) = if m_step { (&pair.m, i_m) } else { (&pair.n, i_n) };
        let circuit = mat.fundamental_circuit(base, cur).unwrap();
        let z = nbrs
            .iter()
            .find(|&z| reaches(z, step + 1, left))
            .expect("shortest path continuation exists");
        witnesses.push(circuit);
        nodes.push(z);
        cur = z;
    }
    let chain = ExchangeChain { nodes, parity, witnesses };
    debug_assert!(check_chain(pair, i_m, i_n, &chain).is_ok());
    Ok(Some(chain))
}

/// Run a chain from `z` to `f` over independent sets `B_M`, `B_N`: produce
/// independent `B_M'`, `B_N'` with `B_M' ∪ B_N' = B_M ∪ B_N + z - f` and
/// both closures preserved. The witness pair is found by canonical
/// exhaustive search over the target union; the chain guarantees one
/// exists, so a fruitless search is a theorem violation.
pub fn augment_chain(
    pair: &MatroidPair,
    b_m: Mask,
    b_n: Mask,
    chain: &ExchangeChain,
) -> Result<(Mask, Mask)> {
    check_chain(pair, b_m, b_n, chain)?;
    let (z, f) = (chain.start(), chain.end());
    if chain.is_empty() {
        return Ok((b_m, b_n));
    }
    let target = b_m.union(b_n).with(z).without(f);
    let (cl_m, cl_n) = (pair.m.cl(b_m), pair.n.cl(b_n));
    for bm in target.submasks() {
        if !pair.m.indep(bm) || pair.m.cl(bm) != cl_m {
            continue;
        }
        let forced = target.minus(bm);
        if !pair.n.indep(forced) {
            continue;
        }
        // B_N' must cover target \ B_M'; allow overlap into B_M'
        for extra in bm.submasks() {
            let bn = forced.union(extra);
            if pair.n.indep(bn) && pair.n.cl(bn) == cl_n {
                return Ok((bm, bn));
            }
        }
    }
    Err(Error::TheoremViolation(format!(
        "no augmented pair for chain {:?} over B_M={:?}, B_N={:?}",
        chain.nodes, b_m, b_n
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSet;
    use crate::matroid::Matroid;

    fn upair(rm: usize, rn: usize, n: usize) -> MatroidPair {
        let g = GroundSet::letters(n);
        MatroidPair::new(
            Matroid::uniform(rm, g.clone()).unwrap(),
            Matroid::uniform(rn, g).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn chain_on_parallel_pair() {
        // (U_{1,2},U_{1,2}) on {a,b}, I_M=I_N={a}: even chain (b,a), C_0={a,b}
        let pair = upair(1, 1, 2);
        let chain = find_exchange_chain(&pair, Mask(0b01), Mask(0b01), 1, 0, Parity::Even)
            .unwrap()
            .unwrap();
        assert_eq!(chain.nodes, vec![1, 0]);
        assert_eq!(chain.witnesses, vec![Mask(0b11)]);
    }

    #[test]
    fn zero_length_chain() {
        let pair = upair(1, 1, 2);
        let chain = find_exchange_chain(&pair, Mask(0b01), Mask(0b01), 0, 0, Parity::Even)
            .unwrap()
            .unwrap();
        assert_eq!(chain.nodes, vec![0]);
        assert!(chain.witnesses.is_empty());
    }

    #[test]
    fn no_chain_from_empty() {
        // I_M = ∅ and y a non-loop: no circuit inside I_M + y
        let pair = upair(1, 1, 2);
        let got =
            find_exchange_chain(&pair, Mask::EMPTY, Mask(0b01), 1, 0, Parity::Even).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn rejects_dependent_input() {
        let pair = upair(1, 1, 2);
        assert!(find_exchange_chain(&pair, Mask(0b11), Mask(0b01), 1, 0, Parity::Even).is_err());
        assert!(find_exchange_chain(&pair, Mask(0b01), Mask(0b01), 0, 1, Parity::Even).is_err());
    }

    #[test]
    fn augment_parallel_pair() {
        // chain (b,a) over B_M=B_N={a}: B' = ({b},{b})
        let pair = upair(1, 1, 2);
        let chain = find_exchange_chain(&pair, Mask(0b01), Mask(0b01), 1, 0, Parity::Even)
            .unwrap()
            .unwrap();
        let (bm, bn) = augment_chain(&pair, Mask(0b01), Mask(0b01), &chain).unwrap();
        assert_eq!((bm, bn), (Mask(0b10), Mask(0b10)));
    }

    #[test]
    fn augment_zero_length_keeps_inputs() {
        let pair = upair(1, 1, 2);
        let chain = ExchangeChain { nodes: vec![0], parity: Parity::Even, witnesses: vec![] };
        let (bm, bn) = augment_chain(&pair, Mask(0b01), Mask(0b01), &chain).unwrap();
        assert_eq!((bm, bn), (Mask(0b01), Mask(0b01)));
    }

    #[test]
    fn augment_rejects_invalid_chain() {
        let pair = upair(1, 1, 2);
        let bad =
            ExchangeChain { nodes: vec![1, 0], parity: Parity::Even, witnesses: vec![Mask(0b01)] };
        assert!(augment_chain(&pair, Mask(0b01), Mask(0b01), &bad).is_err());
    }
}
