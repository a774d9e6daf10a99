//! The finite Packing/Covering partition and the wave/cohindrance
//! dichotomy.
//!
//! For finite matroid pairs the ground set always splits into a part with a
//! packing (the maximal wave) and a part with a covering. The partition is
//! recomputed from scratch here and re-verified, so the solver doubles as a
//! checker for the finite theorem: a failed covering search is reported as
//! a theorem violation, never papered over.

use crate::error::{Error, Result};
use crate::ground::Mask;
use crate::matroid::MatroidPair;
use crate::waves::{
    canonical_sides, find_hindrance_focusing, maximal_wave, verify_wave, Wave,
};

/// A verified Packing/Covering partition: `p ∪ q = E`, a packing of
/// `(M|p, N|p)` and a covering of `(M.q, N.q)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PcPartition {
    pub p: Mask,
    pub q: Mask,
    /// Wave with underlying set `p`; its sides pack the restricted pair.
    pub packing: Wave,
    /// Independent sets of `M.q` and `N.q` whose union is `q`.
    pub cover_m: Mask,
    pub cover_n: Mask,
}

/// Check a partition against its pair, reporting the first failure.
pub fn check_pc_partition(pair: &MatroidPair, pc: &PcPartition) -> Result<()> {
    let full = pair.full_mask();
    if pc.p.union(pc.q) != full || pc.p.intersects(pc.q) {
        return Err(Error::invalid("P, Q must partition the ground set"));
    }
    if pc.packing.x != pc.p {
        return Err(Error::invalid("packing must live on P"));
    }
    if !verify_wave(pair, &pc.packing) {
        return Err(Error::invalid("packing is not a wave"));
    }
    if pc.cover_m.union(pc.cover_n) != pc.q {
        return Err(Error::invalid("covering must union to Q"));
    }
    // independence in the contractions M.Q = M/P, N.Q = N/P
    let bm = pair.m.greedy_basis_of(pc.p);
    let bn = pair.n.greedy_basis_of(pc.p);
    let rk_contract = |mat: &crate::matroid::Matroid, base: Mask, x: Mask| -> u8 {
        mat.rk(x.union(base)) - mat.rk(base)
    };
    if rk_contract(&pair.m, bm, pc.cover_m) != pc.cover_m.len() as u8 {
        return Err(Error::invalid("M-cover not independent in M.Q"));
    }
    if rk_contract(&pair.n, bn, pc.cover_n) != pc.cover_n.len() as u8 {
        return Err(Error::invalid("N-cover not independent in N.Q"));
    }
    Ok(())
}

/// Solve Packing/Covering: `P` is the underlying set of the maximal wave,
/// and the covering of `Q` is found by exhaustive search (M-side first).
pub fn solve_packing_covering(pair: &MatroidPair) -> Result<PcPartition> {
    let packing = maximal_wave(pair);
    let p = packing.x;
    let q = pair.full_mask().minus(p);
    let bm = pair.m.greedy_basis_of(p);
    let bn = pair.n.greedy_basis_of(p);
    for cover_m in q.submasks_desc() {
        if pair.m.rk(cover_m.union(bm)) - pair.m.rk(bm) != cover_m.len() as u8 {
            continue;
        }
        let cover_n = q.minus(cover_m);
        if pair.n.rk(cover_n.union(bn)) - pair.n.rk(bn) == cover_n.len() as u8 {
            let pc = PcPartition { p, q, packing, cover_m, cover_n };
            check_pc_partition(pair, &pc)?;
            return Ok(pc);
        }
    }
    Err(Error::TheoremViolation(format!(
        "no covering of Q = {} after removing the maximal wave",
        pair.ground().show(q)
    )))
}

/// Map a partition of `(M, N)` to the swapped partition of `(M*, N*)`:
/// the packing sides complement into a covering and vice versa.
pub fn dual_partition(pair: &MatroidPair, pc: &PcPartition) -> PcPartition {
    let dual = pair.dual();
    // covering (I_M, I_N) of Q becomes a packing of (M*|Q, N*|Q)
    let packing = Wave {
        x: pc.q,
        side_m: pc.q.minus(pc.cover_m),
        side_n: pc.q.minus(pc.cover_n),
    };
    // the packing sides of P become a covering of (M*.P, N*.P)
    let out = PcPartition {
        p: pc.q,
        q: pc.p,
        packing,
        cover_m: pc.p.minus(pc.packing.side_m),
        cover_n: pc.p.minus(pc.packing.side_n),
    };
    debug_assert!(check_pc_partition(&dual, &out).is_ok());
    out
}

/// The dichotomy of the finite wave/cohindrance lemma: every element is
/// either contained in some wave or at the focus of some cohindrance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WaveOrCohindrance {
    /// A wave containing `e`.
    Wave(Wave),
    /// A cohindrance (a wave of the dual pair) focusing on `e`.
    Cohindrance(Wave),
}

pub fn wave_or_cohindrance(pair: &MatroidPair, e: usize) -> Result<WaveOrCohindrance> {
    if !pair.full_mask().contains(e) {
        return Err(Error::invalid("element outside ground"));
    }
    let max = maximal_wave(pair);
    if max.x.contains(e) {
        let w = canonical_sides(pair, max.x).expect("maximal wave set splits");
        debug_assert!(verify_wave(pair, &w));
        return Ok(WaveOrCohindrance::Wave(w));
    }
    let dual = pair.dual();
    if let Some(h) = find_hindrance_focusing(&dual, e) {
        debug_assert!(verify_wave(&dual, &h) && h.focuses_on(e));
        return Ok(WaveOrCohindrance::Cohindrance(h));
    }
    Err(Error::TheoremViolation(format!(
        "element {} in no wave and at no cohindrance focus",
        pair.ground().name(e)
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
    fn pc_examples() {
        // (U_{1,1},U_{1,1}) on {a}: P=∅, Q={a}, covering ({a}, ∅)
        let pc = solve_packing_covering(&upair(1, 1, 1)).unwrap();
        assert_eq!(pc.p, Mask::EMPTY);
        assert_eq!(pc.q, Mask(0b1));
        assert_eq!((pc.cover_m, pc.cover_n), (Mask(0b1), Mask::EMPTY));

        // (U_{0,1},U_{0,1}) on {a}: P={a}, packing (∅,∅)
        let pc = solve_packing_covering(&upair(0, 0, 1)).unwrap();
        assert_eq!(pc.p, Mask(0b1));
        assert_eq!(pc.packing, Wave::new(Mask(0b1), Mask::EMPTY, Mask::EMPTY));

        // (U_{1,2},U_{1,2}) on {a,b}: P={a,b}, packing ({a},{b})
        let pc = solve_packing_covering(&upair(1, 1, 2)).unwrap();
        assert_eq!(pc.p, Mask(0b11));
        assert_eq!((pc.packing.side_m, pc.packing.side_n), (Mask(0b01), Mask(0b10)));
    }

    #[test]
    fn duality_swaps_partition() {
        for (rm, rn, n) in [(1, 1, 2), (1, 2, 3), (0, 1, 2), (2, 2, 4)] {
            let pair = upair(rm, rn, n);
            let pc = solve_packing_covering(&pair).unwrap();
            let dual_pc = dual_partition(&pair, &pc);
            assert_eq!(dual_pc.p, pc.q);
            check_pc_partition(&pair.dual(), &dual_pc).unwrap();
        }
    }

    #[test]
    fn dichotomy_examples() {
        // (U_{0,1},U_{0,1}): the loop lies in a wave
        match wave_or_cohindrance(&upair(0, 0, 1), 0).unwrap() {
            WaveOrCohindrance::Wave(w) => assert!(w.x.contains(0)),
            other => panic!("expected wave, got {other:?}"),
        }
        // (U_{1,1},U_{1,1}): cohindrance ({e},∅,∅) focusing on e
        match wave_or_cohindrance(&upair(1, 1, 1), 0).unwrap() {
            WaveOrCohindrance::Cohindrance(h) => {
                assert_eq!(h, Wave::new(Mask(0b1), Mask::EMPTY, Mask::EMPTY));
            }
            other => panic!("expected cohindrance, got {other:?}"),
        }
        // (U_{1,2},U_{1,2}) on {e,f}: wave containing e
        match wave_or_cohindrance(&upair(1, 1, 2), 0).unwrap() {
            WaveOrCohindrance::Wave(w) => assert!(w.x.contains(0)),
            other => panic!("expected wave, got {other:?}"),
        }
    }
}
