//! Waves, cowaves and hindrances.
//!
//! A wave for a pair `(M, N)` is a triple `(X, S^M, S^N)` of subsets with
//! `S^M, S^N ⊆ X` disjoint, `S^M` spanning `M|X` and `S^N` spanning `N|X`
//! (a packing of the restricted pair). A cowave is a wave for the dual
//! pair. A hindrance is a wave leaving some element of `X` on neither side;
//! it focuses on that element.

use crate::error::{Error, Result};
use crate::ground::Mask;
use crate::matroid::MatroidPair;

/// A wave (or, against a dual pair, a cowave). Masks are relative to the
/// ground the triple is checked against.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Wave {
    pub x: Mask,
    pub side_m: Mask,
    pub side_n: Mask,
}

impl Wave {
    pub const EMPTY: Wave = Wave { x: Mask::EMPTY, side_m: Mask::EMPTY, side_n: Mask::EMPTY };

    pub fn new(x: Mask, side_m: Mask, side_n: Mask) -> Wave {
        Wave { x, side_m, side_n }
    }

    /// Elements of `x` on neither side.
    pub fn focus_set(&self) -> Mask {
        self.x.minus(self.side_m.union(self.side_n))
    }

    pub fn focuses_on(&self, e: usize) -> bool {
        self.focus_set().contains(e)
    }
}

/// Reason a triple fails to be a wave.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum WaveViolation {
    OutOfGround,
    MSideNotInX,
    NSideNotInX,
    SidesOverlap,
    MSideNotSpanning,
    NSideNotSpanning,
}

impl std::fmt::Display for WaveViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WaveViolation::OutOfGround => "fields not within ground",
            WaveViolation::MSideNotInX => "M-side not within X",
            WaveViolation::NSideNotInX => "N-side not within X",
            WaveViolation::SidesOverlap => "sides not disjoint",
            WaveViolation::MSideNotSpanning => "M-side does not span M|X",
            WaveViolation::NSideNotSpanning => "N-side does not span N|X",
        };
        f.write_str(s)
    }
}

/// Check the wave invariants, reporting the first violated one.
pub fn check_wave(pair: &MatroidPair, w: &Wave) -> std::result::Result<(), WaveViolation> {
    let full = pair.full_mask();
    if !w.x.is_subset_of(full) {
        return Err(WaveViolation::OutOfGround);
    }
    if !w.side_m.is_subset_of(w.x) {
        return Err(WaveViolation::MSideNotInX);
    }
    if !w.side_n.is_subset_of(w.x) {
        return Err(WaveViolation::NSideNotInX);
    }
    if w.side_m.intersects(w.side_n) {
        return Err(WaveViolation::SidesOverlap);
    }
    if pair.m.rk(w.side_m) != pair.m.rk(w.x) {
        return Err(WaveViolation::MSideNotSpanning);
    }
    if pair.n.rk(w.side_n) != pair.n.rk(w.x) {
        return Err(WaveViolation::NSideNotSpanning);
    }
    Ok(())
}

pub fn verify_wave(pair: &MatroidPair, w: &Wave) -> bool {
    check_wave(pair, w).is_ok()
}

/// A cowave is a wave for the dual pair.
pub fn check_cowave(pair: &MatroidPair, w: &Wave) -> std::result::Result<(), WaveViolation> {
    check_wave(&pair.dual(), w)
}

pub fn verify_cowave(pair: &MatroidPair, w: &Wave) -> bool {
    check_cowave(pair, w).is_ok()
}

/// The join `X ∘ Y = (X ∪ Y, S^M ∪ (T^M \ X), S^N ∪ (T^N \ X))`.
pub fn join_waves(pair: &MatroidPair, w1: &Wave, w2: &Wave) -> Result<Wave> {
    if let Err(v) = check_wave(pair, w1) {
        return Err(Error::invalid(format!("first wave invalid: {v}")));
    }
    if let Err(v) = check_wave(pair, w2) {
        return Err(Error::invalid(format!("second wave invalid: {v}")));
    }
    let joined = Wave {
        x: w1.x.union(w2.x),
        side_m: w1.side_m.union(w2.side_m.minus(w1.x)),
        side_n: w1.side_n.union(w2.side_n.minus(w1.x)),
    };
    debug_assert!(verify_wave(pair, &joined));
    Ok(joined)
}

/// Is `x` the underlying set of some wave? Equivalent to the existence of a
/// split `S ⊆ x` with `S` spanning `M|x` and `x \ S` spanning `N|x`.
pub fn is_wave_set(pair: &MatroidPair, x: Mask) -> bool {
    let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
    x.submasks().any(|s| pair.m.rk(s) == rm && pair.n.rk(x.minus(s)) == rn)
}

/// All wave sets, ascending in canonical order.
pub fn wave_sets(pair: &MatroidPair) -> Vec<Mask> {
    pair.full_mask().submasks().filter(|&x| is_wave_set(pair, x)).collect()
}

/// Canonical sides for a wave set: the numerically least spanning `S^M ⊆ x`,
/// then the least spanning `S^N ⊆ x \ S^M`.
pub fn canonical_sides(pair: &MatroidPair, x: Mask) -> Option<Wave> {
    let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
    let side_m = x.submasks().find(|&s| pair.m.rk(s) == rm && pair.n.rk(x.minus(s)) == rn)?;
    let side_n = x.minus(side_m).submasks().find(|&s| pair.n.rk(s) == rn)?;
    Some(Wave { x, side_m, side_n })
}

/// The maximal wave: the join of all waves, whose underlying set covers
/// every edge covered by any wave.
pub fn maximal_wave(pair: &MatroidPair) -> Wave {
    let mut acc = Wave::EMPTY;
    for x in pair.full_mask().submasks() {
        if x.is_subset_of(acc.x) {
            continue;
        }
        if let Some(w) = canonical_sides(pair, x) {
            acc = Wave {
                x: acc.x.union(w.x),
                side_m: acc.side_m.union(w.side_m.minus(acc.x)),
                side_n: acc.side_n.union(w.side_n.minus(acc.x)),
            };
        }
    }
    debug_assert!(verify_wave(pair, &acc));
    acc
}

/// Exhaustive wave enumeration: first wave, in canonical (x, side_m, side_n)
/// order, satisfying the predicate. Full side enumeration; use the targeted
/// searches below when a normal form suffices.
pub fn find_wave(pair: &MatroidPair, mut pred: impl FnMut(&Wave) -> bool) -> Option<Wave> {
    for x in pair.full_mask().submasks() {
        let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
        for side_m in x.submasks() {
            if pair.m.rk(side_m) != rm {
                continue;
            }
            for side_n in x.minus(side_m).submasks() {
                if pair.n.rk(side_n) != rn {
                    continue;
                }
                let w = Wave { x, side_m, side_n };
                if pred(&w) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// First wave containing `e` with `e` on the N-side, canonical order.
pub fn find_wave_e_on_n_side(pair: &MatroidPair, e: usize) -> Option<Wave> {
    for x in pair.full_mask().submasks().filter(|x| x.contains(e)) {
        let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
        for side_m in x.without(e).submasks() {
            if pair.m.rk(side_m) != rm {
                continue;
            }
            let rest = x.minus(side_m); // contains e
            if pair.n.rk(rest) == rn {
                let side_n = rest
                    .without(e)
                    .submasks()
                    .map(|s| s.with(e))
                    .find(|&s| pair.n.rk(s) == rn)
                    .unwrap_or(rest);
                return Some(Wave { x, side_m, side_n });
            }
        }
    }
    None
}

/// First wave containing `e` with `e` on the M-side.
pub fn find_wave_e_on_m_side(pair: &MatroidPair, e: usize) -> Option<Wave> {
    let w = find_wave_e_on_n_side(&swap_pair(pair), e)?;
    Some(Wave { x: w.x, side_m: w.side_n, side_n: w.side_m })
}

/// First wave avoiding `e` whose underlying set spans `e` in the given
/// matroid side (`true` = M, `false` = N): the "e is M-spanned" searches.
pub fn find_wave_spanning(pair: &MatroidPair, e: usize, m_side: bool) -> Option<Wave> {
    let full = pair.full_mask().without(e);
    for x in full.submasks() {
        let spanned = if m_side { pair.m.spans(x, Mask::singleton(e)) } else { pair.n.spans(x, Mask::singleton(e)) };
        if spanned {
            if let Some(w) = canonical_sides(pair, x) {
                return Some(w);
            }
        }
    }
    None
}

/// First wave avoiding `e` spanning it in both matroids (the `⊤` witness).
pub fn find_wave_spanning_both(pair: &MatroidPair, e: usize) -> Option<Wave> {
    let full = pair.full_mask().without(e);
    let e_mask = Mask::singleton(e);
    for x in full.submasks() {
        if pair.m.spans(x, e_mask) && pair.n.spans(x, e_mask) {
            if let Some(w) = canonical_sides(pair, x) {
                return Some(w);
            }
        }
    }
    None
}

/// First hindrance focusing on `e`, canonical order.
pub fn find_hindrance_focusing(pair: &MatroidPair, e: usize) -> Option<Wave> {
    for x in pair.full_mask().submasks().filter(|x| x.contains(e)) {
        let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
        for side_m in x.without(e).submasks() {
            if pair.m.rk(side_m) != rm {
                continue;
            }
            let rest = x.minus(side_m).without(e);
            if pair.n.rk(rest) == rn {
                let side_n =
                    rest.submasks().find(|&s| pair.n.rk(s) == rn).unwrap_or(rest);
                return Some(Wave { x, side_m, side_n });
            }
        }
    }
    None
}

/// First hindrance (focusing on anything), canonical order by focus element.
pub fn find_hindrance(pair: &MatroidPair) -> Option<Wave> {
    for x in pair.full_mask().submasks() {
        for e in x.iter() {
            let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
            for side_m in x.without(e).submasks() {
                if pair.m.rk(side_m) != rm {
                    continue;
                }
                let rest = x.minus(side_m).without(e);
                if pair.n.rk(rest) == rn {
                    return Some(Wave { x, side_m, side_n: rest });
                }
            }
        }
    }
    None
}

fn swap_pair(pair: &MatroidPair) -> MatroidPair {
    MatroidPair { m: pair.n.clone(), n: pair.m.clone() }
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
    fn verify_wave_examples() {
        // (U_{1,2},U_{1,2}) on {e,f}: ({e,f},{f},{e}) is a wave
        let pair = upair(1, 1, 2);
        let w = Wave::new(Mask(0b11), Mask(0b10), Mask(0b01));
        assert!(verify_wave(&pair, &w));

        // empty wave always verifies
        assert!(verify_wave(&pair, &Wave::EMPTY));

        // overlapping sides rejected
        let p1 = upair(1, 1, 1);
        let bad = Wave::new(Mask(0b1), Mask(0b1), Mask(0b1));
        assert_eq!(check_wave(&p1, &bad), Err(WaveViolation::SidesOverlap));
    }

    #[test]
    fn join_identities() {
        let pair = upair(1, 1, 2);
        let w = Wave::new(Mask(0b11), Mask(0b10), Mask(0b01));
        assert_eq!(join_waves(&pair, &w, &Wave::EMPTY).unwrap(), w);
        assert_eq!(join_waves(&pair, &Wave::EMPTY, &w).unwrap(), w);

        // ({e,f},{f},{e}) ∘ ({e,f},{e},{f}) = ({e,f},{f},{e})
        let w2 = Wave::new(Mask(0b11), Mask(0b01), Mask(0b10));
        assert_eq!(join_waves(&pair, &w, &w2).unwrap(), w);
    }

    #[test]
    fn join_rejects_invalid() {
        let pair = upair(1, 1, 2);
        let bad = Wave::new(Mask(0b11), Mask::EMPTY, Mask::EMPTY);
        assert!(join_waves(&pair, &bad, &Wave::EMPTY).is_err());
    }

    #[test]
    fn maximal_wave_examples() {
        // (U_{1,1},U_{1,1}) on {a}: no nonempty wave
        assert_eq!(maximal_wave(&upair(1, 1, 1)), Wave::EMPTY);

        // (U_{0,1},U_{0,1}) on {a}: the loop is spanned by the empty set
        let w = maximal_wave(&upair(0, 0, 1));
        assert_eq!(w, Wave::new(Mask(0b1), Mask::EMPTY, Mask::EMPTY));

        // (U_{1,2},U_{1,2}) on {a,b}: the split sides form a packing
        let w = maximal_wave(&upair(1, 1, 2));
        assert_eq!(w.x, Mask(0b11));
    }

    #[test]
    fn maximal_wave_covers_all_wave_sets() {
        for (rm, rn, n) in [(1, 1, 3), (2, 1, 3), (1, 2, 4), (2, 2, 4)] {
            let pair = upair(rm, rn, n);
            let w = maximal_wave(&pair);
            for x in wave_sets(&pair) {
                assert!(x.is_subset_of(w.x));
            }
        }
    }

    #[test]
    fn join_preserves_hindrance_focus() {
        // If w1 focuses on g, so does w1 ∘ w2.
        let pair = upair(0, 0, 2);
        let w1 = Wave::new(Mask(0b01), Mask::EMPTY, Mask::EMPTY); // focuses on a
        let w2 = Wave::new(Mask(0b11), Mask::EMPTY, Mask::EMPTY);
        assert!(w1.focuses_on(0));
        let j = join_waves(&pair, &w1, &w2).unwrap();
        assert!(j.focuses_on(0));
    }

    #[test]
    fn contracting_maximal_wave_kills_waves() {
        // maximal_wave(pair / maximal_wave) = ∅
        for (rm, rn, n) in [(1, 1, 3), (0, 1, 2), (2, 1, 4), (1, 1, 4)] {
            let pair = upair(rm, rn, n);
            let w = maximal_wave(&pair);
            let contracted = pair.minor(w.x, Mask::EMPTY).unwrap();
            assert_eq!(maximal_wave(&contracted), Wave::EMPTY, "rm={rm} rn={rn} n={n}");
        }
    }

    #[test]
    fn e_side_searches() {
        let pair = upair(1, 1, 2);
        let w = find_wave_e_on_n_side(&pair, 0).unwrap();
        assert!(w.side_n.contains(0));
        assert!(verify_wave(&pair, &w));
        let w = find_wave_e_on_m_side(&pair, 0).unwrap();
        assert!(w.side_m.contains(0));
        assert!(verify_wave(&pair, &w));
        assert!(find_wave_e_on_n_side(&upair(1, 1, 1), 0).is_none());
    }

    #[test]
    fn hindrance_search() {
        // (U_{1,1},U_{1,1}) dual is (U_{0,1},U_{0,1}): hindrance ({e},∅,∅)
        let pair = upair(0, 0, 1);
        let h = find_hindrance_focusing(&pair, 0).unwrap();
        assert_eq!(h, Wave::new(Mask(0b1), Mask::EMPTY, Mask::EMPTY));
        assert!(find_hindrance_focusing(&upair(1, 1, 1), 0).is_none());
    }
}
