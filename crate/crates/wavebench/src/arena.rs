//! Arenas, promise fulfilment, attainable sets, and arena reduction.
//!
//! An arena is a matroid pair with a set `F` of upper edges and a lower
//! edge `e ∈ E \ F`. In an arena without upper edges a wave fulfils a
//! promise according to the six-case table; the set of fulfillable promises
//! (plain by waves, starred by cowaves) always lands on one of exactly five
//! values.

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Mask};
use crate::matroid::MatroidPair;
use crate::promise::{canonical_values, is_blocking, Base, Promise, PromiseSet};
use crate::waves::{self, verify_cowave, verify_wave, Wave};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arena {
    pub pair: MatroidPair,
    /// Upper edges `F`.
    pub upper: Mask,
    /// Lower edge `e ∈ E \ F`.
    pub lower: usize,
}

impl Arena {
    pub fn new(pair: MatroidPair, upper: Mask, lower: usize) -> Result<Arena> {
        let full = pair.full_mask();
        if !upper.is_subset_of(full) || !full.contains(lower) {
            return Err(Error::invalid("arena fields outside ground"));
        }
        if upper.contains(lower) {
            return Err(Error::invalid("lower edge must not be an upper edge"));
        }
        Ok(Arena { pair, upper, lower })
    }

    pub fn ground(&self) -> &GroundSet {
        self.pair.ground()
    }

    /// The dual arena: both matroids dualized, edges unchanged. Cowaves and
    /// starred promises of `self` are waves and plain promises here.
    pub fn dual(&self) -> Arena {
        Arena { pair: self.pair.dual(), upper: self.upper, lower: self.lower }
    }
}

fn require_no_upper(arena: &Arena) -> Result<()> {
    if arena.upper.is_empty() {
        Ok(())
    } else {
        Err(Error::invalid("operation requires an arena without upper edges"))
    }
}

/// Does the wave fulfil the plain promise at the lower edge? The promise
/// must be plain; cowaves fulfil starred promises via [`cofulfils`].
pub fn fulfils(arena: &Arena, w: &Wave, p: Promise) -> Result<bool> {
    require_no_upper(arena)?;
    if p.starred {
        return Err(Error::invalid("starred promises are fulfilled by cowaves"));
    }
    if !verify_wave(&arena.pair, w) {
        return Err(Error::invalid("triple is not a wave"));
    }
    let e = arena.lower;
    let e_mask = Mask::singleton(e);
    let spanned = |mat: &crate::matroid::Matroid| !w.x.contains(e) && mat.spans(w.x, e_mask);
    Ok(match p.base {
        Base::Bot => true,
        Base::MPlus => spanned(&arena.pair.m),
        Base::MMinus => w.side_n.contains(e),
        Base::NPlus => spanned(&arena.pair.n),
        Base::NMinus => w.side_m.contains(e),
        Base::Top => spanned(&arena.pair.m) && spanned(&arena.pair.n),
    })
}

/// Does the cowave fulfil the starred promise at the lower edge?
pub fn cofulfils(arena: &Arena, w: &Wave, p: Promise) -> Result<bool> {
    if !p.starred {
        return Err(Error::invalid("plain promises are fulfilled by waves"));
    }
    if !verify_cowave(&arena.pair, w) {
        return Err(Error::invalid("triple is not a cowave"));
    }
    fulfils(&arena.dual(), w, Promise::plain(p.base))
}

/// Is the plain promise fulfillable by some wave? (Arena without upper
/// edges.)
pub fn attainable(arena: &Arena, p: Promise) -> Result<bool> {
    require_no_upper(arena)?;
    if p.starred {
        return attainable(&arena.dual(), Promise::plain(p.base));
    }
    let (pair, e) = (&arena.pair, arena.lower);
    Ok(match p.base {
        Base::Bot => true,
        Base::MPlus => waves::find_wave_spanning(pair, e, true).is_some(),
        Base::MMinus => waves::find_wave_e_on_n_side(pair, e).is_some(),
        Base::NPlus => waves::find_wave_spanning(pair, e, false).is_some(),
        Base::NMinus => waves::find_wave_e_on_m_side(pair, e).is_some(),
        Base::Top => waves::find_wave_spanning_both(pair, e).is_some(),
    })
}

/// A witness wave fulfilling the plain promise, when one exists.
pub fn fulfilling_wave(arena: &Arena, p: Promise) -> Result<Option<Wave>> {
    require_no_upper(arena)?;
    if p.starred {
        return Err(Error::invalid("starred promises are fulfilled by cowaves"));
    }
    let (pair, e) = (&arena.pair, arena.lower);
    Ok(match p.base {
        Base::Bot => Some(Wave::EMPTY),
        Base::MPlus => waves::find_wave_spanning(pair, e, true),
        Base::MMinus => waves::find_wave_e_on_n_side(pair, e),
        Base::NPlus => waves::find_wave_spanning(pair, e, false),
        Base::NMinus => waves::find_wave_e_on_m_side(pair, e),
        Base::Top => waves::find_wave_spanning_both(pair, e),
    })
}

/// The attainable set: plain promises fulfilled by some wave plus starred
/// promises fulfilled by some cowave.
pub fn attainable_set(arena: &Arena) -> Result<PromiseSet> {
    require_no_upper(arena)?;
    let mut out = PromiseSet::EMPTY;
    for p in Promise::all() {
        if attainable(arena, p)? {
            out = out.with(p);
        }
    }
    Ok(out)
}

/// Classify an attainable set against the five canonical values (exact set
/// equality), 1-based.
pub fn classify_acal(set: PromiseSet) -> Result<u8> {
    for (i, v) in canonical_values().iter().enumerate() {
        if set == *v {
            return Ok(i as u8 + 1);
        }
    }
    Err(Error::TheoremViolation(format!("attainable set {set} matches none of the 5 values")))
}

/// Result of [`reduce_arena`]: the reduced arena plus the data needed to
/// lift its tactics back to the original arena.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub arena: Arena,
    /// Elements of the original ground surviving into the reduced one.
    pub keep: Mask,
    /// Original upper edges classified by the first canonical value their
    /// `ρ` misses (`classes[i]` chose value `i+1`); blocking edges stay
    /// upper.
    pub classes: [Mask; 5],
    /// The upper edges whose `ρ` is blocking (the reduced arena's `F`, in
    /// original coordinates).
    pub blocking_upper: Mask,
}

/// Reduce an arena along `ρ`, which assigns a promise set to each upper
/// edge (entries aligned with `arena.upper.iter()` order). Edges with a
/// blocking `ρ` survive as upper edges; each other edge is resolved by the
/// first canonical value its `ρ` misses: contracted in both (value 1),
/// deleted in both (2), contracted in M and deleted in N (3), the other way
/// around (4), or left as an ordinary ground element (5).
pub fn reduce_arena(arena: &Arena, rho: &[PromiseSet]) -> Result<Reduction> {
    let uppers: Vec<usize> = arena.upper.iter().collect();
    if rho.len() != uppers.len() {
        return Err(Error::invalid("ρ must be total on the upper edges"));
    }
    let values = canonical_values();
    let mut classes = [Mask::EMPTY; 5];
    let mut blocking_upper = Mask::EMPTY;
    for (&f, &r) in uppers.iter().zip(rho) {
        if is_blocking(r) {
            blocking_upper = blocking_upper.with(f);
        } else {
            let i = values.iter().position(|&v| !r.intersects(v)).unwrap();
            classes[i] = classes[i].with(f);
        }
    }
    let [f1, f2, f3, f4, _f5] = classes;
    let removed = f1.union(f2).union(f3).union(f4);
    let keep = arena.pair.full_mask().minus(removed);
    let m = arena.pair.m.minor(f1.union(f3), f2.union(f4))?;
    let n = arena.pair.n.minor(f1.union(f4), f2.union(f3))?;
    let reduced_pair = MatroidPair::new(m, n)?;
    let lower = Mask::singleton(arena.lower).compress(keep).first().unwrap();
    let upper = blocking_upper.compress(keep);
    let arena = Arena::new(reduced_pair, upper, lower)?;
    Ok(Reduction { arena, keep, classes, blocking_upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;

    fn arena(rm: usize, rn: usize, n: usize) -> Arena {
        let g = GroundSet::letters(n);
        let pair = MatroidPair::new(
            Matroid::uniform(rm, g.clone()).unwrap(),
            Matroid::uniform(rn, g).unwrap(),
        )
        .unwrap();
        Arena::new(pair, Mask::EMPTY, 0).unwrap()
    }

    use Base::*;
    const P: fn(Base) -> Promise = Promise::plain;
    const S: fn(Base) -> Promise = Promise::starred;

    #[test]
    fn fulfils_examples() {
        // (U_{1,2},U_{1,2}) on {e,f}: ({e,f},{f},{e}) fulfils M−
        let a = arena(1, 1, 2);
        let w = Wave::new(Mask(0b11), Mask(0b10), Mask(0b01));
        assert!(fulfils(&a, &w, P(MMinus)).unwrap());
        assert!(!fulfils(&a, &w, P(MPlus)).unwrap());

        // the empty wave fulfils ⊥ anywhere
        assert!(fulfils(&a, &Wave::EMPTY, P(Bot)).unwrap());

        // loop on both sides: ∅ wave fulfils ⊤
        let a0 = arena(0, 0, 1);
        assert!(fulfils(&a0, &Wave::EMPTY, P(Top)).unwrap());

        // starred promise with a wave is a parameter error
        assert!(fulfils(&a, &Wave::EMPTY, S(Bot)).is_err());
        assert!(cofulfils(&a, &Wave::EMPTY, S(Bot)).unwrap());
    }

    #[test]
    fn attainable_sets_of_cited_arenas() {
        // (U_{0,1},U_{0,1}): P + ⊥*
        let set = attainable_set(&arena(0, 0, 1)).unwrap();
        assert_eq!(set, PromiseSet::PLAIN.with(S(Bot)));
        assert_eq!(classify_acal(set).unwrap(), 1);

        // (U_{1,1},U_{1,1}): P* + ⊥
        let set = attainable_set(&arena(1, 1, 1)).unwrap();
        assert_eq!(set, PromiseSet::STARRED.with(P(Bot)));
        assert_eq!(classify_acal(set).unwrap(), 2);

        // (U_{0,1},U_{1,1}) and (U_{1,1},U_{0,1}): values 3 and 4
        assert_eq!(classify_acal(attainable_set(&arena(0, 1, 1)).unwrap()).unwrap(), 3);
        assert_eq!(classify_acal(attainable_set(&arena(1, 0, 1)).unwrap()).unwrap(), 4);

        // (U_{1,2},U_{1,2}): {⊥, M−, N−, ⊥*, M−*, N−*}
        let set = attainable_set(&arena(1, 1, 2)).unwrap();
        assert_eq!(
            set,
            PromiseSet::of([P(Bot), P(MMinus), P(NMinus), S(Bot), S(MMinus), S(NMinus)])
        );
        assert_eq!(classify_acal(set).unwrap(), 5);
    }

    #[test]
    fn reduce_arena_cases() {
        // ρ blocking everywhere: arena unchanged
        let g = GroundSet::letters(3);
        let pair = MatroidPair::new(
            Matroid::uniform(1, g.clone()).unwrap(),
            Matroid::uniform(1, g).unwrap(),
        )
        .unwrap();
        let a = Arena::new(pair, Mask(0b110), 0).unwrap();
        let blocking = PromiseSet::of([P(Bot)]);
        let r = reduce_arena(&a, &[blocking, blocking]).unwrap();
        assert_eq!(r.arena, a);

        // ρ = ∅ everywhere: first unmet value is 1, so F is contracted in both
        let r = reduce_arena(&a, &[PromiseSet::EMPTY, PromiseSet::EMPTY]).unwrap();
        assert_eq!(r.classes[0], Mask(0b110));
        assert_eq!(r.arena.ground().len(), 1);
        assert_eq!(r.arena.pair.m, Matroid::uniform(0, GroundSet::new(["a"]).unwrap()).unwrap());

        // ρ missing only value 3: contracted in M, deleted in N
        let vals = canonical_values();
        let missing3 = PromiseSet::ALL.iter().filter(|&p| !vals[2].contains(p)).fold(
            PromiseSet::EMPTY,
            PromiseSet::with,
        );
        assert!(!missing3.intersects(vals[2]));
        assert!(vals.iter().enumerate().all(|(i, v)| i == 2 || missing3.intersects(*v)));
        let g = GroundSet::letters(2);
        let pair = MatroidPair::new(
            Matroid::uniform(1, g.clone()).unwrap(),
            Matroid::uniform(1, g).unwrap(),
        )
        .unwrap();
        let a = Arena::new(pair, Mask(0b10), 0).unwrap();
        let r = reduce_arena(&a, &[missing3]).unwrap();
        assert_eq!(r.classes[2], Mask(0b10));
        // M' = M/f is U_{0,1}; N' = N\f is U_{1,1}
        assert_eq!(r.arena.pair.m.rank(), 0);
        assert_eq!(r.arena.pair.n.rank(), 1);
    }
}
