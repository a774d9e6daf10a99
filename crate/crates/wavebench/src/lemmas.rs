//! Brute-force witnesses for the finite dichotomy and trichotomy lemmas.
//!
//! Each verifier searches the outcomes in their stated order and returns
//! the first verified witness, with all masks expressed over the original
//! ground set. The searches are exhaustive at workbench scale, so a
//! fruitless search is a genuine counterexample and is reported as a
//! theorem violation.

use crate::error::{Error, Result};
use crate::ground::Mask;
use crate::matroid::MatroidPair;
use crate::waves::{
    find_hindrance_focusing, is_wave_set, verify_wave, wave_sets, Wave,
};

/// A verified outcome of one of the trichotomy lemmas. Masks are relative
/// to the original ground; `wave` is a wave or cohindrance of the case's
/// minor pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LemmaOutcome {
    pub case_index: u8,
    pub wave: Wave,
    /// The auxiliary subset (`G'`, `H'` or `J'`) where the case has one.
    pub aux: Option<Mask>,
    /// The witnessing circuit (`o`) or cocircuit (`b`) where the case has
    /// one.
    pub circuit: Option<Mask>,
}

fn compress_wave(w: &Wave, keep: Mask) -> Wave {
    Wave {
        x: w.x.compress(keep),
        side_m: w.side_m.compress(keep),
        side_n: w.side_n.compress(keep),
    }
}

fn expand_wave(w: &Wave, keep: Mask) -> Wave {
    Wave { x: w.x.expand(keep), side_m: w.side_m.expand(keep), side_n: w.side_n.expand(keep) }
}

fn check_disjoint(sets: &[Mask]) -> Result<()> {
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            if a.intersects(b) {
                return Err(Error::invalid("subsets must be disjoint"));
            }
        }
    }
    Ok(())
}

/// Search a cohindrance focusing on `e` (index within `pair`'s ground)
/// whose M-side `T^M`, once expanded by `keep`, supports a cocircuit
/// `b ∈ cocircuits` with `e_orig ∈ b ⊆ (T^M + e_orig) \ forbidden`.
fn find_cohindrance_with_cocircuit(
    pair: &MatroidPair,
    e: usize,
    keep: Mask,
    e_orig: usize,
    cocircuits: &[Mask],
    forbidden: Mask,
) -> Option<(Wave, Mask)> {
    let dual = pair.dual();
    for x in dual.full_mask().submasks().filter(|x| x.contains(e)) {
        let (rm, rn) = (dual.m.rk(x), dual.n.rk(x));
        for t_m in x.without(e).submasks() {
            if dual.m.rk(t_m) != rm {
                continue;
            }
            let allowed = t_m.expand(keep).with(e_orig).minus(forbidden);
            let Some(&b) = cocircuits.iter().find(|&&b| b.contains(e_orig) && b.is_subset_of(allowed))
            else {
                continue;
            };
            let rest = x.minus(t_m).without(e);
            if dual.n.rk(rest) == rn {
                let t_n = rest.submasks().find(|&s| dual.n.rk(s) == rn).unwrap_or(rest);
                return Some((Wave { x, side_m: t_m, side_n: t_n }, b));
            }
        }
    }
    None
}

/// Trichotomy over disjoint `G`, `H`, `J` and `e` outside them:
/// 1. a wave with `e` on the N-side in `(M/(H∪J), N/(H∪J))`, or
/// 2. a wave N-spanning `e` in `(M\(G∪J), N\G/J)`, or
/// 3. some `G' ⊆ G` and a cohindrance focusing on `e` in
///    `(M\(G'∪J), N\G'/J)` with an M-cocircuit `b`,
///    `e ∈ b ⊆ (T^M + e) \ H`.
pub fn verify_lemma27(
    pair: &MatroidPair,
    g: Mask,
    h: Mask,
    j: Mask,
    e: usize,
) -> Result<LemmaOutcome> {
    let full = pair.full_mask();
    check_disjoint(&[g, h, j, Mask::singleton(e)])?;
    if !g.union(h).union(j).with(e).is_subset_of(full) {
        return Err(Error::invalid("subsets outside ground"));
    }

    // outcome 1
    let keep1 = full.minus(h.union(j));
    let pair1 = pair.minor(h.union(j), Mask::EMPTY)?;
    let e1 = Mask::singleton(e).compress(keep1).first().unwrap();
    if let Some(w) = crate::waves::find_wave_e_on_n_side(&pair1, e1) {
        let out = LemmaOutcome { case_index: 1, wave: expand_wave(&w, keep1), aux: None, circuit: None };
        debug_assert!(verify_lemma27_outcome(pair, g, h, j, e, &out).is_ok());
        return Ok(out);
    }

    // outcome 2
    let keep2 = full.minus(g.union(j));
    let pair2 = pair.mixed_minor(Mask::EMPTY, g.union(j), j, g)?;
    let e2 = Mask::singleton(e).compress(keep2).first().unwrap();
    if let Some(w) = crate::waves::find_wave_spanning(&pair2, e2, false) {
        let out = LemmaOutcome { case_index: 2, wave: expand_wave(&w, keep2), aux: None, circuit: None };
        debug_assert!(verify_lemma27_outcome(pair, g, h, j, e, &out).is_ok());
        return Ok(out);
    }

    // outcome 3
    let cocircuits = pair.m.cocircuits();
    for g_prime in g.submasks() {
        let keep3 = full.minus(g_prime.union(j));
        let pair3 = pair.mixed_minor(Mask::EMPTY, g_prime.union(j), j, g_prime)?;
        let e3 = Mask::singleton(e).compress(keep3).first().unwrap();
        if let Some((cw, b)) =
            find_cohindrance_with_cocircuit(&pair3, e3, keep3, e, &cocircuits, h)
        {
            let out = LemmaOutcome {
                case_index: 3,
                wave: expand_wave(&cw, keep3),
                aux: Some(g_prime),
                circuit: Some(b),
            };
            debug_assert!(verify_lemma27_outcome(pair, g, h, j, e, &out).is_ok());
            return Ok(out);
        }
    }
    Err(Error::TheoremViolation(format!(
        "no outcome for G={}, H={}, J={}, e={}",
        pair.ground().show(g),
        pair.ground().show(h),
        pair.ground().show(j),
        pair.ground().name(e)
    )))
}

/// Re-verify an outcome of `verify_lemma27` from scratch.
pub fn verify_lemma27_outcome(
    pair: &MatroidPair,
    g: Mask,
    h: Mask,
    j: Mask,
    e: usize,
    out: &LemmaOutcome,
) -> Result<()> {
    let full = pair.full_mask();
    let fail = |msg: &str| Err(Error::invalid(format!("lemma27 outcome {}: {msg}", out.case_index)));
    match out.case_index {
        1 => {
            let keep = full.minus(h.union(j));
            let minor = pair.minor(h.union(j), Mask::EMPTY)?;
            if !out.wave.x.is_subset_of(keep) {
                return fail("wave outside minor ground");
            }
            let w = compress_wave(&out.wave, keep);
            let e1 = Mask::singleton(e).compress(keep).first().unwrap();
            if !verify_wave(&minor, &w) || !w.side_n.contains(e1) {
                return fail("not a wave with e on the N-side");
            }
        }
        2 => {
            let keep = full.minus(g.union(j));
            let minor = pair.mixed_minor(Mask::EMPTY, g.union(j), j, g)?;
            let w = compress_wave(&out.wave, keep);
            let e2 = Mask::singleton(e).compress(keep).first().unwrap();
            if !verify_wave(&minor, &w) || w.x.contains(e2) || !minor.n.spans(w.x, Mask::singleton(e2))
            {
                return fail("not a wave N-spanning e");
            }
        }
        3 => {
            let g_prime = out.aux.ok_or_else(|| Error::invalid("missing G'"))?;
            let b = out.circuit.ok_or_else(|| Error::invalid("missing cocircuit"))?;
            if !g_prime.is_subset_of(g) {
                return fail("G' not within G");
            }
            let keep = full.minus(g_prime.union(j));
            let minor = pair.mixed_minor(Mask::EMPTY, g_prime.union(j), j, g_prime)?;
            let w = compress_wave(&out.wave, keep);
            let e3 = Mask::singleton(e).compress(keep).first().unwrap();
            if !verify_wave(&minor.dual(), &w) || !w.focuses_on(e3) {
                return fail("not a cohindrance focusing on e");
            }
            if !pair.m.cocircuits().contains(&b) {
                return fail("b is not an M-cocircuit");
            }
            let allowed = w.side_m.expand(keep).with(e).minus(h);
            if !b.contains(e) || !b.is_subset_of(allowed) {
                return fail("cocircuit containment fails");
            }
        }
        _ => return fail("unknown case"),
    }
    Ok(())
}

/// Trichotomy over disjoint `H`, `J` and `e` outside them:
/// 1. some `H' ⊆ H` with a wave M-spanning `e` in `(M/H'/J, N\H'/J)`, or
/// 2. some `J' ⊆ J` and a wave with `e` on the M-side in `(M/J', N/J')`
///    with an N-circuit `o`, `e ∈ o ⊆ (S^N + e) \ H`, or
/// 3. some `H' ⊆ H` and a cohindrance focusing on `e` in `(M/H', N\H')`
///    with an M-cocircuit `b`, `e ∈ b ⊆ (T^M + e) \ J`.
pub fn verify_lemma17(pair: &MatroidPair, h: Mask, j: Mask, e: usize) -> Result<LemmaOutcome> {
    let full = pair.full_mask();
    check_disjoint(&[h, j, Mask::singleton(e)])?;
    if !h.union(j).with(e).is_subset_of(full) {
        return Err(Error::invalid("subsets outside ground"));
    }

    // outcome 1
    for h_prime in h.submasks() {
        let keep = full.minus(h_prime.union(j));
        let minor = pair.mixed_minor(h_prime.union(j), Mask::EMPTY, j, h_prime)?;
        let e1 = Mask::singleton(e).compress(keep).first().unwrap();
        if let Some(w) = crate::waves::find_wave_spanning(&minor, e1, true) {
            let out = LemmaOutcome {
                case_index: 1,
                wave: expand_wave(&w, keep),
                aux: Some(h_prime),
                circuit: None,
            };
            debug_assert!(verify_lemma17_outcome(pair, h, j, e, &out).is_ok());
            return Ok(out);
        }
    }

    // outcome 2
    let n_circuits = pair.n.circuits();
    for j_prime in j.submasks() {
        let keep = full.minus(j_prime);
        let minor = pair.minor(j_prime, Mask::EMPTY)?;
        let e2 = Mask::singleton(e).compress(keep).first().unwrap();
        for x in minor.full_mask().submasks().filter(|x| x.contains(e2)) {
            let (rm, rn) = (minor.m.rk(x), minor.n.rk(x));
            for side_m_rest in x.without(e2).submasks() {
                let side_m = side_m_rest.with(e2);
                if minor.m.rk(side_m) != rm {
                    continue;
                }
                let side_n = x.minus(side_m);
                if minor.n.rk(side_n) != rn {
                    continue;
                }
                let allowed = side_n.expand(keep).with(e).minus(h);
                if let Some(&o) =
                    n_circuits.iter().find(|&&o| o.contains(e) && o.is_subset_of(allowed))
                {
                    let w = Wave { x, side_m, side_n };
                    let out = LemmaOutcome {
                        case_index: 2,
                        wave: expand_wave(&w, keep),
                        aux: Some(j_prime),
                        circuit: Some(o),
                    };
                    debug_assert!(verify_lemma17_outcome(pair, h, j, e, &out).is_ok());
                    return Ok(out);
                }
            }
        }
    }

    // outcome 3
    let cocircuits = pair.m.cocircuits();
    for h_prime in h.submasks() {
        let keep = full.minus(h_prime);
        let minor = pair.mixed_minor(h_prime, Mask::EMPTY, Mask::EMPTY, h_prime)?;
        let e3 = Mask::singleton(e).compress(keep).first().unwrap();
        if let Some((cw, b)) = find_cohindrance_with_cocircuit(&minor, e3, keep, e, &cocircuits, j)
        {
            let out = LemmaOutcome {
                case_index: 3,
                wave: expand_wave(&cw, keep),
                aux: Some(h_prime),
                circuit: Some(b),
            };
            debug_assert!(verify_lemma17_outcome(pair, h, j, e, &out).is_ok());
            return Ok(out);
        }
    }
    Err(Error::TheoremViolation(format!(
        "no outcome for H={}, J={}, e={}",
        pair.ground().show(h),
        pair.ground().show(j),
        pair.ground().name(e)
    )))
}

/// Re-verify an outcome of `verify_lemma17` from scratch.
pub fn verify_lemma17_outcome(
    pair: &MatroidPair,
    h: Mask,
    j: Mask,
    e: usize,
    out: &LemmaOutcome,
) -> Result<()> {
    let full = pair.full_mask();
    let fail = |msg: &str| Err(Error::invalid(format!("lemma17 outcome {}: {msg}", out.case_index)));
    match out.case_index {
        1 => {
            let h_prime = out.aux.ok_or_else(|| Error::invalid("missing H'"))?;
            if !h_prime.is_subset_of(h) {
                return fail("H' not within H");
            }
            let keep = full.minus(h_prime.union(j));
            let minor = pair.mixed_minor(h_prime.union(j), Mask::EMPTY, j, h_prime)?;
            let w = compress_wave(&out.wave, keep);
            let e1 = Mask::singleton(e).compress(keep).first().unwrap();
            if !verify_wave(&minor, &w) || w.x.contains(e1) || !minor.m.spans(w.x, Mask::singleton(e1))
            {
                return fail("not a wave M-spanning e");
            }
        }
        2 => {
            let j_prime = out.aux.ok_or_else(|| Error::invalid("missing J'"))?;
            let o = out.circuit.ok_or_else(|| Error::invalid("missing circuit"))?;
            if !j_prime.is_subset_of(j) {
                return fail("J' not within J");
            }
            let keep = full.minus(j_prime);
            let minor = pair.minor(j_prime, Mask::EMPTY)?;
            let w = compress_wave(&out.wave, keep);
            let e2 = Mask::singleton(e).compress(keep).first().unwrap();
            if !verify_wave(&minor, &w) || !w.side_m.contains(e2) {
                return fail("not a wave with e on the M-side");
            }
            if !pair.n.circuits().contains(&o) {
                return fail("o is not an N-circuit");
            }
            let allowed = w.side_n.expand(keep).with(e).minus(h);
            if !o.contains(e) || !o.is_subset_of(allowed) {
                return fail("circuit containment fails");
            }
        }
        3 => {
            let h_prime = out.aux.ok_or_else(|| Error::invalid("missing H'"))?;
            let b = out.circuit.ok_or_else(|| Error::invalid("missing cocircuit"))?;
            if !h_prime.is_subset_of(h) {
                return fail("H' not within H");
            }
            let keep = full.minus(h_prime);
            let minor = pair.mixed_minor(h_prime, Mask::EMPTY, Mask::EMPTY, h_prime)?;
            let w = compress_wave(&out.wave, keep);
            let e3 = Mask::singleton(e).compress(keep).first().unwrap();
            if !verify_wave(&minor.dual(), &w) || !w.focuses_on(e3) {
                return fail("not a cohindrance focusing on e");
            }
            if !pair.m.cocircuits().contains(&b) {
                return fail("b is not an M-cocircuit");
            }
            let allowed = w.side_m.expand(keep).with(e).minus(j);
            if !b.contains(e) || !b.is_subset_of(allowed) {
                return fail("cocircuit containment fails");
            }
        }
        _ => return fail("unknown case"),
    }
    Ok(())
}

/// Dichotomy check (hindrance relocation): if `(M/f, N\f)` has a hindrance,
/// then in `(M, N)` its set is a wave or contains a hindrance. Returns the
/// verified branch (1 = wave, 2 = sub-hindrance) or `None` when the
/// hypothesis is vacuous.
pub fn check_chain3(pair: &MatroidPair, f: usize) -> Result<Option<u8>> {
    let full = pair.full_mask();
    if !full.contains(f) {
        return Err(Error::invalid("element outside ground"));
    }
    let keep = full.without(f);
    let minor = pair.mixed_minor(Mask::singleton(f), Mask::EMPTY, Mask::EMPTY, Mask::singleton(f))?;
    let Some(h) = crate::waves::find_hindrance(&minor) else {
        return Ok(None);
    };
    let x = h.x.expand(keep);
    if is_wave_set(pair, x) {
        return Ok(Some(1));
    }
    if hindrance_within(pair, x) {
        return Ok(Some(2));
    }
    Err(Error::TheoremViolation(format!(
        "hindrance {} in (M/f, N\\f) yields neither branch",
        pair.ground().show(x)
    )))
}

/// Dichotomy check: if `(M, N)` has a hindrance, then it has one focusing
/// on `e` or one avoiding `e`.
pub fn check_chain2(pair: &MatroidPair, e: usize) -> Result<Option<u8>> {
    if crate::waves::find_hindrance(pair).is_none() {
        return Ok(None);
    }
    if find_hindrance_focusing(pair, e).is_some() {
        return Ok(Some(1));
    }
    if hindrance_within(pair, pair.full_mask().without(e)) {
        return Ok(Some(2));
    }
    Err(Error::TheoremViolation("hindrance exists but neither branch holds".into()))
}

/// Dichotomy check: if every nonempty wave contains `e`, then in
/// `(M/f, N\f)` either `E - f` is a cowave or some hindrance focuses on
/// `e`.
pub fn check_intermediate7(pair: &MatroidPair, e: usize, f: usize) -> Result<Option<u8>> {
    if e == f {
        return Err(Error::invalid("e and f must be distinct"));
    }
    if wave_sets(pair).iter().any(|&x| !x.is_empty() && !x.contains(e)) {
        return Ok(None); // hypothesis fails
    }
    let full = pair.full_mask();
    let keep = full.without(f);
    let minor = pair.mixed_minor(Mask::singleton(f), Mask::EMPTY, Mask::EMPTY, Mask::singleton(f))?;
    if is_wave_set(&minor.dual(), minor.full_mask()) {
        return Ok(Some(1));
    }
    let e_m = Mask::singleton(e).compress(keep).first().unwrap();
    if find_hindrance_focusing(&minor, e_m).is_some() {
        return Ok(Some(2));
    }
    Err(Error::TheoremViolation("intermediate dichotomy fails".into()))
}

fn hindrance_within(pair: &MatroidPair, bound: Mask) -> bool {
    for x in bound.submasks() {
        for e in x.iter() {
            let (rm, rn) = (pair.m.rk(x), pair.n.rk(x));
            for side_m in x.without(e).submasks() {
                if pair.m.rk(side_m) != rm {
                    continue;
                }
                if pair.n.rk(x.minus(side_m).without(e)) == rn {
                    return true;
                }
            }
        }
    }
    false
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
    fn lemma27_single_coloop() {
        // G=H=J=∅, (U_{1,1},U_{1,1}) on {e}: outcome 3 with b = {e}
        let out =
            verify_lemma27(&upair(1, 1, 1), Mask::EMPTY, Mask::EMPTY, Mask::EMPTY, 0).unwrap();
        assert_eq!(out.case_index, 3);
        assert_eq!(out.circuit, Some(Mask(0b1)));
    }

    #[test]
    fn lemma27_parallel_pair() {
        // G=H=J=∅, (U_{1,2},U_{1,2}) on {e,f}: outcome 1
        let out =
            verify_lemma27(&upair(1, 1, 2), Mask::EMPTY, Mask::EMPTY, Mask::EMPTY, 0).unwrap();
        assert_eq!(out.case_index, 1);
        assert!(out.wave.side_n.contains(0));
    }

    #[test]
    fn lemma27_rejects_overlap() {
        let pair = upair(1, 1, 3);
        assert!(verify_lemma27(&pair, Mask(0b010), Mask(0b010), Mask::EMPTY, 0).is_err());
        assert!(verify_lemma27(&pair, Mask(0b001), Mask::EMPTY, Mask::EMPTY, 0).is_err());
    }

    #[test]
    fn lemma17_loop_and_coloop() {
        // (U_{0,1},U_{0,1}): outcome 1 (the empty wave M-spans the loop)
        let out = verify_lemma17(&upair(0, 0, 1), Mask::EMPTY, Mask::EMPTY, 0).unwrap();
        assert_eq!(out.case_index, 1);
        // (U_{1,1},U_{1,1}): outcome 3
        let out = verify_lemma17(&upair(1, 1, 1), Mask::EMPTY, Mask::EMPTY, 0).unwrap();
        assert_eq!(out.case_index, 3);
    }

    #[test]
    fn lemma17_nonempty_h_j() {
        let pair = upair(1, 2, 4);
        let out = verify_lemma17(&pair, Mask(0b0010), Mask(0b0100), 0).unwrap();
        verify_lemma17_outcome(&pair, Mask(0b0010), Mask(0b0100), 0, &out).unwrap();
    }

    #[test]
    fn chain_checks_run() {
        for (rm, rn, n) in [(1, 1, 2), (0, 1, 2), (1, 2, 3), (2, 1, 3)] {
            let pair = upair(rm, rn, n);
            for f in 0..n {
                check_chain3(&pair, f).unwrap();
                check_chain2(&pair, f).unwrap();
                for e in 0..n {
                    if e != f {
                        check_intermediate7(&pair, e, f).unwrap();
                    }
                }
            }
        }
    }
}
