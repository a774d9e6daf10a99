//! Tactics: φ-labelled waves attaining promises in arenas.
//!
//! A tactic consists of a labelling `φ` of the upper edges by promises, a
//! wave relying on `φ` (a wave of the derived pair in which `⊤`/`+`-edges
//! are contracted and `⊥`/opposite-`+` edges are deleted), the promise it
//! attains at the lower edge, and witness circuits of the *original* arena
//! matroids for the `M`/`N`-flavoured promises. Cotactics are tactics of
//! the dual arena attaining starred promises; their `φ` values are read as
//! starred.
//!
//! Normalization, enforced as well-formedness: `φ⁻¹(M−) ⊆ S^M` and
//! `φ⁻¹(N−) ⊆ S^N` (in particular such edges lie in the wave).

use crate::arena::{Arena, Reduction};
use crate::error::{Error, Result};
use crate::ground::Mask;
use crate::matroid::MatroidPair;
use crate::promise::{Base, Promise, BASES};
use crate::waves::{check_wave, Wave};

/// A total assignment of promises to the upper edges. Bases are stored
/// plain; in a cotactic they denote the starred promises.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Phi {
    pub upper: Mask,
    values: Vec<Base>,
}

impl Phi {
    pub fn new(upper: Mask, values: Vec<Base>) -> Result<Phi> {
        if values.len() != upper.len() as usize {
            return Err(Error::invalid("φ must be total on the upper edges"));
        }
        Ok(Phi { upper, values })
    }

    pub fn constant(upper: Mask, base: Base) -> Phi {
        Phi { upper, values: vec![base; upper.len() as usize] }
    }

    pub fn get(&self, f: usize) -> Option<Base> {
        let pos = self.upper.iter().position(|i| i == f)?;
        Some(self.values[pos])
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Base)> + '_ {
        self.upper.iter().zip(self.values.iter().copied())
    }

    /// Upper edges whose value lies in `bases`.
    pub fn preimage(&self, bases: &[Base]) -> Mask {
        let mut out = Mask::EMPTY;
        for (f, b) in self.entries() {
            if bases.contains(&b) {
                out = out.with(f);
            }
        }
        out
    }

    /// All `6^|F|` assignments in canonical order (first upper edge varies
    /// fastest, bases in index order).
    pub fn enumerate(upper: Mask) -> impl Iterator<Item = Phi> {
        let k = upper.len() as usize;
        let total = 6u64.pow(k as u32);
        (0..total).map(move |mut code| {
            let mut values = Vec::with_capacity(k);
            for _ in 0..k {
                values.push(BASES[(code % 6) as usize]);
                code /= 6;
            }
            Phi { upper, values }
        })
    }
}

/// The derived pair a relying wave lives on, with the embedding data.
pub struct RelyingView {
    pub pair: MatroidPair,
    /// Surviving original-ground elements (M−/N− upper edges survive).
    pub keep: Mask,
    /// Lower edge index within the reduced ground.
    pub lower: usize,
}

/// Derive `(M', N')`: `M' = M / φ⁻¹{⊤, M+} \ φ⁻¹{⊥, N+}` and
/// `N' = N / φ⁻¹{⊤, N+} \ φ⁻¹{⊥, M+}`; both live on
/// `E \ φ⁻¹{⊥, M+, N+, ⊤}`.
pub fn derive_relying_pair(arena: &Arena, phi: &Phi) -> Result<RelyingView> {
    if phi.upper != arena.upper {
        return Err(Error::invalid("φ domain differs from the arena's upper edges"));
    }
    let m = arena
        .pair
        .m
        .minor(phi.preimage(&[Base::Top, Base::MPlus]), phi.preimage(&[Base::Bot, Base::NPlus]))?;
    let n = arena
        .pair
        .n
        .minor(phi.preimage(&[Base::Top, Base::NPlus]), phi.preimage(&[Base::Bot, Base::MPlus]))?;
    let keep = arena
        .pair
        .full_mask()
        .minus(phi.preimage(&[Base::Bot, Base::MPlus, Base::NPlus, Base::Top]));
    let pair = MatroidPair::new(m, n)?;
    let lower = Mask::singleton(arena.lower).compress(keep).first().unwrap();
    Ok(RelyingView { pair, keep, lower })
}

/// A tactic (or cotactic, when `attained` is starred). The wave is stored
/// in the coordinates of the arena's ground set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tactic {
    pub phi: Phi,
    pub wave: Wave,
    pub circuit_m: Option<Mask>,
    pub circuit_n: Option<Mask>,
    pub attained: Promise,
}

impl Tactic {
    /// The promise `φ(f)`, starred for cotactics.
    pub fn phi_promise(&self, f: usize) -> Option<Promise> {
        Some(Promise { base: self.phi.get(f)?, starred: self.attained.starred })
    }
}

fn needs_m_circuit(base: Base) -> bool {
    matches!(base, Base::Top | Base::MPlus | Base::MMinus)
}

fn needs_n_circuit(base: Base) -> bool {
    matches!(base, Base::Top | Base::NPlus | Base::NMinus)
}

/// Verify a tactic against its arena (dualizing once for cotactics).
pub fn verify_tactic(arena: &Arena, t: &Tactic) -> Result<()> {
    if t.attained.starred {
        let plain = Tactic { attained: Promise::plain(t.attained.base), ..t.clone() };
        return verify_tactic(&arena.dual(), &plain);
    }
    let fail = |msg: String| Err(Error::invalid(format!("tactic invalid: {msg}")));
    let rely = derive_relying_pair(arena, &t.phi)?;
    if !t.wave.x.is_subset_of(rely.keep) {
        return fail("wave leaves the relying ground".into());
    }
    let w = Wave {
        x: t.wave.x.compress(rely.keep),
        side_m: t.wave.side_m.compress(rely.keep),
        side_n: t.wave.side_n.compress(rely.keep),
    };
    if let Err(v) = check_wave(&rely.pair, &w) {
        return fail(format!("relying wave: {v}"));
    }
    if t.wave.side_m.intersects(t.phi.preimage(&[Base::NPlus]))
        || t.wave.side_n.intersects(t.phi.preimage(&[Base::MPlus]))
    {
        return fail("sides meet the opposite +-edges".into());
    }
    if !t.phi.preimage(&[Base::MMinus]).is_subset_of(t.wave.side_m) {
        return fail("φ⁻¹(M−) not within the M-side".into());
    }
    if !t.phi.preimage(&[Base::NMinus]).is_subset_of(t.wave.side_n) {
        return fail("φ⁻¹(N−) not within the N-side".into());
    }
    if !fulfils_in_view(&rely, &w, t.attained.base) {
        return fail(format!("wave does not fulfil {}", t.attained));
    }
    let e = arena.lower;
    for (needed, circuit, mat, allowed_bases, label) in [
        (
            needs_m_circuit(t.attained.base),
            t.circuit_m,
            &arena.pair.m,
            [Base::Top, Base::MPlus, Base::MMinus],
            "M",
        ),
        (
            needs_n_circuit(t.attained.base),
            t.circuit_n,
            &arena.pair.n,
            [Base::Top, Base::NPlus, Base::NMinus],
            "N",
        ),
    ] {
        let side = if label == "M" { t.wave.side_m } else { t.wave.side_n };
        match (needed, circuit) {
            (false, None) => {}
            (false, Some(_)) => return fail(format!("{label}-circuit present but not required")),
            (true, None) => return fail(format!("{label}-circuit required")),
            (true, Some(c)) => {
                let is_circuit =
                    !mat.indep(c) && c.iter().all(|i| mat.indep(c.without(i)));
                if !is_circuit {
                    return fail(format!("{label}-witness is not a circuit"));
                }
                let allowed = side.union(t.phi.preimage(&allowed_bases)).with(e);
                if !c.contains(e) || !c.is_subset_of(allowed) {
                    return fail(format!("{label}-circuit containment fails"));
                }
            }
        }
    }
    Ok(())
}

/// Fulfilment of a plain promise by a relying wave, in reduced coordinates.
fn fulfils_in_view(rely: &RelyingView, w: &Wave, base: Base) -> bool {
    let e = rely.lower;
    let e_mask = Mask::singleton(e);
    let spanned = |mat: &crate::matroid::Matroid| !w.x.contains(e) && mat.spans(w.x, e_mask);
    match base {
        Base::Bot => true,
        Base::MPlus => spanned(&rely.pair.m),
        Base::MMinus => w.side_n.contains(e),
        Base::NPlus => spanned(&rely.pair.n),
        Base::NMinus => w.side_m.contains(e),
        Base::Top => spanned(&rely.pair.m) && spanned(&rely.pair.n),
    }
}

/// Stream every completion of a fixed `φ` into a full tactic attaining the
/// plain base promise, in canonical order. Returns early if the visitor
/// asks to stop; the boolean reports whether it was stopped.
pub fn for_each_completion(
    arena: &Arena,
    phi: &Phi,
    base: Base,
    m_circuits: &[Mask],
    n_circuits: &[Mask],
    visit: &mut dyn FnMut(Tactic) -> bool,
) -> Result<bool> {
    let rely = derive_relying_pair(arena, phi)?;
    let keep = rely.keep;
    let req_m = phi.preimage(&[Base::MMinus]).compress(keep);
    let req_n = phi.preimage(&[Base::NMinus]).compress(keep);
    let required = req_m.union(req_n);
    let (need_m, need_n) = (needs_m_circuit(base), needs_n_circuit(base));
    let phi_m = phi.preimage(&[Base::Top, Base::MPlus, Base::MMinus]);
    let phi_n = phi.preimage(&[Base::Top, Base::NPlus, Base::NMinus]);
    let e_orig = arena.lower;
    let full = rely.pair.full_mask();

    for x_free in full.minus(required).submasks() {
        let x = x_free.union(required);
        let (rm, rn) = (rely.pair.m.rk(x), rely.pair.n.rk(x));
        for sm_free in x.minus(req_m).submasks() {
            let side_m = sm_free.union(req_m);
            if side_m.intersects(req_n) || rely.pair.m.rk(side_m) != rm {
                continue;
            }
            for sn_free in x.minus(side_m).minus(req_n).submasks() {
                let side_n = sn_free.union(req_n);
                if rely.pair.n.rk(side_n) != rn {
                    continue;
                }
                let w = Wave { x, side_m, side_n };
                if !fulfils_in_view(&rely, &w, base) {
                    continue;
                }
                let wave = Wave {
                    x: x.expand(keep),
                    side_m: side_m.expand(keep),
                    side_n: side_n.expand(keep),
                };
                let m_allowed = wave.side_m.union(phi_m).with(e_orig);
                let n_allowed = wave.side_n.union(phi_n).with(e_orig);
                let m_cands: Vec<Option<Mask>> = if need_m {
                    m_circuits
                        .iter()
                        .filter(|&&c| c.contains(e_orig) && c.is_subset_of(m_allowed))
                        .map(|&c| Some(c))
                        .collect()
                } else {
                    vec![None]
                };
                if m_cands.is_empty() {
                    continue;
                }
                let n_cands: Vec<Option<Mask>> = if need_n {
                    n_circuits
                        .iter()
                        .filter(|&&c| c.contains(e_orig) && c.is_subset_of(n_allowed))
                        .map(|&c| Some(c))
                        .collect()
                } else {
                    vec![None]
                };
                for &circuit_m in &m_cands {
                    for &circuit_n in &n_cands {
                        let t = Tactic {
                            phi: phi.clone(),
                            wave,
                            circuit_m,
                            circuit_n,
                            attained: Promise::plain(base),
                        };
                        if !visit(t) {
                            return Ok(true);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

/// First tactic completing `φ` for the plain base promise, if any.
pub fn first_completion(
    arena: &Arena,
    phi: &Phi,
    base: Base,
    m_circuits: &[Mask],
    n_circuits: &[Mask],
) -> Result<Option<Tactic>> {
    let mut found = None;
    for_each_completion(arena, phi, base, m_circuits, n_circuits, &mut |t| {
        found = Some(t);
        false
    })?;
    Ok(found)
}

/// Every tactic attaining the promise (cotactics via the dual arena),
/// exhaustive over φ, waves and witness circuits, in canonical order.
pub fn enumerate_tactics(arena: &Arena, p: Promise) -> Result<Vec<Tactic>> {
    if p.starred {
        let mut out = enumerate_tactics(&arena.dual(), Promise::plain(p.base))?;
        for t in &mut out {
            t.attained = p;
        }
        return Ok(out);
    }
    let m_circuits = arena.pair.m.circuits();
    let n_circuits = arena.pair.n.circuits();
    let mut out = Vec::new();
    for phi in Phi::enumerate(arena.upper) {
        for_each_completion(arena, &phi, p.base, &m_circuits, &n_circuits, &mut |t| {
            out.push(t);
            true
        })?;
    }
    Ok(out)
}

/// Lift a tactic of a reduced arena back to the original one: `φ` is
/// extended by `⊤/⊥/M+/N+` on the four resolved classes and by `M−`/`N−`
/// on surviving class-5 edges according to the side containing them
/// (class-5 edges in the wave but on neither side are absorbed into the
/// N-side; class-5 edges outside the wave get `⊥`). Witness circuits are
/// re-completed inside the contracted classes.
pub fn lift_tactic(arena: &Arena, red: &Reduction, t: &Tactic) -> Result<Tactic> {
    if t.attained.starred {
        let dual_classes =
            [red.classes[1], red.classes[0], red.classes[3], red.classes[2], red.classes[4]];
        let dual_red = Reduction {
            arena: red.arena.dual(),
            keep: red.keep,
            classes: dual_classes,
            blocking_upper: red.blocking_upper,
        };
        let plain = Tactic { attained: Promise::plain(t.attained.base), ..t.clone() };
        let lifted = lift_tactic(&arena.dual(), &dual_red, &plain)?;
        return Ok(Tactic { attained: t.attained, ..lifted });
    }

    let keep = red.keep;
    let wave0 = Wave {
        x: t.wave.x.expand(keep),
        side_m: t.wave.side_m.expand(keep),
        side_n: t.wave.side_n.expand(keep),
    };
    let f5 = red.classes[4];
    let absorbed = f5.intersect(wave0.x).minus(wave0.side_m).minus(wave0.side_n);
    let wave = Wave { x: wave0.x, side_m: wave0.side_m, side_n: wave0.side_n.union(absorbed) };

    let mut values = Vec::new();
    for f in arena.upper.iter() {
        let b = if red.blocking_upper.contains(f) {
            let f_red = Mask::singleton(f).compress(keep).first().unwrap();
            t.phi.get(f_red).ok_or_else(|| Error::invalid("reduced φ misses an edge"))?
        } else if red.classes[0].contains(f) {
            Base::Top
        } else if red.classes[1].contains(f) {
            Base::Bot
        } else if red.classes[2].contains(f) {
            Base::MPlus
        } else if red.classes[3].contains(f) {
            Base::NPlus
        } else if wave.side_m.contains(f) {
            Base::MMinus
        } else if wave.side_n.contains(f) {
            Base::NMinus
        } else {
            Base::Bot
        };
        values.push(b);
    }
    let phi = Phi::new(arena.upper, values)?;

    let extend_circuit = |c_red: Option<Mask>, mat: &crate::matroid::Matroid, within: Mask| -> Result<Option<Mask>> {
        let Some(c_red) = c_red else { return Ok(None) };
        let c0 = c_red.expand(keep);
        for c in mat.circuits() {
            if c0.is_subset_of(c) && c.minus(c0).is_subset_of(within) {
                return Ok(Some(c));
            }
        }
        Err(Error::invalid("no circuit extension inside the contracted classes"))
    };
    let circuit_m =
        extend_circuit(t.circuit_m, &arena.pair.m, red.classes[0].union(red.classes[2]))?;
    let circuit_n =
        extend_circuit(t.circuit_n, &arena.pair.n, red.classes[0].union(red.classes[3]))?;

    Ok(Tactic { phi, wave, circuit_m, circuit_n, attained: t.attained })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSet;
    use crate::matroid::Matroid;
    use Base::*;

    fn upair(rm: usize, rn: usize, n: usize) -> MatroidPair {
        let g = GroundSet::letters(n);
        MatroidPair::new(
            Matroid::uniform(rm, g.clone()).unwrap(),
            Matroid::uniform(rn, g).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn relying_pair_cases() {
        // F = {f}, φ(f) = M+: M' = M/f, N' = N\f
        let pair = upair(1, 1, 2);
        let a = Arena::new(pair, Mask(0b10), 0).unwrap();
        let rely = derive_relying_pair(&a, &Phi::constant(Mask(0b10), MPlus)).unwrap();
        assert_eq!(rely.pair.m.rank(), 0);
        assert_eq!(rely.pair.n.rank(), 1);

        // φ ≡ ⊥: both deleted; φ ≡ ⊤: both contracted
        let rely = derive_relying_pair(&a, &Phi::constant(Mask(0b10), Bot)).unwrap();
        assert_eq!(rely.pair.ground().names(), &["a"]);
        assert_eq!(rely.pair.m.rank(), 1);
        let rely = derive_relying_pair(&a, &Phi::constant(Mask(0b10), Top)).unwrap();
        assert_eq!(rely.pair.m.rank(), 0);
    }

    #[test]
    fn enumerate_leaf_m_minus() {
        // ((U_{1,2},U_{1,2}), F=∅, e): exactly one tactic attains M−
        let a = Arena::new(upair(1, 1, 2), Mask::EMPTY, 0).unwrap();
        let ts = enumerate_tactics(&a, Promise::plain(MMinus)).unwrap();
        assert_eq!(ts.len(), 1);
        let t = &ts[0];
        assert_eq!(t.wave, Wave::new(Mask(0b11), Mask(0b10), Mask(0b01)));
        assert_eq!(t.circuit_m, Some(Mask(0b11)));
        assert_eq!(t.circuit_n, None);
        verify_tactic(&a, t).unwrap();
    }

    #[test]
    fn bot_always_attainable() {
        for (rm, rn, n, upper) in [(1, 1, 1, 0b0), (1, 1, 2, 0b10), (2, 1, 3, 0b110)] {
            let a = Arena::new(upair(rm, rn, n), Mask(upper), 0).unwrap();
            let ts = enumerate_tactics(&a, Promise::plain(Bot)).unwrap();
            assert!(!ts.is_empty());
            for t in &ts {
                verify_tactic(&a, t).unwrap();
            }
        }
    }

    #[test]
    fn no_tactic_when_unattainable() {
        // (U_{1,1},U_{1,1}) on {e}: nothing spans e, so M+ has no tactic
        let a = Arena::new(upair(1, 1, 1), Mask::EMPTY, 0).unwrap();
        assert!(enumerate_tactics(&a, Promise::plain(MPlus)).unwrap().is_empty());
    }

    #[test]
    fn root_tactic_of_two_node_example() {
        // root arena (U_{1,2},U_{1,2}) on {e,p}, F={p}, lower e, promise M−:
        // the tactic φ(p)=M−, wave ({e,p},{p},{e}) must be among the tactics
        let a = Arena::new(upair(1, 1, 2), Mask(0b10), 0).unwrap();
        let ts = enumerate_tactics(&a, Promise::plain(MMinus)).unwrap();
        let expected_wave = Wave::new(Mask(0b11), Mask(0b10), Mask(0b01));
        assert!(ts
            .iter()
            .any(|t| t.wave == expected_wave && t.phi.get(1) == Some(MMinus)));
        for t in &ts {
            verify_tactic(&a, t).unwrap();
        }
    }

    #[test]
    fn cotactics_dualize() {
        let a = Arena::new(upair(1, 1, 1), Mask::EMPTY, 0).unwrap();
        // (U_{1,1},U_{1,1}) attains ⊤* (coloop focused by the empty cowave + e)
        let ts = enumerate_tactics(&a, Promise::starred(Top)).unwrap();
        assert!(!ts.is_empty());
        for t in &ts {
            verify_tactic(&a, t).unwrap();
        }
    }

    #[test]
    fn lifted_tactics_verify_in_the_original_arena() {
        use crate::arena::reduce_arena;
        use crate::promise::PromiseSet;
        // sweep small arenas with |F| <= 2 against a spread of ρ values:
        // each canonical value missing, the empty set, and a blocking set
        let vals = crate::promise::canonical_values();
        let mut rhos: Vec<PromiseSet> = Vec::new();
        for miss in 0..5 {
            let r = Promise::all()
                .filter(|&p| !vals[miss].contains(p))
                .fold(PromiseSet::EMPTY, PromiseSet::with);
            rhos.push(r);
        }
        rhos.push(PromiseSet::EMPTY);
        rhos.push(PromiseSet::of([Promise::plain(Bot)])); // blocking
        for (rm, rn, n, upper) in
            [(1, 1, 2, 0b10u32), (1, 1, 3, 0b110), (2, 1, 3, 0b010), (0, 1, 2, 0b10)]
        {
            let arena = Arena::new(upair(rm, rn, n), Mask(upper), 0).unwrap();
            let k = Mask(upper).len() as usize;
            for combo in 0..rhos.len().pow(k as u32) {
                let assignment: Vec<PromiseSet> =
                    (0..k).map(|i| rhos[combo / rhos.len().pow(i as u32) % rhos.len()]).collect();
                let red = reduce_arena(&arena, &assignment).unwrap();
                for p in Promise::all() {
                    for t in enumerate_tactics(&red.arena, p).unwrap() {
                        let lifted = lift_tactic(&arena, &red, &t).unwrap();
                        verify_tactic(&arena, &lifted).unwrap();
                        // φ_K extends φ_K' on the surviving upper edges, and
                        // the resolved edges avoid ρ
                        for (f, b) in lifted.phi.entries() {
                            if red.blocking_upper.contains(f) {
                                let f_red =
                                    Mask::singleton(f).compress(red.keep).first().unwrap();
                                assert_eq!(t.phi.get(f_red), Some(b));
                            } else {
                                let pos =
                                    Mask(upper).iter().position(|x| x == f).unwrap();
                                let promise = Promise { base: b, starred: p.starred };
                                assert!(
                                    !assignment[pos].contains(promise),
                                    "lifted φ({f}) = {promise} lands in ρ"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_attainability() {
        // nonempty tactic list iff the promise is attainable (F = ∅)
        for (rm, rn, n) in [(0, 0, 1), (1, 1, 1), (1, 1, 2), (0, 1, 1), (2, 1, 3)] {
            let a = Arena::new(upair(rm, rn, n), Mask::EMPTY, 0).unwrap();
            for p in Promise::all() {
                let enumerated = !enumerate_tactics(&a, p).unwrap().is_empty();
                let attainable = crate::arena::attainable(&a, p).unwrap();
                assert_eq!(enumerated, attainable, "rm={rm} rn={rn} n={n} p={p}");
            }
        }
    }
}
