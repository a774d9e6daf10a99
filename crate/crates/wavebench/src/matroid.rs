//! Finite matroids over ordered ground sets.
//!
//! A [`Matroid`] stores its full rank table, indexed by subset bitmask. At
//! the scales this workbench targets (ground sets of at most 16 elements,
//! lemma sweeps on at most 6) this makes rank, closure, circuits, duals,
//! minors and 2-sums plain set algebra, and lets every construction be
//! validated against the independence axioms outright.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Mask};

/// Ground sets up to this size get the full independence-axiom check on
/// construction from an explicit family; larger ones get the cheap checks
/// only (emptiness, downward closure).
pub const FULL_AXIOM_CHECK_CAP: usize = 12;

#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    /// rank of every subset; index = bitmask over ground order
    rank_tbl: Arc<Vec<u8>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.rank_tbl == other.rank_tbl
    }
}
impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let circs: Vec<String> = self.circuits().iter().map(|&c| self.ground.show(c)).collect();
        write!(
            f,
            "Matroid(ground {}, rank {}, circuits {})",
            self.ground.names().join(" "),
            self.rank(),
            circs.join(" ")
        )
    }
}

fn build_rank_tbl(n: usize, indep: impl Fn(Mask) -> bool) -> Vec<u8> {
    let size = 1usize << n;
    let mut tbl = vec![0u8; size];
    for x in 1..size {
        let m = Mask(x as u32);
        if indep(m) {
            tbl[x] = m.len() as u8;
        } else {
            let mut best = 0;
            for i in m.iter() {
                best = best.max(tbl[m.without(i).0 as usize]);
            }
            tbl[x] = best;
        }
    }
    tbl
}

impl Matroid {
    /// Build from an explicit family of independent sets, validating the
    /// independence axioms (fully below [`FULL_AXIOM_CHECK_CAP`]).
    pub fn from_indep_sets(ground: GroundSet, family: &[Mask]) -> Result<Matroid> {
        let full = ground.full_mask();
        let mut is_indep = vec![false; 1 << ground.len()];
        for &m in family {
            if !m.is_subset_of(full) {
                return Err(Error::invalid("independent set outside ground"));
            }
            is_indep[m.0 as usize] = true;
        }
        validate_family(&ground, &is_indep)?;
        let tbl = build_rank_tbl(ground.len(), |m| is_indep[m.0 as usize]);
        Ok(Matroid { ground, rank_tbl: Arc::new(tbl) })
    }

    /// Build from an independence predicate that is trusted to satisfy the
    /// axioms (used for by-construction-valid matroids; still checked in
    /// debug builds on small grounds).
    pub(crate) fn from_trusted_predicate(
        ground: GroundSet,
        indep: impl Fn(Mask) -> bool,
    ) -> Matroid {
        let tbl = build_rank_tbl(ground.len(), indep);
        let m = Matroid { ground, rank_tbl: Arc::new(tbl) };
        debug_assert!(m.ground.len() > 8 || m.check_axioms().is_ok());
        m
    }

    /// The uniform matroid of rank `m`: all subsets of size at most `m`
    /// independent.
    pub fn uniform(m: usize, ground: GroundSet) -> Result<Matroid> {
        if m > ground.len() {
            return Err(Error::invalid(format!(
                "uniform rank {m} exceeds ground size {}",
                ground.len()
            )));
        }
        Ok(Matroid::from_trusted_predicate(ground, |x| x.len() as usize <= m))
    }

    /// Build from a circuit family: independents are the subsets containing
    /// no circuit. The circuit axioms (nonempty, antichain, elimination) are
    /// checked exhaustively and violations are reported with the offending
    /// pair.
    pub fn from_circuits(ground: GroundSet, circuits: &[Mask]) -> Result<Matroid> {
        let full = ground.full_mask();
        let mut cs: Vec<Mask> = circuits.to_vec();
        cs.sort();
        cs.dedup();
        for &c in &cs {
            if c.is_empty() {
                return Err(Error::NotAMatroid("empty circuit".into()));
            }
            if !c.is_subset_of(full) {
                return Err(Error::invalid("circuit outside ground"));
            }
        }
        for (i, &a) in cs.iter().enumerate() {
            for &b in &cs[i + 1..] {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    return Err(Error::NotAMatroid(format!(
                        "circuits {} and {} are nested",
                        ground.show(a),
                        ground.show(b)
                    )));
                }
            }
        }
        // circuit elimination: C1 != C2, e in C1 ∩ C2  =>  some circuit
        // inside (C1 ∪ C2) - e
        for (i, &a) in cs.iter().enumerate() {
            for &b in cs.iter().skip(i + 1) {
                for e in a.intersect(b).iter() {
                    let target = a.union(b).without(e);
                    if !cs.iter().any(|&c| c.is_subset_of(target)) {
                        return Err(Error::NotAMatroid(format!(
                            "elimination fails for circuits {} and {} at {}: no circuit inside {}",
                            ground.show(a),
                            ground.show(b),
                            ground.name(e),
                            ground.show(target)
                        )));
                    }
                }
            }
        }
        let indep = |x: Mask| !cs.iter().any(|&c| c.is_subset_of(x));
        let tbl = build_rank_tbl(ground.len(), indep);
        let m = Matroid { ground, rank_tbl: Arc::new(tbl) };
        m.check_axioms()?;
        debug_assert_eq!(m.circuits(), cs);
        Ok(m)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn full_mask(&self) -> Mask {
        self.ground.full_mask()
    }

    fn check_in_ground(&self, x: Mask) -> Result<()> {
        if x.is_subset_of(self.full_mask()) {
            Ok(())
        } else {
            Err(Error::invalid("subset not within ground set"))
        }
    }

    /// Rank of a subset (unchecked; `x` must be within ground).
    pub fn rk(&self, x: Mask) -> u8 {
        debug_assert!(x.is_subset_of(self.full_mask()));
        self.rank_tbl[x.0 as usize]
    }

    /// Rank of a subset.
    pub fn rank_of(&self, x: Mask) -> Result<u8> {
        self.check_in_ground(x)?;
        Ok(self.rk(x))
    }

    /// Rank of the whole matroid.
    pub fn rank(&self) -> u8 {
        self.rk(self.full_mask())
    }

    pub fn is_independent(&self, x: Mask) -> Result<bool> {
        self.check_in_ground(x)?;
        Ok(self.indep(x))
    }

    pub(crate) fn indep(&self, x: Mask) -> bool {
        self.rk(x) == x.len() as u8
    }

    /// Closure: all elements whose addition does not raise the rank.
    pub fn closure_of(&self, x: Mask) -> Result<Mask> {
        self.check_in_ground(x)?;
        Ok(self.cl(x))
    }

    pub(crate) fn cl(&self, x: Mask) -> Mask {
        let r = self.rk(x);
        let mut out = x;
        for i in self.full_mask().minus(x).iter() {
            if self.rk(x.with(i)) == r {
                out = out.with(i);
            }
        }
        out
    }

    /// Does `s` span `x`, i.e. `x ⊆ cl(s)`?
    pub(crate) fn spans(&self, s: Mask, x: Mask) -> bool {
        self.rk(s.union(x)) == self.rk(s)
    }

    /// Minimal dependent sets, ascending in canonical mask order.
    pub fn circuits(&self) -> Vec<Mask> {
        let mut out = Vec::new();
        for x in 1..(1u32 << self.ground.len()) {
            let m = Mask(x);
            if !self.indep(m) && m.iter().all(|i| self.indep(m.without(i))) {
                out.push(m);
            }
        }
        out
    }

    /// The fundamental circuit of `e` with respect to an independent set, if
    /// `indep + e` is dependent.
    pub(crate) fn fundamental_circuit(&self, indep: Mask, e: usize) -> Option<Mask> {
        debug_assert!(self.indep(indep));
        if indep.contains(e) || self.indep(indep.with(e)) {
            return None;
        }
        // unique circuit inside indep + e: elements x with rank(indep+e-x) = rank(indep+e)
        let base = indep.with(e);
        let r = self.rk(base);
        let mut c = Mask::singleton(e);
        for i in indep.iter() {
            if self.rk(base.without(i)) == r {
                c = c.with(i);
            }
        }
        Some(c)
    }

    /// Cocircuits: circuits of the dual.
    pub fn cocircuits(&self) -> Vec<Mask> {
        self.dual().circuits()
    }

    /// Dual matroid: `r*(X) = |X| + r(E \ X) - r(E)`.
    pub fn dual(&self) -> Matroid {
        let n = self.ground.len();
        let full = self.full_mask();
        let r = self.rank();
        let mut tbl = vec![0u8; 1 << n];
        for x in 0..(1u32 << n) {
            let m = Mask(x);
            tbl[x as usize] = (m.len() as u8 + self.rk(full.minus(m))) - r;
        }
        Matroid { ground: self.ground.clone(), rank_tbl: Arc::new(tbl) }
    }

    /// Minor `M / C \ D`: contract `C`, delete `D`. Independence in the
    /// minor is tested against one fixed maximal independent subset of `C`
    /// (the greedy one in ground order).
    pub fn minor(&self, contract: Mask, delete: Mask) -> Result<Matroid> {
        self.check_in_ground(contract.union(delete))?;
        if contract.intersects(delete) {
            return Err(Error::invalid("contraction and deletion sets overlap"));
        }
        let keep = self.full_mask().minus(contract.union(delete));
        let b_c = self.greedy_basis_of(contract);
        let new_ground = self.ground.restrict(keep);
        let tbl: Vec<u8> = (0..(1u32 << new_ground.len()))
            .map(|x| {
                let orig = Mask(x).expand(keep);
                self.rk(orig.union(b_c)) - self.rk(b_c)
            })
            .collect();
        Ok(Matroid { ground: new_ground, rank_tbl: Arc::new(tbl) })
    }

    pub fn contract(&self, c: Mask) -> Result<Matroid> {
        self.minor(c, Mask::EMPTY)
    }

    pub fn delete(&self, d: Mask) -> Result<Matroid> {
        self.minor(Mask::EMPTY, d)
    }

    /// Greedy maximal independent subset of `x` in ground order.
    pub(crate) fn greedy_basis_of(&self, x: Mask) -> Mask {
        let mut b = Mask::EMPTY;
        for i in x.iter() {
            if self.indep(b.with(i)) {
                b = b.with(i);
            }
        }
        b
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rk(Mask::singleton(e)) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.rk(self.full_mask().without(e)) < self.rank()
    }

    /// Full independence-axiom check: empty set independent, downward
    /// closure, augmentation. Cheap checks always run; the augmentation
    /// sweep is restricted to grounds of at most [`FULL_AXIOM_CHECK_CAP`]
    /// elements.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.ground.len();
        let mut is_indep = vec![false; 1 << n];
        for x in 0..(1u32 << n) {
            is_indep[x as usize] = self.indep(Mask(x));
        }
        validate_family(&self.ground, &is_indep)
    }

    /// 2-sum along the basepoint `p` (given by name): grounds must intersect
    /// exactly in `p`, and `p` must be neither a loop nor a coloop on either
    /// side. Circuits are those of either part avoiding `p`, plus the
    /// compositions `(C1 - p) ∪ (C2 - p)` over circuits through `p`.
    pub fn two_sum(m1: &Matroid, m2: &Matroid, p: &str) -> Result<Matroid> {
        let i1 = m1
            .ground
            .index_of(p)
            .ok_or_else(|| Error::invalid(format!("basepoint `{p}` not in first ground")))?;
        let i2 = m2
            .ground
            .index_of(p)
            .ok_or_else(|| Error::invalid(format!("basepoint `{p}` not in second ground")))?;
        let shared: Vec<&String> =
            m1.ground.names().iter().filter(|n| m2.ground.index_of(n).is_some()).collect();
        if shared.len() != 1 {
            return Err(Error::invalid(format!(
                "grounds must intersect exactly in the basepoint, got {} shared elements",
                shared.len()
            )));
        }
        for (m, i, side) in [(m1, i1, "first"), (m2, i2, "second")] {
            if m.is_loop(i) {
                return Err(Error::BasepointDegenerate(format!("`{p}` is a loop in {side} part")));
            }
            if m.is_coloop(i) {
                return Err(Error::BasepointDegenerate(format!(
                    "`{p}` is a coloop in {side} part"
                )));
            }
        }

        let names: Vec<String> = m1
            .ground
            .names()
            .iter()
            .filter(|n| n.as_str() != p)
            .chain(m2.ground.names().iter().filter(|n| n.as_str() != p))
            .cloned()
            .collect();
        let ground = GroundSet::new(names)?;

        let lift = |m: &Matroid, c: Mask| -> Mask {
            let mut out = Mask::EMPTY;
            for i in c.iter() {
                out = out.with(ground.index_of(m.ground.name(i)).unwrap());
            }
            out
        };

        let mut circuits = Vec::new();
        let (c1, c2): (Vec<Mask>, Vec<Mask>) = (m1.circuits(), m2.circuits());
        for &c in c1.iter().filter(|c| !c.contains(i1)) {
            circuits.push(lift(m1, c));
        }
        for &c in c2.iter().filter(|c| !c.contains(i2)) {
            circuits.push(lift(m2, c));
        }
        for &a in c1.iter().filter(|c| c.contains(i1)) {
            for &b in c2.iter().filter(|c| c.contains(i2)) {
                circuits.push(lift(m1, a.without(i1)).union(lift(m2, b.without(i2))));
            }
        }
        Matroid::from_circuits(ground, &circuits)
    }
}

fn validate_family(ground: &GroundSet, is_indep: &[bool]) -> Result<()> {
    let n = ground.len();
    if !is_indep[0] {
        return Err(Error::NotAMatroid("empty set not independent".into()));
    }
    for x in 1..(1u32 << n) {
        if is_indep[x as usize] {
            let m = Mask(x);
            for i in m.iter() {
                if !is_indep[m.without(i).0 as usize] {
                    return Err(Error::NotAMatroid(format!(
                        "family not downward closed: {} independent but {} is not",
                        ground.show(m),
                        ground.show(m.without(i))
                    )));
                }
            }
        }
    }
    if n > FULL_AXIOM_CHECK_CAP {
        return Ok(());
    }
    // augmentation over adjacent sizes
    let mut by_size: Vec<Vec<Mask>> = vec![Vec::new(); n + 1];
    for x in 0..(1u32 << n) {
        if is_indep[x as usize] {
            by_size[Mask(x).len() as usize].push(Mask(x));
        }
    }
    for k in 0..n {
        for &small in &by_size[k] {
            for &big in &by_size[k + 1] {
                if !big.minus(small).iter().any(|x| is_indep[small.with(x).0 as usize]) {
                    return Err(Error::NotAMatroid(format!(
                        "augmentation fails for {} and {}",
                        ground.show(small),
                        ground.show(big)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Two matroids on the same ground set.
#[derive(Clone, PartialEq, Eq)]
pub struct MatroidPair {
    pub m: Matroid,
    pub n: Matroid,
}

impl MatroidPair {
    pub fn new(m: Matroid, n: Matroid) -> Result<MatroidPair> {
        if m.ground() != n.ground() {
            return Err(Error::invalid("matroid pair needs a common ground set"));
        }
        Ok(MatroidPair { m, n })
    }

    pub fn ground(&self) -> &GroundSet {
        self.m.ground()
    }

    pub fn full_mask(&self) -> Mask {
        self.m.full_mask()
    }

    pub fn dual(&self) -> MatroidPair {
        MatroidPair { m: self.m.dual(), n: self.n.dual() }
    }

    /// Component-wise minor.
    pub fn minor(&self, contract: Mask, delete: Mask) -> Result<MatroidPair> {
        Ok(MatroidPair {
            m: self.m.minor(contract, delete)?,
            n: self.n.minor(contract, delete)?,
        })
    }

    /// Minor with different contract/delete parts per side (common in the
    /// dichotomy lemmas); grounds must end up equal.
    pub fn mixed_minor(
        &self,
        m_contract: Mask,
        m_delete: Mask,
        n_contract: Mask,
        n_delete: Mask,
    ) -> Result<MatroidPair> {
        if m_contract.union(m_delete) != n_contract.union(n_delete) {
            return Err(Error::invalid("mixed minor must remove the same elements per side"));
        }
        MatroidPair::new(self.m.minor(m_contract, m_delete)?, self.n.minor(n_contract, n_delete)?)
    }
}

impl fmt::Debug for MatroidPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatroidPair(m: {:?}, n: {:?})", self.m, self.n)
    }
}
