//! The promise lattice, blocking sets, and the pure promise-set lemmas.
//!
//! The promise set is `{⊥, M−, M+, N−, N+, ⊤}` together with a starred copy
//! for the cowave side. The order is generated from
//! `⊤ ≥ M+, ⊤ ≥ N+, M+ ≥ M−, N+ ≥ N−, M− ≥ ⊥, N− ≥ ⊥`; the starred order
//! mirrors the plain one, and plain and starred promises are incomparable.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// The six promise shapes, in canonical index order.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Base {
    Bot,
    MMinus,
    MPlus,
    NMinus,
    NPlus,
    Top,
}

pub const BASES: [Base; 6] =
    [Base::Bot, Base::MMinus, Base::MPlus, Base::NMinus, Base::NPlus, Base::Top];

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Promise {
    pub base: Base,
    pub starred: bool,
}

impl Promise {
    pub const fn plain(base: Base) -> Promise {
        Promise { base, starred: false }
    }

    pub const fn starred(base: Base) -> Promise {
        Promise { base, starred: true }
    }

    /// 0..12, plain promises first.
    pub fn index(self) -> usize {
        self.base as usize + if self.starred { 6 } else { 0 }
    }

    pub fn from_index(i: usize) -> Promise {
        assert!(i < 12);
        Promise { base: BASES[i % 6], starred: i >= 6 }
    }

    /// The star involution.
    pub fn star(self) -> Promise {
        Promise { base: self.base, starred: !self.starred }
    }

    pub fn all() -> impl Iterator<Item = Promise> {
        (0..12).map(Promise::from_index)
    }

    pub fn parse(s: &str) -> Result<Promise> {
        let (body, starred) = match s.strip_suffix('*') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let base = match body {
            "bot" => Base::Bot,
            "M-" => Base::MMinus,
            "M+" => Base::MPlus,
            "N-" => Base::NMinus,
            "N+" => Base::NPlus,
            "top" => Base::Top,
            _ => return Err(Error::invalid(format!("unknown promise `{s}`"))),
        };
        Ok(Promise { base, starred })
    }
}

impl fmt::Display for Promise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match self.base {
            Base::Bot => "bot",
            Base::MMinus => "M-",
            Base::MPlus => "M+",
            Base::NMinus => "N-",
            Base::NPlus => "N+",
            Base::Top => "top",
        };
        write!(f, "{body}{}", if self.starred { "*" } else { "" })
    }
}

/// The six generators of the plain order, as (lower, upper) pairs.
pub const GENERATORS: [(Base, Base); 6] = [
    (Base::MPlus, Base::Top),
    (Base::NPlus, Base::Top),
    (Base::MMinus, Base::MPlus),
    (Base::NMinus, Base::NPlus),
    (Base::Bot, Base::MMinus),
    (Base::Bot, Base::NMinus),
];

fn base_leq_table() -> &'static [[bool; 6]; 6] {
    static TABLE: OnceLock<[[bool; 6]; 6]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut leq = [[false; 6]; 6];
        for i in 0..6 {
            leq[i][i] = true;
        }
        for &(lo, hi) in &GENERATORS {
            leq[lo as usize][hi as usize] = true;
        }
        // transitive closure
        for k in 0..6 {
            for i in 0..6 {
                for j in 0..6 {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        leq
    })
}

/// `p ≤ q` in the promise order. Mixed plain/starred promises are
/// incomparable.
pub fn promise_leq(p: Promise, q: Promise) -> bool {
    p.starred == q.starred && base_leq_table()[p.base as usize][q.base as usize]
}

/// Cover relation (Hasse diagram edges) of the plain order.
pub fn hasse_edges() -> Vec<(Base, Base)> {
    let leq = base_leq_table();
    let mut edges = Vec::new();
    for lo in BASES {
        for hi in BASES {
            if lo == hi || !leq[lo as usize][hi as usize] {
                continue;
            }
            let covered = BASES.iter().any(|&mid| {
                mid != lo && mid != hi && leq[lo as usize][mid as usize] && leq[mid as usize][hi as usize]
            });
            if !covered {
                edges.push((lo, hi));
            }
        }
    }
    edges
}

/// A subset of the 12 promises, as a bitmask over [`Promise::index`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PromiseSet(pub u16);

impl PromiseSet {
    pub const EMPTY: PromiseSet = PromiseSet(0);
    pub const ALL: PromiseSet = PromiseSet(0xfff);
    pub const PLAIN: PromiseSet = PromiseSet(0x03f);
    pub const STARRED: PromiseSet = PromiseSet(0xfc0);

    pub fn of(promises: impl IntoIterator<Item = Promise>) -> PromiseSet {
        let mut s = PromiseSet::EMPTY;
        for p in promises {
            s = s.with(p);
        }
        s
    }

    pub fn contains(self, p: Promise) -> bool {
        self.0 >> p.index() & 1 == 1
    }

    pub fn with(self, p: Promise) -> PromiseSet {
        PromiseSet(self.0 | 1 << p.index())
    }

    pub fn union(self, other: PromiseSet) -> PromiseSet {
        PromiseSet(self.0 | other.0)
    }

    pub fn intersects(self, other: PromiseSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset_of(self, other: PromiseSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn iter(self) -> impl Iterator<Item = Promise> {
        (0..12).filter(move |i| self.0 >> i & 1 == 1).map(Promise::from_index)
    }

    /// Add every promise above a member.
    pub fn up_closure(self) -> PromiseSet {
        let mut out = self;
        for p in self.iter() {
            for q in Promise::all() {
                if promise_leq(p, q) {
                    out = out.with(q);
                }
            }
        }
        out
    }

    pub fn is_up_closed(self) -> bool {
        self.up_closure() == self
    }
}

impl fmt::Debug for PromiseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}
impl fmt::Display for PromiseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn ps(items: &[Promise]) -> PromiseSet {
    PromiseSet::of(items.iter().copied())
}

use Base::*;
const P: fn(Base) -> Promise = Promise::plain;
const S: fn(Base) -> Promise = Promise::starred;

/// The five possible attainable-set values of an arena without upper edges.
pub fn canonical_values() -> [PromiseSet; 5] {
    [
        PromiseSet::PLAIN.with(S(Bot)),
        PromiseSet::STARRED.with(P(Bot)),
        ps(&[P(Bot), P(MMinus), P(MPlus), S(Bot), S(NMinus), S(NPlus)]),
        ps(&[P(Bot), P(NMinus), P(NPlus), S(Bot), S(MMinus), S(MPlus)]),
        ps(&[P(Bot), P(MMinus), P(NMinus), S(Bot), S(MMinus), S(NMinus)]),
    ]
}

/// A set is blocking if it meets all five possible attainable-set values.
pub fn is_blocking(s: PromiseSet) -> bool {
    canonical_values().iter().all(|&v| s.intersects(v))
}

/// The ten minimal cores: an up-closed set is blocking iff it includes one
/// of these.
pub fn blocking_cores() -> [PromiseSet; 10] {
    [
        ps(&[P(Bot)]),
        ps(&[S(Bot)]),
        ps(&[P(MPlus), S(MMinus)]),
        ps(&[P(MMinus), S(MPlus)]),
        ps(&[P(NPlus), S(NMinus)]),
        ps(&[P(NMinus), S(NPlus)]),
        ps(&[P(MPlus), P(NMinus), S(Top)]),
        ps(&[P(MMinus), P(NPlus), S(Top)]),
        ps(&[S(MPlus), S(NMinus), P(Top)]),
        ps(&[S(MMinus), S(NPlus), P(Top)]),
    ]
}

/// Sweep all 4096 promise subsets: up-closed sets are blocking exactly when
/// they include a core, and blocking is invariant under up-closure.
/// Returns the number of up-closed blocking sets, or the first
/// counterexample.
pub fn verify_blockstr() -> Result<u32> {
    let cores = blocking_cores();
    let mut hits = 0;
    for raw in 0..0x1000u16 {
        let s = PromiseSet(raw);
        if is_blocking(s) != is_blocking(s.up_closure()) {
            return Err(Error::TheoremViolation(format!(
                "blocking not invariant under up-closure at {s}"
            )));
        }
        if !s.is_up_closed() {
            continue;
        }
        let blocking = is_blocking(s);
        let has_core = cores.iter().any(|&c| c.is_subset_of(s));
        if blocking != has_core {
            return Err(Error::TheoremViolation(format!(
                "up-closed set {s}: blocking={blocking} but core inclusion={has_core}"
            )));
        }
        if blocking {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Outcome list for the first bridging lemma: up-closed
/// `γ̄_{M−}, γ̄_{N+} ⊆ P − ⊥` and `γ̄_{⊤*} ⊆ P* − ⊥*` with blocking union
/// always satisfy one of seven structural outcomes. Returns the first
/// matching outcome index.
pub fn lem5_minus_outcome(gm: PromiseSet, gn: PromiseSet, gt: PromiseSet) -> Option<u8> {
    let g = gm.union(gn).union(gt);
    let pair_cores = [
        ps(&[P(MPlus), S(MMinus)]),
        ps(&[P(MMinus), S(MPlus)]),
        ps(&[P(NPlus), S(NMinus)]),
        ps(&[P(NMinus), S(NPlus)]),
    ];
    if pair_cores.iter().any(|&c| c.is_subset_of(g)) {
        return Some(1);
    }
    if gm.contains(P(MMinus)) && ps(&[P(NPlus), S(Top)]).is_subset_of(g) {
        return Some(2);
    }
    if gm.contains(P(NMinus)) && ps(&[P(MPlus), S(Top)]).is_subset_of(g) {
        return Some(3);
    }
    if gm.contains(P(Top))
        && (ps(&[S(MMinus), S(NPlus)]).is_subset_of(gt) || ps(&[S(MPlus), S(NMinus)]).is_subset_of(gt))
    {
        return Some(4);
    }
    if gm.is_subset_of(ps(&[P(MPlus), P(NPlus), P(Top)]))
        && gt.is_subset_of(ps(&[S(MPlus), S(NPlus), S(Top)]))
        && (ps(&[P(MMinus), P(NPlus)]).is_subset_of(g) || ps(&[P(MPlus), P(NMinus)]).is_subset_of(g))
    {
        return Some(5);
    }
    if gm.is_empty()
        && !gt.contains(S(NMinus))
        && ps(&[S(MMinus), S(NPlus), P(Top)]).is_subset_of(g)
        && gn.is_subset_of(ps(&[P(NPlus), P(Top)]))
    {
        return Some(6);
    }
    if gm.is_empty()
        && ps(&[S(MPlus), S(NMinus), P(Top)]).is_subset_of(g)
        && gn.is_subset_of(ps(&[P(MPlus), P(Top)]))
    {
        return Some(7);
    }
    None
}

/// Outcome list for the second bridging lemma, over up-closed
/// `γ̄_{M+}, γ̄_{N−} ⊆ P − ⊥` and `γ̄_{⊤*} ⊆ P* − ⊥*` with blocking union.
pub fn lem4_minus_outcome(gm: PromiseSet, gn: PromiseSet, gt: PromiseSet) -> Option<u8> {
    let g = gm.union(gn).union(gt);
    let cores = [
        ps(&[P(MPlus), S(MMinus)]),
        ps(&[P(MMinus), S(MPlus)]),
        ps(&[P(NPlus), S(NMinus)]),
        ps(&[P(NMinus), S(NPlus)]),
        ps(&[P(MMinus), P(NPlus), S(Top)]),
        ps(&[S(MPlus), S(NMinus), P(Top)]),
    ];
    if cores.iter().any(|&c| c.is_subset_of(g)) {
        return Some(1);
    }
    if ps(&[P(MPlus), P(NMinus), S(Top)]).is_subset_of(g)
        && gm.intersects(ps(&[P(MPlus), P(NMinus)]))
    {
        return Some(2);
    }
    if gm.contains(P(Top)) && ps(&[S(MMinus), S(NPlus)]).is_subset_of(gt) {
        return Some(3);
    }
    if gm.is_subset_of(ps(&[P(Top), P(NPlus)]))
        && gn == ps(&[P(Top), P(MPlus), P(NPlus), P(NMinus)])
        && gt.contains(S(Top))
        && gt.is_subset_of(ps(&[S(Top), S(MPlus)]))
    {
        return Some(4);
    }
    if gm.is_empty()
        && gn.contains(P(Top))
        && gn.is_subset_of(ps(&[P(Top), P(NPlus)]))
        && gt == ps(&[S(Top), S(MPlus), S(MMinus), S(NPlus)])
    {
        return Some(5);
    }
    None
}

/// Up-closed subsets of `P − ⊥` (plain) or `P* − ⊥*` (starred).
pub fn up_closed_no_bot(starred: bool) -> Vec<PromiseSet> {
    let members: Vec<Promise> = BASES
        .iter()
        .skip(1)
        .map(|&b| if starred { S(b) } else { P(b) })
        .collect();
    let mut out = Vec::new();
    for bits in 0..(1u32 << members.len()) {
        let s = PromiseSet::of(
            members.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &p)| p),
        );
        if s.is_up_closed() {
            out.push(s);
        }
    }
    out
}

/// Full enumeration of one bridging lemma: every blocking triple satisfies
/// some outcome. Returns (total blocking triples, tally per first outcome)
/// or the offending triple.
pub fn enumerate_bridging_lemma(
    outcome: impl Fn(PromiseSet, PromiseSet, PromiseSet) -> Option<u8>,
    outcome_count: usize,
) -> Result<(u64, Vec<u64>)> {
    let plains = up_closed_no_bot(false);
    let starreds = up_closed_no_bot(true);
    let mut total = 0u64;
    let mut tally = vec![0u64; outcome_count];
    for &gm in &plains {
        for &gn in &plains {
            for &gt in &starreds {
                if !is_blocking(gm.union(gn).union(gt)) {
                    continue;
                }
                total += 1;
                match outcome(gm, gn, gt) {
                    Some(k) => tally[(k - 1) as usize] += 1,
                    None => {
                        return Err(Error::TheoremViolation(format!(
                            "no outcome for triple γ̄₁={gm}, γ̄₂={gn}, γ̄*={gt}"
                        )))
                    }
                }
            }
        }
    }
    Ok((total, tally))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert!(promise_leq(P(MPlus), P(Top))); // ⊤ ≥ M+
        assert!(promise_leq(P(Bot), P(Top)));
        assert!(!promise_leq(P(MPlus), P(NMinus)));
        assert!(!promise_leq(P(NMinus), P(MPlus)));
        for p in Promise::all() {
            assert!(promise_leq(p, p));
            assert!(!promise_leq(p, p.star()) || p == p.star());
        }
        // starred order mirrors plain
        assert!(promise_leq(S(MMinus), S(Top)));
    }

    #[test]
    fn order_is_partial_order() {
        for p in Promise::all() {
            for q in Promise::all() {
                if promise_leq(p, q) && promise_leq(q, p) {
                    assert_eq!(p, q);
                }
                for r in Promise::all() {
                    if promise_leq(p, q) && promise_leq(q, r) {
                        assert!(promise_leq(p, r));
                    }
                }
            }
        }
    }

    #[test]
    fn hasse_is_the_six_generators() {
        let mut edges = hasse_edges();
        edges.sort();
        let mut expect = GENERATORS.to_vec();
        expect.sort();
        assert_eq!(edges, expect);
    }

    #[test]
    fn blocking_examples() {
        assert!(is_blocking(ps(&[P(Bot)])));
        assert!(is_blocking(ps(&[P(MMinus), P(NPlus), S(Top)])));
        assert!(!is_blocking(ps(&[P(MPlus), P(NPlus)])));
        assert!(is_blocking(PromiseSet::ALL));
        // up-closure of {M−} = {M−, M+, ⊤}: not blocking
        let up = ps(&[P(MMinus)]).up_closure();
        assert_eq!(up, ps(&[P(MMinus), P(MPlus), P(Top)]));
        assert!(!is_blocking(up));
    }

    #[test]
    fn blockstr_sweep() {
        verify_blockstr().unwrap();
    }

    #[test]
    fn lem5_minus_example_triple() {
        // γ̄_{M−} = up{M−}, γ̄_{N+} = up{N+}, γ̄_{⊤*} = {⊤*}: outcome 2
        let gm = ps(&[P(MMinus)]).up_closure();
        let gn = ps(&[P(NPlus)]).up_closure();
        let gt = ps(&[S(Top)]);
        assert!(is_blocking(gm.union(gn).union(gt)));
        assert_eq!(lem5_minus_outcome(gm, gn, gt), Some(2));
    }

    #[test]
    fn bridging_lemmas_enumerate() {
        let (total5, tally5) = enumerate_bridging_lemma(lem5_minus_outcome, 7).unwrap();
        assert!(total5 > 0);
        assert_eq!(total5, tally5.iter().sum::<u64>());
        let (total4, tally4) = enumerate_bridging_lemma(lem4_minus_outcome, 5).unwrap();
        assert!(total4 > 0);
        assert_eq!(total4, tally4.iter().sum::<u64>());
    }

    #[test]
    fn promise_parse_display_roundtrip() {
        for p in Promise::all() {
            assert_eq!(Promise::parse(&p.to_string()).unwrap(), p);
        }
        assert!(Promise::parse("junk").is_err());
    }
}
