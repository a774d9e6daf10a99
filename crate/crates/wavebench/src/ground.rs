//! Ordered ground sets and bitmask subsets.
//!
//! Every matroid in this crate lives on a [`GroundSet`]: an ordered list of
//! distinct element names, at most [`MAX_GROUND`] of them. Subsets are
//! [`Mask`] values, bit `i` standing for the `i`-th element in construction
//! order. All canonical encodings (serialization, subset enumeration order,
//! witness tie-breaking) use this order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on ground set size; everything is brute-forced over `2^n` masks.
pub const MAX_GROUND: usize = 16;

/// A subset of a ground set, encoded as a bitmask in construction order.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mask(pub u32);

impl Mask {
    pub const EMPTY: Mask = Mask(0);

    pub fn full(n: usize) -> Mask {
        debug_assert!(n <= MAX_GROUND);
        Mask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Mask {
        Mask(1 << i)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Mask {
        Mask(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Mask {
        Mask(self.0 & !(1 << i))
    }

    pub fn union(self, other: Mask) -> Mask {
        Mask(self.0 | other.0)
    }

    pub fn intersect(self, other: Mask) -> Mask {
        Mask(self.0 & other.0)
    }

    pub fn minus(self, other: Mask) -> Mask {
        Mask(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Mask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Mask) -> bool {
        self.0 & other.0 != 0
    }

    /// Lowest set bit, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Iterate the element indices in ascending order.
    pub fn iter(self) -> BitIter {
        BitIter(self.0)
    }

    /// All submasks of `self` in ascending numeric order (canonical
    /// enumeration order for witness searches).
    pub fn submasks(self) -> SubmaskIter {
        SubmaskIter { universe: self.0, cur: 0, done: false }
    }

    /// All submasks in descending numeric order.
    pub fn submasks_desc(self) -> impl Iterator<Item = Mask> {
        let universe = self.0;
        let mut cur = universe;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Mask(cur);
            if cur == 0 {
                done = true;
            } else {
                cur = (cur - 1) & universe;
            }
            Some(out)
        })
    }

    /// Re-index `self`'s bits relative to the positions of `keep`:
    /// bit `i` of the result is the `i`-th lowest element of `keep` that is
    /// in `self`. Requires `self ⊆ keep`.
    pub fn compress(self, keep: Mask) -> Mask {
        debug_assert!(self.is_subset_of(keep));
        let mut out = 0u32;
        let mut pos = 0;
        for i in keep.iter() {
            if self.contains(i) {
                out |= 1 << pos;
            }
            pos += 1;
        }
        Mask(out)
    }

    /// Inverse of [`Mask::compress`]: map bits back into the positions of
    /// `keep`.
    pub fn expand(self, keep: Mask) -> Mask {
        let mut out = 0u32;
        for (pos, i) in keep.iter().enumerate() {
            if self.contains(pos) {
                out |= 1 << i;
            }
        }
        Mask(out)
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask({:#b})", self.0)
    }
}

pub struct BitIter(u32);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub struct SubmaskIter {
    universe: u32,
    cur: u32,
    done: bool,
}

impl Iterator for SubmaskIter {
    type Item = Mask;
    fn next(&mut self) -> Option<Mask> {
        if self.done {
            return None;
        }
        let out = Mask(self.cur);
        if self.cur == self.universe {
            self.done = true;
        } else {
            // ascending submask enumeration: (cur - universe) & universe
            self.cur = self.cur.wrapping_sub(self.universe) & self.universe;
        }
        Some(out)
    }
}

/// An ordered set of distinct element names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    names: Arc<Vec<String>>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<GroundSet> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_GROUND {
            return Err(Error::invalid(format!(
                "ground set has {} elements, cap is {}",
                names.len(),
                MAX_GROUND
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::invalid("empty element name"));
            }
            if names[..i].contains(a) {
                return Err(Error::invalid(format!("duplicate element `{a}`")));
            }
        }
        Ok(GroundSet { names: Arc::new(names) })
    }

    /// Ground set `a b c ...` of the first `n` lowercase letters.
    pub fn letters(n: usize) -> GroundSet {
        assert!(n <= MAX_GROUND);
        GroundSet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string())).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn full_mask(&self) -> Mask {
        Mask::full(self.len())
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mask_of<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<Mask> {
        let mut m = Mask::EMPTY;
        for n in names {
            let n = n.as_ref();
            match self.index_of(n) {
                Some(i) => m = m.with(i),
                None => return Err(Error::invalid(format!("unknown element `{n}`"))),
            }
        }
        Ok(m)
    }

    /// The sub-ground of the elements in `keep`, preserving order.
    pub fn restrict(&self, keep: Mask) -> GroundSet {
        GroundSet {
            names: Arc::new(keep.iter().map(|i| self.names[i].clone()).collect()),
        }
    }

    /// Render a mask as `{a,b}` in ground order.
    pub fn show(&self, mask: Mask) -> String {
        let mut s = String::from("{");
        for (k, i) in mask.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&self.names[i]);
        }
        s.push('}');
        s
    }

    /// Translate a mask from this ground into `other` by element name.
    /// Fails if some element is missing over there.
    pub fn translate(&self, mask: Mask, other: &GroundSet) -> Result<Mask> {
        let mut out = Mask::EMPTY;
        for i in mask.iter() {
            match other.index_of(&self.names[i]) {
                Some(j) => out = out.with(j),
                None => {
                    return Err(Error::invalid(format!(
                        "element `{}` not in target ground",
                        self.names[i]
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundSet({})", self.names.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_ascending() {
        let got: Vec<u32> = Mask(0b101).submasks().map(|m| m.0).collect();
        assert_eq!(got, vec![0b000, 0b001, 0b100, 0b101]);
    }

    #[test]
    fn submasks_descending() {
        let got: Vec<u32> = Mask(0b101).submasks_desc().map(|m| m.0).collect();
        assert_eq!(got, vec![0b101, 0b100, 0b001, 0b000]);
    }

    #[test]
    fn compress_expand_roundtrip() {
        let keep = Mask(0b11010);
        let m = Mask(0b10010);
        let c = m.compress(keep);
        assert_eq!(c, Mask(0b101));
        assert_eq!(c.expand(keep), m);
    }

    #[test]
    fn ground_rejects_duplicates() {
        assert!(GroundSet::new(["a", "b", "a"]).is_err());
    }

    #[test]
    fn show_in_order() {
        let g = GroundSet::letters(3);
        assert_eq!(g.show(Mask(0b101)), "{a,c}");
        assert_eq!(g.show(Mask::EMPTY), "{}");
    }
}
