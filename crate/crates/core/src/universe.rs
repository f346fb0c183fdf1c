//! Alternatives, unordered pairs, choice functions on pairs, relabelings and
//! tournaments.
//!
//! Alternatives are the integers `0..m`. Unordered pairs `{i, j}` with `i < j`
//! are listed lexicographically: `{0,1}, {0,2}, …, {0,m-1}, {1,2}, …`. A choice
//! function stores one bit per pair in that order; a set bit means the larger
//! index is chosen.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_ALTERNATIVES: usize = 2;
pub const MAX_ALTERNATIVES: usize = 8;

pub(crate) fn check_alternatives(m: usize) -> Result<()> {
    if (MIN_ALTERNATIVES..=MAX_ALTERNATIVES).contains(&m) {
        Ok(())
    } else {
        Err(Error::AlternativeCount(m))
    }
}

/// Number of unordered pairs over `m` alternatives.
pub const fn pair_count(m: usize) -> usize {
    m * (m - 1) / 2
}

/// Position of the pair `{a, b}` in the canonical pair order.
///
/// Panics if `a == b`.
pub fn pair_index(m: usize, a: u8, b: u8) -> usize {
    assert!(a != b, "pair with identical elements");
    let (i, j) = if a < b { (a as usize, b as usize) } else { (b as usize, a as usize) };
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// The ground set of alternatives together with its canonical pair list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    m: usize,
    pairs: Vec<(u8, u8)>,
}

impl Universe {
    pub fn new(m: usize) -> Result<Self> {
        check_alternatives(m)?;
        let pairs = (0..m as u8).tuple_combinations().collect();
        Ok(Self { m, pairs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    pub fn pair(&self, k: usize) -> (u8, u8) {
        self.pairs[k]
    }

    pub fn pair_index(&self, a: u8, b: u8) -> usize {
        pair_index(self.m, a, b)
    }

    /// Number of choice functions, `2^(m(m-1)/2)`.
    pub fn choice_count(&self) -> u64 {
        1u64 << self.pairs.len()
    }

    pub fn choice_functions(&self) -> impl Iterator<Item = ChoiceFunction> + '_ {
        let m = self.m as u8;
        (0..self.choice_count()).map(move |bits| ChoiceFunction { m, bits: bits as u32 })
    }

    pub fn permutations(&self) -> impl Iterator<Item = Permutation> {
        (0..self.m as u8)
            .permutations(self.m)
            .map(|image| Permutation { image })
    }
}

/// A bijection of `0..m`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn new(image: Vec<u8>) -> Result<Self> {
        check_alternatives(image.len())?;
        let mut seen = [false; MAX_ALTERNATIVES];
        for &v in &image {
            let v = v as usize;
            if v >= image.len() || seen[v] {
                return Err(Error::InvalidInput(format!("{image:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(m: usize) -> Self {
        Self { image: (0..m as u8).collect() }
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(m: usize, a: u8, b: u8) -> Self {
        let mut image: Vec<u8> = (0..m as u8).collect();
        image.swap(a as usize, b as usize);
        Self { image }
    }

    /// The cycle `0 → 1 → … → m-1 → 0`.
    pub fn cycle(m: usize) -> Self {
        Self { image: (0..m as u8).map(|i| (i + 1) % m as u8).collect() }
    }

    /// `{(0 1), (0 1 … m-1)}`, which generates the full symmetric group.
    pub fn generators(m: usize) -> [Self; 2] {
        [Self::transposition(m, 0, 1), Self::cycle(m)]
    }

    pub fn m(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[u8] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.image[x as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0u8; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize] = i as u8;
        }
        Self { image }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { image: other.image.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i as u8 == v)
    }
}

/// A selection of one element from every unordered pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceFunction {
    m: u8,
    bits: u32,
}

impl ChoiceFunction {
    pub fn new(m: usize, bits: u32) -> Result<Self> {
        check_alternatives(m)?;
        let n = pair_count(m);
        if n < 32 && bits >> n != 0 {
            return Err(Error::SizeMismatch(format!("bits {bits:#b} exceed {n} pairs")));
        }
        Ok(Self { m: m as u8, bits })
    }

    /// Builds a choice function from a winner rule `winner(i, j)` for `i < j`.
    pub fn from_fn(m: usize, mut winner: impl FnMut(u8, u8) -> u8) -> Result<Self> {
        check_alternatives(m)?;
        let mut bits = 0u32;
        for (k, (i, j)) in (0..m as u8).tuple_combinations().enumerate() {
            let w = winner(i, j);
            if w == j {
                bits |= 1 << k;
            } else if w != i {
                return Err(Error::InvalidInput(format!("{w} is not in pair {{{i},{j}}}")));
            }
        }
        Ok(Self { m: m as u8, bits })
    }

    /// The choice function of a linear order listed best-first: from every
    /// pair the element appearing earlier in `order` is chosen.
    pub fn from_order(order: &[u8]) -> Result<Self> {
        let rank = Permutation::new(order.to_vec())?.inverse();
        Self::from_fn(order.len(), |i, j| if rank.apply(i) < rank.apply(j) { i } else { j })
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The element chosen from the `k`-th canonical pair.
    #[inline]
    pub fn choose_pair(&self, k: usize) -> u8 {
        let (i, j) = pair_at(self.m as usize, k);
        if self.bits >> k & 1 == 1 {
            j
        } else {
            i
        }
    }

    /// The element chosen from `{a, b}`.
    #[inline]
    pub fn choose(&self, a: u8, b: u8) -> u8 {
        let k = pair_index(self.m as usize, a, b);
        if self.bits >> k & 1 == 1 {
            a.max(b)
        } else {
            a.min(b)
        }
    }

    /// The relabeled function `c_σ(b) = σ⁻¹(c(σ(b)))`. This is a right
    /// action: `act(act(c, σ), τ) = act(c, σ ∘ τ)`.
    pub fn act(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.m() != self.m() {
            return Err(Error::SizeMismatch(format!(
                "choice function over {} alternatives, permutation over {}",
                self.m,
                sigma.m()
            )));
        }
        let inv = sigma.inverse();
        Self::from_fn(self.m(), |i, j| inv.apply(self.choose(sigma.apply(i), sigma.apply(j))))
    }

    pub fn tournament(&self) -> Tournament {
        Tournament::from_choice(self)
    }

    /// True iff the induced tournament is transitive, i.e. the function is
    /// the choice function of some linear order.
    pub fn is_rational(&self) -> bool {
        let m = self.m;
        for a in 0..m {
            for b in 0..m {
                if a == b || self.choose(a, b) != a {
                    continue;
                }
                for c in 0..m {
                    if c != a && c != b && self.choose(b, c) == b && self.choose(a, c) != a {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bitstring over the canonical pair order, `'1'` where the larger
    /// element is chosen.
    pub fn to_bitstring(&self) -> String {
        (0..pair_count(self.m())).map(|k| if self.bits >> k & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(m: usize, s: &str) -> Result<Self> {
        check_alternatives(m)?;
        if s.len() != pair_count(m) {
            return Err(Error::Parse(format!("expected {} bits, got {:?}", pair_count(m), s)));
        }
        let mut bits = 0u32;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << k,
                _ => return Err(Error::Parse(format!("bad character {ch:?} in {s:?}"))),
            }
        }
        Ok(Self { m: m as u8, bits })
    }
}

impl fmt::Debug for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChoiceFunction(m={}, {})", self.m, self.to_bitstring())
    }
}

impl fmt::Display for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// The `k`-th pair in canonical order.
pub fn pair_at(m: usize, mut k: usize) -> (u8, u8) {
    let mut i = 0;
    while k >= m - 1 - i {
        k -= m - 1 - i;
        i += 1;
    }
    (i as u8, (i + 1 + k) as u8)
}

#[derive(Serialize, Deserialize)]
struct ChoiceJson {
    m: usize,
    bits: String,
}

impl Serialize for ChoiceFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChoiceJson { m: self.m(), bits: self.to_bitstring() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChoiceFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ChoiceJson::deserialize(d)?;
        ChoiceFunction::from_bitstring(raw.m, &raw.bits).map_err(serde::de::Error::custom)
    }
}

/// A complete asymmetric relation: one winner per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    m: usize,
    winners: Vec<u8>,
}

impl Tournament {
    pub fn new(m: usize, winners: Vec<u8>) -> Result<Self> {
        check_alternatives(m)?;
        if winners.len() != pair_count(m) {
            return Err(Error::SizeMismatch(format!(
                "{} winners for {} pairs",
                winners.len(),
                pair_count(m)
            )));
        }
        for (k, &w) in winners.iter().enumerate() {
            let (i, j) = pair_at(m, k);
            if w != i && w != j {
                return Err(Error::InvalidInput(format!("{w} is not in pair {{{i},{j}}}")));
            }
        }
        Ok(Self { m, winners })
    }

    pub fn from_choice(c: &ChoiceFunction) -> Self {
        let m = c.m();
        Self { m, winners: (0..pair_count(m)).map(|k| c.choose_pair(k)).collect() }
    }

    pub fn to_choice(&self) -> ChoiceFunction {
        let mut bits = 0u32;
        for (k, &w) in self.winners.iter().enumerate() {
            if w == pair_at(self.m, k).1 {
                bits |= 1 << k;
            }
        }
        ChoiceFunction { m: self.m as u8, bits }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn winners(&self) -> &[u8] {
        &self.winners
    }

    /// Whether `a` beats `b`.
    pub fn beats(&self, a: u8, b: u8) -> bool {
        a != b && self.winners[pair_index(self.m, a, b)] == a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rps() -> (ChoiceFunction, ChoiceFunction) {
        // c1: {0,1}→0, {1,2}→1, {0,2}→2; c2 reverses every choice.
        let c1 = ChoiceFunction::from_fn(3, |i, j| match (i, j) {
            (0, 1) => 0,
            (1, 2) => 1,
            _ => 2,
        })
        .unwrap();
        let c2 = ChoiceFunction::new(3, !c1.bits() & 0b111).unwrap();
        (c1, c2)
    }

    fn rational_oracle(c: &ChoiceFunction) -> bool {
        let u = Universe::new(c.m()).unwrap();
        u.permutations()
            .any(|order| ChoiceFunction::from_order(order.image()).unwrap() == *c)
    }

    #[test]
    fn pair_order_is_lexicographic() {
        let u = Universe::new(4).unwrap();
        assert_eq!(u.pairs(), &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (k, &(i, j)) in u.pairs().iter().enumerate() {
            assert_eq!(pair_index(4, i, j), k);
            assert_eq!(pair_index(4, j, i), k);
            assert_eq!(pair_at(4, k), (i, j));
        }
    }

    #[test]
    fn universe_bounds() {
        assert!(Universe::new(1).is_err());
        assert!(Universe::new(9).is_err());
        assert_eq!(Universe::new(8).unwrap().pairs().len(), 28);
    }

    #[test]
    fn identity_action_is_trivial() {
        let u = Universe::new(4).unwrap();
        let id = Permutation::identity(4);
        for c in u.choice_functions() {
            assert_eq!(c.act(&id).unwrap(), c);
        }
    }

    #[test]
    fn rps_orbit() {
        let (c1, c2) = rps();
        assert_eq!(c1.to_bitstring(), "010");
        let rot = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(c1.act(&rot).unwrap(), c1);
        let orbit: std::collections::BTreeSet<_> =
            Universe::new(3).unwrap().permutations().map(|s| c1.act(&s).unwrap()).collect();
        assert_eq!(orbit.into_iter().collect::<Vec<_>>(), {
            let mut v = vec![c1, c2];
            v.sort();
            v
        });
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let c = ChoiceFunction::new(3, 0).unwrap();
        assert!(matches!(c.act(&Permutation::identity(4)), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn rationality() {
        let smaller_wins = ChoiceFunction::from_order(&[0, 1, 2]).unwrap();
        assert_eq!(smaller_wins.bits(), 0);
        assert!(smaller_wins.is_rational());
        let (c1, c2) = rps();
        assert!(!c1.is_rational() && !c2.is_rational());
        let u4 = Universe::new(4).unwrap();
        assert_eq!(u4.choice_functions().filter(|c| c.is_rational()).count(), 24);
    }

    #[test]
    fn rationality_matches_order_enumeration() {
        for m in 2..=5 {
            let u = Universe::new(m).unwrap();
            let orders: std::collections::HashSet<_> =
                u.permutations().map(|p| ChoiceFunction::from_order(p.image()).unwrap()).collect();
            for c in u.choice_functions() {
                assert_eq!(c.is_rational(), orders.contains(&c), "{c:?}");
            }
        }
        // the oracle helper agrees on a few hand-picked cases as well
        assert!(rational_oracle(&ChoiceFunction::from_order(&[2, 0, 1]).unwrap()));
        assert!(!rational_oracle(&rps().0));
    }

    #[test]
    fn choice_count() {
        for m in 2..=4 {
            let u = Universe::new(m).unwrap();
            let all: std::collections::HashSet<_> = u.choice_functions().collect();
            assert_eq!(all.len() as u64, 1u64 << pair_count(m));
        }
    }

    #[test]
    fn tournaments() {
        let u = Universe::new(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for c in u.choice_functions() {
            let t = c.tournament();
            assert_eq!(t.to_choice(), c);
            assert_eq!(Tournament::new(3, t.winners().to_vec()).unwrap(), t);
            seen.insert(t);
        }
        assert_eq!(seen.len(), 8);
        // a1 wins every pair it is in
        let t = Tournament::new(3, vec![1, 0, 1]).unwrap();
        let c = t.to_choice();
        assert_eq!(c.choose(0, 1), 1);
        assert_eq!(c.choose(1, 2), 1);
        assert!(t.beats(1, 0) && !t.beats(0, 1));
        assert_eq!(Universe::new(5).unwrap().choice_count(), 1024);
    }

    #[test]
    fn bitstring_and_json() {
        let c = ChoiceFunction::from_bitstring(4, "011010").unwrap();
        assert_eq!(c.to_bitstring(), "011010");
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"m":4,"bits":"011010"}"#);
        let back: ChoiceFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(ChoiceFunction::from_bitstring(4, "01101").is_err());
        assert!(ChoiceFunction::from_bitstring(3, "01x").is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
