//! Sets of choice functions as restricted domains: invariance under a rule,
//! triviality, symmetry and searches for invariant sets.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::Rule;
use crate::universe::{check_alternatives, pair_count, ChoiceFunction, Permutation, Universe};

/// A set of choice functions over one universe, kept sorted by bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DomainJson", into = "DomainJson")]
pub struct DomainSet {
    m: u8,
    members: Vec<ChoiceFunction>,
}

#[derive(Serialize, Deserialize)]
struct DomainJson {
    m: usize,
    members: Vec<String>,
}

impl TryFrom<DomainJson> for DomainSet {
    type Error = Error;
    fn try_from(raw: DomainJson) -> Result<Self> {
        let members = raw
            .members
            .iter()
            .map(|s| ChoiceFunction::from_bitstring(raw.m, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.m, members)
    }
}

impl From<DomainSet> for DomainJson {
    fn from(d: DomainSet) -> Self {
        Self { m: d.m(), members: d.members.iter().map(ChoiceFunction::to_bitstring).collect() }
    }
}

impl DomainSet {
    pub fn new(m: usize, members: impl IntoIterator<Item = ChoiceFunction>) -> Result<Self> {
        check_alternatives(m)?;
        let mut members: Vec<ChoiceFunction> = members.into_iter().collect();
        if let Some(c) = members.iter().find(|c| c.m() != m) {
            return Err(Error::SizeMismatch(format!("{c:?} is not over {m} alternatives")));
        }
        members.sort_by_key(|c| c.bits());
        members.dedup();
        Ok(Self { m: m as u8, members })
    }

    /// All choice functions.
    pub fn full(m: usize) -> Result<Self> {
        Self::new(m, Universe::new(m)?.choice_functions())
    }

    /// The choice functions of linear orders.
    pub fn rational(m: usize) -> Result<Self> {
        Self::new(m, Universe::new(m)?.choice_functions().filter(ChoiceFunction::is_rational))
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ChoiceFunction] {
        &self.members
    }

    pub fn contains(&self, c: &ChoiceFunction) -> bool {
        self.members.binary_search_by_key(&c.bits(), |d| d.bits()).is_ok()
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::SizeMismatch("domains over different universes".into()));
        }
        Self::new(self.m(), self.members.iter().filter(|c| other.contains(c)).copied())
    }

    /// `D_σ = {d_σ : d ∈ D}`.
    pub fn act(&self, sigma: &Permutation) -> Result<Self> {
        Self::new(self.m(), self.members.iter().map(|c| c.act(sigma)).collect::<Result<Vec<_>>>()?)
    }

    /// All images `D_σ`, σ ranging over every permutation.
    pub fn orbit(&self) -> Result<DomainClass> {
        let sets = Universe::new(self.m())?
            .permutations()
            .map(|s| self.act(&s))
            .collect::<Result<Vec<_>>>()?;
        Ok(DomainClass::new(sets))
    }

    /// `D_σ = D` for all σ, checked on a transposition and an m-cycle.
    pub fn is_symmetric(&self) -> Result<bool> {
        for s in Permutation::generators(self.m()) {
            if self.act(&s)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mask of the pairs on which all members choose the same element.
    pub fn agreement_pairs(&self) -> Result<u32> {
        let first = self.members.first().ok_or_else(|| Error::InvalidInput("empty domain".into()))?;
        let full = if pair_count(self.m()) == 32 { u32::MAX } else { (1u32 << pair_count(self.m())) - 1 };
        Ok(self.members.iter().fold(full, |z, c| z & !(c.bits() ^ first.bits())))
    }

    /// Whether `D = {c : c agrees with d on X}` for some `d` and pair set `X`;
    /// decided by `|D| = 2^(|pairs| − |agreement set|)`.
    pub fn is_trivial(&self) -> Result<bool> {
        let z = self.agreement_pairs()?.count_ones() as usize;
        let free = pair_count(self.m()) - z;
        Ok(free < usize::BITS as usize && self.len() == 1usize << free)
    }

    /// Literal form of triviality: tries every pair set `X` and every `d ∈ D`.
    pub fn is_trivial_by_definition(&self) -> Result<bool> {
        if self.m() > 4 {
            return Err(Error::Unsupported("literal triviality check beyond 4 alternatives".into()));
        }
        if self.is_empty() {
            return Err(Error::InvalidInput("empty domain".into()));
        }
        let pairs = pair_count(self.m());
        let all: Vec<ChoiceFunction> = Universe::new(self.m())?.choice_functions().collect();
        for x in 0u32..1 << pairs {
            for d in &self.members {
                let class: Vec<ChoiceFunction> =
                    all.iter().filter(|c| (c.bits() ^ d.bits()) & x == 0).copied().collect();
                if class == self.members {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Inputs drawn from `D` whose image under `rule` leaves `D`, if any.
    pub fn invariance_violation(&self, rule: &Rule) -> Result<Option<(Vec<ChoiceFunction>, ChoiceFunction)>> {
        if rule.m() != self.m() {
            return Err(Error::SizeMismatch(format!(
                "rule over {} alternatives, domain over {}",
                rule.m(),
                self.m()
            )));
        }
        for args in (0..rule.arity()).map(|_| self.members.iter().copied()).multi_cartesian_product() {
            let out = rule.apply(&args)?;
            if !self.contains(&out) {
                return Ok(Some((args, out)));
            }
        }
        Ok(None)
    }

    pub fn is_invariant(&self, rule: &Rule) -> Result<bool> {
        Ok(self.invariance_violation(rule)?.is_none())
    }

    /// Membership mask over `C` (bit `c.bits()`), for `m ≤ 3`.
    pub fn subset_index(&self) -> Result<u8> {
        if self.m() != 3 {
            return Err(Error::Unsupported("subset index needs exactly 3 alternatives".into()));
        }
        Ok(self.members.iter().fold(0u8, |s, c| s | 1 << c.bits()))
    }

    pub fn from_subset_index(index: u8) -> Self {
        let members = (0..8u32).filter(|b| index >> b & 1 == 1).map(|b| ChoiceFunction::new(3, b).unwrap());
        Self::new(3, members).unwrap()
    }
}

/// A set of domains, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainClass {
    sets: Vec<DomainSet>,
}

impl DomainClass {
    pub fn new(sets: impl IntoIterator<Item = DomainSet>) -> Self {
        let sets: BTreeSet<DomainSet> = sets.into_iter().collect();
        Self { sets: sets.into_iter().collect() }
    }

    pub fn sets(&self) -> &[DomainSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Closed under the relabeling action.
    pub fn is_symmetric(&self) -> Result<bool> {
        let Some(first) = self.sets.first() else { return Ok(true) };
        for s in Permutation::generators(first.m()) {
            for d in &self.sets {
                if self.sets.binary_search(&d.act(&s)?).is_err() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Which of the 256 subsets of `C` (3 alternatives) are invariant for
/// `rule`, indexed by [`DomainSet::subset_index`]. The empty set counts as
/// invariant.
pub fn invariant_family(rule: &Rule) -> Result<Vec<bool>> {
    if rule.m() != 3 {
        return Err(Error::Unsupported(format!(
            "exhaustive invariant families need 3 alternatives, got {}",
            rule.m()
        )));
    }
    let table = rule.tabulate()?;
    let n = rule.arity();
    Ok((0..=255u8)
        .map(|s| {
            let members: Vec<u32> = (0..8).filter(|b| s >> b & 1 == 1).collect();
            (0..n)
                .map(|_| members.iter().copied())
                .multi_cartesian_product()
                .all(|args| {
                    let code = args.iter().rev().fold(0usize, |acc, &b| acc * 8 + b as usize);
                    s >> table.table()[code] & 1 == 1
                })
        })
        .collect())
}

/// `Inv f = Inv g`, by enumerating every subset of `C` (3 alternatives).
pub fn invariantly_equivalent_exhaustive(f: &Rule, g: &Rule) -> Result<bool> {
    Ok(invariant_family(f)? == invariant_family(g)?)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFilter {
    pub symmetric: bool,
    pub nontrivial: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub found: Vec<DomainSet>,
    pub examined: u64,
    /// False when the candidate budget ran out first.
    pub complete: bool,
}

/// Invariant sets of at most `max_size` members that pass `filter`, in a
/// fixed order. With `symmetric` set only unions of orbits of single choice
/// functions are generated, so larger sizes stay cheap.
pub fn bounded_invariant_search(
    rule: &Rule,
    max_size: usize,
    filter: SearchFilter,
    budget: u64,
) -> Result<SearchOutcome> {
    let m = rule.m();
    if m > 5 {
        return Err(Error::Unsupported(format!("invariant search at {m} alternatives")));
    }
    if m == 5 && !filter.symmetric && max_size > 4 {
        return Err(Error::Precondition("sets larger than 4 are not searched at 5 alternatives".into()));
    }
    let all: Vec<ChoiceFunction> = Universe::new(m)?.choice_functions().collect();
    let mut found = Vec::new();
    let mut examined = 0u64;
    let mut consider = |d: DomainSet, examined: &mut u64| -> Result<bool> {
        *examined += 1;
        if *examined > budget {
            return Ok(false);
        }
        if filter.nontrivial && d.is_trivial()? {
            return Ok(true);
        }
        if filter.symmetric && !d.is_symmetric()? {
            return Ok(true);
        }
        if d.is_invariant(rule)? {
            found.push(d);
        }
        Ok(true)
    };

    if filter.symmetric {
        let mut orbits: Vec<Vec<ChoiceFunction>> = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &all {
            if seen.contains(c) {
                continue;
            }
            let orbit = DomainSet::new(m, [*c])?.orbit()?;
            let members: BTreeSet<ChoiceFunction> =
                orbit.sets().iter().flat_map(|d| d.members().iter().copied()).collect();
            seen.extend(members.iter().copied());
            orbits.push(members.into_iter().collect());
        }
        orbits.sort_by_key(|o| (o.len(), o[0].bits()));
        for k in 1..=orbits.len() {
            for combo in (0..orbits.len()).combinations(k) {
                let size: usize = combo.iter().map(|&i| orbits[i].len()).sum();
                if size > max_size {
                    continue;
                }
                let d = DomainSet::new(m, combo.iter().flat_map(|&i| orbits[i].iter().copied()))?;
                if !consider(d, &mut examined)? {
                    return Ok(SearchOutcome { found, examined: budget, complete: false });
                }
            }
        }
    } else {
        for k in 1..=max_size.min(all.len()) {
            for combo in all.iter().copied().combinations(k) {
                if !consider(DomainSet::new(m, combo)?, &mut examined)? {
                    return Ok(SearchOutcome { found, examined: budget, complete: false });
                }
            }
        }
    }
    Ok(SearchOutcome { found, examined, complete: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{CayleyRule, SpecialRule};

    fn rps() -> DomainSet {
        // {a0,a1} → a0, {a0,a2} → a2, {a1,a2} → a1 and its mirror
        let c1 = ChoiceFunction::from_fn(3, |i, j| match (i, j) {
            (0, 1) => 0,
            (1, 2) => 1,
            _ => 2,
        })
        .unwrap();
        let c2 = ChoiceFunction::from_fn(3, |i, j| match (i, j) {
            (0, 1) => 1,
            (1, 2) => 2,
            _ => 0,
        })
        .unwrap();
        DomainSet::new(3, [c1, c2]).unwrap()
    }

    #[test]
    fn rock_paper_scissors() {
        let d = rps();
        assert!(d.is_symmetric().unwrap());
        assert!(!d.is_trivial().unwrap());
        assert_eq!(d.agreement_pairs().unwrap(), 0);
        assert!(d.is_invariant(&CayleyRule::A3.rule()).unwrap());
        assert_eq!(d.orbit().unwrap().len(), 1);
    }

    #[test]
    fn triviality_matches_definition_at_three() {
        for s in 1..=255u8 {
            let d = DomainSet::from_subset_index(s);
            assert_eq!(d.is_trivial().unwrap(), d.is_trivial_by_definition().unwrap(), "{s:#b}");
        }
        assert!(DomainSet::full(4).unwrap().is_trivial().unwrap());
    }

    #[test]
    fn condorcet_for_majority() {
        let rational = DomainSet::rational(3).unwrap();
        assert_eq!(rational.len(), 6);
        let (args, out) = rational.invariance_violation(&SpecialRule::Mu.rule(3).unwrap()).unwrap().unwrap();
        assert!(args.iter().all(ChoiceFunction::is_rational));
        assert!(!out.is_rational());
    }

    #[test]
    fn families_and_equivalence() {
        let delta = SpecialRule::Delta.rule(3).unwrap();
        let mu = SpecialRule::Mu.rule(3).unwrap();
        assert!(invariant_family(&delta).unwrap().iter().all(|&b| b));
        assert!(invariantly_equivalent_exhaustive(&mu, &mu).unwrap());
        assert!(!invariantly_equivalent_exhaustive(&delta, &mu).unwrap());
        let fam = invariant_family(&mu).unwrap();
        let rational = DomainSet::rational(3).unwrap().subset_index().unwrap();
        assert!(!fam[rational as usize]);
    }

    #[test]
    fn searches() {
        let mu = SpecialRule::Mu.rule(3).unwrap();
        let pairs = bounded_invariant_search(&mu, 2, SearchFilter::default(), u64::MAX).unwrap();
        assert!(pairs.complete);
        assert_eq!(pairs.found.len(), 8 + 28);
        let a3 = bounded_invariant_search(
            &CayleyRule::A3.rule(),
            2,
            SearchFilter { symmetric: true, nontrivial: true },
            u64::MAX,
        )
        .unwrap();
        assert_eq!(a3.found, vec![rps()]);
        let cut = bounded_invariant_search(&mu, 3, SearchFilter::default(), 10).unwrap();
        assert!(!cut.complete);
    }

    #[test]
    fn json_form() {
        let d = rps();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"m":3,"members":["010","101"]}"#);
        assert_eq!(serde_json::from_str::<DomainSet>(&json).unwrap(), d);
    }
}
