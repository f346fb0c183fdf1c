//! Worklist fixpoint for subalgebras generated under coordinatewise
//! application of a finite set of operations.
//!
//! The n-ary part of a clone is the subalgebra of `X^(domain)` generated by
//! the n projection tables; the same loop also closes restrictions of those
//! tables to a subset of coordinates, which is how witnesses are found
//! without enumerating a large slice.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::boolean::{row_mask, BooleanFunction, MAX_BOOLEAN_ARITY};
use crate::error::{Error, Result};
use crate::two_function::{TwoDomain, TwoFunction};

/// Caps on a closure computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_elements: usize,
    pub max_applications: u64,
}

impl Budget {
    pub const DEFAULT_ELEMENTS: usize = 2_000_000;

    pub fn elements(max_elements: usize) -> Self {
        Self { max_elements, ..Self::default() }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_elements: Self::DEFAULT_ELEMENTS, max_applications: 400_000_000 }
    }
}

/// Operations acting coordinatewise on elements of type `Elem`.
pub trait Operations {
    type Elem: Clone + Eq + Hash;
    fn generator_count(&self) -> usize;
    fn generator_arity(&self, g: usize) -> usize;
    /// `g` applied to `members[args[0]], members[args[1]], …`.
    fn apply(&self, g: usize, members: &[Self::Elem], args: &[usize]) -> Self::Elem;
}

/// How a closure element was first produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Seed(usize),
    Apply { generator: usize, args: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Closure<E> {
    pub members: Vec<E>,
    pub origins: Vec<Origin>,
    pub applications: u64,
    /// False when the `stop` predicate ended the run before the fixpoint.
    pub complete: bool,
}

impl<E: Eq + Hash> Closure<E> {
    pub fn position(&self, e: &E) -> Option<usize> {
        self.members.iter().position(|x| x == e)
    }
}

/// Semi-naive fixpoint: each round applies every generator to the argument
/// tuples that involve at least one element found in the previous round.
pub fn close<O: Operations>(
    ops: &O,
    seeds: Vec<O::Elem>,
    budget: Budget,
    mut stop: impl FnMut(&[O::Elem]) -> bool,
) -> Result<Closure<O::Elem>> {
    let mut index: HashMap<O::Elem, usize> = HashMap::new();
    let mut members = Vec::new();
    let mut origins = Vec::new();
    for (i, s) in seeds.into_iter().enumerate() {
        if !index.contains_key(&s) {
            index.insert(s.clone(), members.len());
            members.push(s);
            origins.push(Origin::Seed(i));
        }
    }
    let mut applications = 0u64;
    if stop(&members) {
        return Ok(Closure { members, origins, applications, complete: false });
    }

    let mut lo = 0;
    let mut args = Vec::new();
    let mut ranges = Vec::new();
    loop {
        let hi = members.len();
        if lo == hi {
            break;
        }
        for g in 0..ops.generator_count() {
            let k = ops.generator_arity(g);
            for first_new in 0..k {
                ranges.clear();
                ranges.extend((0..k).map(|p| match p.cmp(&first_new) {
                    std::cmp::Ordering::Less => (0, lo),
                    std::cmp::Ordering::Equal => (lo, hi),
                    std::cmp::Ordering::Greater => (0, hi),
                }));
                if ranges.iter().any(|&(a, b)| a >= b) {
                    continue;
                }
                args.clear();
                args.extend(ranges.iter().map(|r| r.0));
                'odometer: loop {
                    applications += 1;
                    if applications > budget.max_applications {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {} generator applications ({} elements so far)",
                            budget.max_applications,
                            members.len()
                        )));
                    }
                    let e = ops.apply(g, &members, &args);
                    if !index.contains_key(&e) {
                        if members.len() >= budget.max_elements {
                            return Err(Error::BudgetExceeded(format!(
                                "closure exceeds {} elements",
                                budget.max_elements
                            )));
                        }
                        index.insert(e.clone(), members.len());
                        members.push(e);
                        origins.push(Origin::Apply { generator: g, args: args.clone() });
                        if stop(&members) {
                            return Ok(Closure { members, origins, applications, complete: false });
                        }
                    }
                    for p in (0..k).rev() {
                        args[p] += 1;
                        if args[p] < ranges[p].1 {
                            continue 'odometer;
                        }
                        args[p] = ranges[p].0;
                    }
                    break;
                }
            }
        }
        lo = hi;
    }
    Ok(Closure { members, origins, applications, complete: true })
}

/// Boolean generators acting on truth tables of a fixed arity.
pub struct BooleanOps<'a> {
    generators: &'a [BooleanFunction],
    arity: usize,
}

impl<'a> BooleanOps<'a> {
    pub fn new(generators: &'a [BooleanFunction], arity: usize) -> Self {
        Self { generators, arity }
    }
}

impl Operations for BooleanOps<'_> {
    type Elem = u64;
    fn generator_count(&self) -> usize {
        self.generators.len()
    }
    fn generator_arity(&self, g: usize) -> usize {
        self.generators[g].arity()
    }
    fn apply(&self, g: usize, members: &[u64], args: &[usize]) -> u64 {
        let mut buf = [0u64; MAX_BOOLEAN_ARITY];
        for (b, &a) in buf.iter_mut().zip(args) {
            *b = members[a];
        }
        self.generators[g].apply_tables(self.arity, &buf[..args.len()])
    }
}

/// 2-function generators acting on value vectors indexed by a list of
/// coordinates (tuples of some `A^n_2`). Generators that act identically on
/// every coordinate's value set are merged.
pub struct TwoOps {
    m: usize,
    /// Per retained generator: arity and dense table over `m^k` codes.
    dense: Vec<(usize, Vec<u8>)>,
    /// Index into the caller's generator list for each retained generator.
    pub(crate) original: Vec<usize>,
}

impl TwoOps {
    pub fn new(generators: &[TwoFunction], coordinates: &[&[u8]]) -> Result<Self> {
        let m = generators.first().map(|g| g.m()).unwrap_or(2);
        if generators.iter().any(|g| g.m() != m) {
            return Err(Error::SizeMismatch("generators over different universes".into()));
        }
        let mut value_sets: Vec<(u8, u8)> = coordinates
            .iter()
            .map(|t| (*t.iter().min().unwrap(), *t.iter().max().unwrap()))
            .collect();
        value_sets.sort();
        value_sets.dedup();

        let mut seen: HashMap<(usize, Vec<u8>), usize> = HashMap::new();
        let mut dense = Vec::new();
        let mut original = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            let k = g.arity();
            let mut signature = Vec::new();
            let mut tuple = vec![0u8; k];
            for &(a, b) in &value_sets {
                for row in 0..1usize << k {
                    for (i, t) in tuple.iter_mut().enumerate() {
                        *t = if row >> i & 1 == 1 { b } else { a };
                    }
                    signature.push(g.eval(&tuple));
                }
            }
            if seen.contains_key(&(k, signature.clone())) {
                continue;
            }
            seen.insert((k, signature), dense.len());
            let total = m.pow(k as u32);
            let mut table = vec![u8::MAX; total];
            for (t, &v) in g.domain().tuples().zip(g.table()) {
                table[t.iter().fold(0usize, |acc, &x| acc * m + x as usize)] = v;
            }
            dense.push((k, table));
            original.push(gi);
        }
        Ok(Self { m, dense, original })
    }

    pub fn retained(&self) -> usize {
        self.dense.len()
    }
}

impl Operations for TwoOps {
    type Elem = Box<[u8]>;
    fn generator_count(&self) -> usize {
        self.dense.len()
    }
    fn generator_arity(&self, g: usize) -> usize {
        self.dense[g].0
    }
    fn apply(&self, g: usize, members: &[Box<[u8]>], args: &[usize]) -> Box<[u8]> {
        let table = &self.dense[g].1;
        let len = members[args[0]].len();
        (0..len)
            .map(|j| {
                let code = args.iter().fold(0usize, |acc, &a| acc * self.m + members[a][j] as usize);
                table[code]
            })
            .collect()
    }
}

/// The n-ary members of a generated clone.
#[derive(Debug, Clone, Serialize)]
pub struct CloneSlice<F> {
    pub arity: usize,
    pub generators: Vec<F>,
    pub members: Vec<F>,
}

impl<F: PartialEq> CloneSlice<F> {
    pub fn contains(&self, f: &F) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The n-ary part of the Boolean clone generated by `generators`.
pub fn boolean_closure(
    generators: &[BooleanFunction],
    n: usize,
    budget: Budget,
) -> Result<CloneSlice<BooleanFunction>> {
    if n == 0 || n > MAX_BOOLEAN_ARITY {
        return Err(Error::ArityMismatch(format!("closure arity {n} outside 1..=6")));
    }
    let seeds = (0..n).map(|i| BooleanFunction::projection(n, i).tt()).collect();
    let c = close(&BooleanOps::new(generators, n), seeds, budget, |_| false)?;
    let mask = row_mask(n);
    let members = c
        .members
        .into_iter()
        .map(|tt| BooleanFunction::new(n, tt & mask))
        .collect::<Result<_>>()?;
    Ok(CloneSlice { arity: n, generators: generators.to_vec(), members })
}

/// The n-ary part of the 2-clone generated by `generators` over `m`
/// alternatives.
pub fn two_closure(
    m: usize,
    generators: &[TwoFunction],
    n: usize,
    budget: Budget,
) -> Result<CloneSlice<TwoFunction>> {
    let domain = TwoDomain::shared(m, n)?;
    if generators.iter().any(|g| g.m() != m) {
        return Err(Error::SizeMismatch(format!("generators must be over {m} alternatives")));
    }
    let coords: Vec<&[u8]> = domain.tuples().collect();
    let ops = TwoOps::new(generators, &coords)?;
    let seeds = (0..n)
        .map(|i| domain.tuples().map(|t| t[i]).collect::<Box<[u8]>>())
        .collect();
    let c = close(&ops, seeds, budget, |_| false)?;
    let members = c
        .members
        .into_iter()
        .map(|t| TwoFunction::from_parts(Arc::clone(&domain), t.into_vec()))
        .collect();
    Ok(CloneSlice { arity: n, generators: generators.to_vec(), members })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_generation_gives_projections() {
        let s = boolean_closure(&[], 3, Budget::default()).unwrap();
        assert_eq!(s.len(), 3);
        let t = two_closure(4, &[], 2, Budget::default()).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn median_generates_d2_ternary_part() {
        let s = boolean_closure(&[BooleanFunction::median()], 3, Budget::default()).unwrap();
        assert!(s.contains(&BooleanFunction::median()));
        assert!(!s.contains(&BooleanFunction::xor3()));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn closure_is_a_fixpoint() {
        let gens = [BooleanFunction::and2(), BooleanFunction::or2()];
        let s = boolean_closure(&gens, 3, Budget::default()).unwrap();
        let mut again = s.members.clone();
        again.extend(gens);
        let s2 = boolean_closure(&again, 3, Budget::default()).unwrap();
        let a: std::collections::BTreeSet<_> = s.members.iter().collect();
        let b: std::collections::BTreeSet<_> = s2.members.iter().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_enforced() {
        let gens = [BooleanFunction::or_and_not()];
        let err = boolean_closure(&gens, 3, Budget::elements(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
        let err = boolean_closure(&gens, 3, Budget { max_elements: 1000, max_applications: 5 })
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
    }

    #[test]
    fn stop_predicate_ends_early() {
        let gens = [BooleanFunction::or_and_not()];
        let c = close(
            &BooleanOps::new(&gens, 3),
            (0..3).map(|i| BooleanFunction::projection(3, i).tt()).collect(),
            Budget::default(),
            |m| m.len() >= 5,
        )
        .unwrap();
        assert!(!c.complete);
        assert_eq!(c.members.len(), 5);
    }

    #[test]
    fn two_ops_merge_equivalent_generators() {
        let maj = TwoFunction::lift(5, &BooleanFunction::median()).unwrap();
        let d = TwoDomain::shared(5, 3).unwrap();
        let coords: Vec<&[u8]> = d.tuples().collect();
        let ops = TwoOps::new(&[maj.clone(), maj.clone()], &coords).unwrap();
        assert_eq!(ops.retained(), 1);
    }
}
