//! Symmetric 2-clones as free or dependent extensions of Post classes.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::closure::{boolean_closure, two_closure, Budget, CloneSlice};
use super::derivation::Derivation;
use super::post::{post_class, PostClass};
use super::witness::{BinarySwitches, ProjectedClosure};
use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::two_function::{TwoDomain, TwoFunction};
use crate::universe::{pair_at, pair_count, pair_index, Permutation};

/// Smallest number of alternatives for which the free/dependent dichotomy
/// is established.
pub const MIN_DICHOTOMY_ALTERNATIVES: usize = 5;

/// Orbit closure `{g_σ}` under the relabeling action. Inputs come first
/// (deduplicated), then new functions in discovery order.
pub fn symmetric_closure(generators: &[TwoFunction]) -> Result<Vec<TwoFunction>> {
    let Some(first) = generators.first() else {
        return Ok(Vec::new());
    };
    let m = first.m();
    if generators.iter().any(|g| g.m() != m) {
        return Err(Error::SizeMismatch("generators over different universes".into()));
    }
    let moves = Permutation::generators(m);
    let mut seen: HashSet<TwoFunction> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for g in generators {
        if seen.insert(g.clone()) {
            out.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(g) = queue.pop_front() {
        for s in &moves {
            let h = g.act(s)?;
            if seen.insert(h.clone()) {
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtensionKind {
    Free,
    Dependent,
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionClassification {
    pub kind: ExtensionKind,
    pub base: PostClass,
    /// A binary member that is not a projection (free case only).
    pub witness: Option<TwoFunction>,
    /// Size of the symmetric closure of the generators.
    pub symmetric_generators: usize,
}

/// First non-projection binary minor of any generator. The binary part of
/// a clone consists of projections exactly when no generator has one.
pub fn binary_non_projection(generators: &[TwoFunction]) -> Option<TwoFunction> {
    generators
        .iter()
        .flat_map(|g| g.binary_minors())
        .find(|f| !f.is_projection())
}

fn check_dichotomy_size(generators: &[TwoFunction]) -> Result<()> {
    match generators.first() {
        Some(g) if g.m() < MIN_DICHOTOMY_ALTERNATIVES => Err(Error::Precondition(format!(
            "classification needs at least {MIN_DICHOTOMY_ALTERNATIVES} alternatives, got {}",
            g.m()
        ))),
        _ => Ok(()),
    }
}

/// Post class of the restriction of the clone to the pair `{0, 1}`.
fn slice_class(symmetric: &[TwoFunction]) -> Result<PostClass> {
    let slices = symmetric
        .iter()
        .map(|g| g.boolean_slice((0, 1), 0))
        .collect::<Result<Vec<_>>>()?;
    post_class(&slices)
}

/// Free or dependent verdict for the symmetric clone generated by
/// `generators`.
pub fn classify_symmetric_2clone(generators: &[TwoFunction]) -> Result<ExtensionClassification> {
    check_dichotomy_size(generators)?;
    let symmetric = symmetric_closure(generators)?;
    let base = slice_class(&symmetric)?;
    let witness = binary_non_projection(generators);
    let kind = if witness.is_some() { ExtensionKind::Free } else { ExtensionKind::Dependent };
    if kind == ExtensionKind::Dependent && !base.is_self_dual() {
        return Err(Error::Falsified(format!(
            "binary part is trivial but the pair slices generate {base}, which is not self-dual"
        )));
    }
    Ok(ExtensionClassification { kind, base, witness, symmetric_generators: symmetric.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtensionMembership {
    pub free: bool,
    pub dependent: bool,
}

/// Whether `g` belongs to the free and to the dependent extension of `class`.
pub fn extension_membership(g: &TwoFunction, class: PostClass) -> Result<ExtensionMembership> {
    let m = g.m();
    let mut free = true;
    let mut shared: Option<BooleanFunction> = None;
    let mut dependent = true;
    for k in 0..pair_count(m) {
        let (a, b) = pair_at(m, k);
        let lo = g.boolean_slice((a, b), a)?;
        let hi = g.boolean_slice((a, b), b)?;
        free &= class.contains(&lo);
        let h = *shared.get_or_insert(lo);
        dependent &= lo == h && hi == h;
    }
    dependent &= shared.map_or(true, |h| class.contains(&h));
    Ok(ExtensionMembership { free, dependent })
}

/// The 2-function whose slice on pair `k` (smaller element ↦ 0) is
/// `slices[k]`.
pub fn glue(m: usize, slices: &[BooleanFunction]) -> Result<TwoFunction> {
    if slices.len() != pair_count(m) {
        return Err(Error::SizeMismatch(format!(
            "{} slices for {} pairs",
            slices.len(),
            pair_count(m)
        )));
    }
    let n = slices[0].arity();
    if slices.iter().any(|h| h.arity() != n || !h.preserves_zero() || !h.preserves_one()) {
        return Err(Error::InvalidInput("slices must share arity and preserve 0 and 1".into()));
    }
    TwoFunction::from_fn(m, n, |t| {
        let lo = *t.iter().min().unwrap();
        let hi = *t.iter().max().unwrap();
        if lo == hi {
            return lo;
        }
        let row = t.iter().enumerate().fold(0usize, |r, (i, &v)| r | ((v == hi) as usize) << i);
        if slices[pair_index(m, lo, hi)].eval_row(row) {
            hi
        } else {
            lo
        }
    })
}

/// A generator of the free extension of `class`: the class's first
/// generator on `{0, 1}` and a projection everywhere else. For `O1` the
/// pair `{0, 1}` uses the second projection.
pub fn patchwork(m: usize, class: PostClass) -> Result<TwoFunction> {
    let (special, n) = match class {
        PostClass::O1 => (BooleanFunction::projection(2, 1), 2),
        _ => {
            let h = class.generators()[0];
            (h, h.arity())
        }
    };
    let mut slices = vec![BooleanFunction::projection(n, 0); pair_count(m)];
    slices[0] = special;
    glue(m, &slices)
}

/// The n-ary part of the dependent extension of `class`: every member of
/// the Boolean class lifted to all pairs.
pub fn dependent_part(m: usize, class: PostClass, n: usize) -> Result<Vec<TwoFunction>> {
    if !class.is_self_dual() {
        return Err(Error::Precondition(format!("{class} is not self-dual")));
    }
    boolean_closure(&class.generators(), n, Budget::default())?
        .members
        .iter()
        .map(|h| TwoFunction::lift(m, h))
        .collect()
}

fn fact1_check(a: [u8; 4], x: u8, y: u8) -> Result<()> {
    if x != a[0] && x != a[1] {
        return Err(Error::InvalidInput(format!("{x} is not in {{{}, {}}}", a[0], a[1])));
    }
    if y != a[2] && y != a[3] {
        return Err(Error::InvalidInput(format!("{y} is not in {{{}, {}}}", a[2], a[3])));
    }
    Ok(())
}

/// A binary member `g` of `slice` with `g(a₀, a₁) = x` and `g(a₂, a₃) = y`.
pub fn fact1_witness(slice: &CloneSlice<TwoFunction>, a: [u8; 4], x: u8, y: u8) -> Result<TwoFunction> {
    if slice.arity != 2 {
        return Err(Error::ArityMismatch(format!("binary slice expected, got arity {}", slice.arity)));
    }
    fact1_check(a, x, y)?;
    slice
        .members
        .iter()
        .find(|g| g.eval(&a[..2]) == x && g.eval(&a[2..]) == y)
        .cloned()
        .ok_or_else(|| no_witness(a, x, y))
}

fn no_witness(a: [u8; 4], x: u8, y: u8) -> Error {
    Error::NoWitness(format!(
        "no binary member maps ({}, {}) to {x} and ({}, {}) to {y}",
        a[0], a[1], a[2], a[3]
    ))
}

/// Two-point witness search over the clone generated by the symmetric
/// closure of some generators, without enumerating the binary part.
pub struct Fact1Oracle {
    m: usize,
    generators: Vec<TwoFunction>,
    budget: Budget,
}

impl Fact1Oracle {
    pub fn new(generators: &[TwoFunction], budget: Budget) -> Result<Self> {
        let generators = symmetric_closure(generators)?;
        let m = generators.first().map_or(MIN_DICHOTOMY_ALTERNATIVES, TwoFunction::m);
        Ok(Self { m, generators, budget })
    }

    pub fn generators(&self) -> &[TwoFunction] {
        &self.generators
    }

    pub fn witness(&self, a: [u8; 4], x: u8, y: u8) -> Result<TwoFunction> {
        fact1_check(a, x, y)?;
        if a.iter().any(|&v| v as usize >= self.m) {
            return Err(Error::InvalidInput(format!("alternatives {a:?} out of range")));
        }
        let coords: [&[u8]; 2] = [&a[..2], &a[2..]];
        let mut pc = ProjectedClosure::new(&self.generators, 2, &coords, self.budget)?;
        let idx = pc.position(&[x, y]).ok_or_else(|| no_witness(a, x, y))?;
        let mut d = Derivation::new(self.m, self.generators.clone())?;
        let node = pc.rebuild(idx, &mut d)?;
        let g = d.value(node).clone();
        if g.eval(&a[..2]) != x || g.eval(&a[2..]) != y {
            return Err(Error::Falsified(format!("rebuilt witness disagrees at {a:?}")));
        }
        Ok(g)
    }
}

/// Structure of the binary part of a symmetric clone in the free case.
#[derive(Debug, Clone, Serialize)]
pub struct BinaryPart {
    pub class: PostClass,
    pub size: u64,
    /// Size of the binary part of the free extension of `class`.
    pub expected_size: u64,
    pub witnesses: usize,
    pub tied_points: usize,
    /// Every switch has all its pair slices in `class`.
    pub switches_in_class: bool,
}

impl BinaryPart {
    pub fn matches_free_extension(&self) -> bool {
        self.switches_in_class && self.size == self.expected_size
    }
}

/// Binary part of the clone generated by the symmetric closure of
/// `generators`, through its switch basis.
pub fn free_binary_part(generators: &[TwoFunction], budget: Budget) -> Result<BinaryPart> {
    check_dichotomy_size(generators)?;
    let symmetric = symmetric_closure(generators)?;
    let m = symmetric.first().map(TwoFunction::m).ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    let class = slice_class(&symmetric)?;
    let mut d = Derivation::new(m, symmetric)?;
    let switches = BinarySwitches::build(&mut d, budget)?;
    let mut switches_in_class = true;
    for &node in &switches.nodes {
        switches_in_class &= extension_membership(d.value(node), class)?.free;
    }
    let size = switches.lattice_size(budget.max_elements)?;
    let per_pair = boolean_closure(&class.generators(), 2, budget)?.len() as u64;
    let expected_size = per_pair.pow(pair_count(m) as u32);
    d.replay()?;
    Ok(BinaryPart {
        class,
        size,
        expected_size,
        witnesses: switches.witnesses,
        tied_points: switches.tied.len(),
        switches_in_class,
    })
}

/// Whether the ternary (or n-ary) part generated by `generators` equals the
/// dependent extension of `class`.
pub fn dependent_part_matches(
    generators: &[TwoFunction],
    class: PostClass,
    n: usize,
    budget: Budget,
) -> Result<(usize, usize, bool)> {
    let m = generators.first().map(TwoFunction::m).ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    let symmetric = symmetric_closure(generators)?;
    let got: HashSet<TwoFunction> = two_closure(m, &symmetric, n, budget)?.members.into_iter().collect();
    let want: HashSet<TwoFunction> = dependent_part(m, class, n)?.into_iter().collect();
    Ok((got.len(), want.len(), got == want))
}

/// Size of `A^n_2`, re-exported for reports.
pub fn domain_size(m: usize, n: usize) -> usize {
    TwoDomain::expected_len(m, n)
}
