//! Constructive membership in a free extension: any target whose pair
//! slices lie in the slice class is assembled from generators.
//!
//! For each pair `b` a member `f_b` agreeing with the target on `bⁿ` is
//! found by a closure restricted to `bⁿ`. A binary switch `e_b` (second
//! argument on `b`, first elsewhere) then patches the running function:
//! `g ← e_b(g, f_b)` fixes `bⁿ` and leaves every other block alone.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::closure::{boolean_closure, Budget};
use super::derivation::{Derivation, NodeId};
use super::extension::{
    binary_non_projection, extension_membership, glue, symmetric_closure, MIN_DICHOTOMY_ALTERNATIVES,
};
use super::post::{post_class, PostClass};
use super::witness::{BinarySwitches, ProjectedClosure};
use crate::error::{Error, Result};
use crate::two_function::TwoFunction;
use crate::universe::{pair_at, pair_count};

#[derive(Debug, Clone, Serialize)]
pub struct Realization {
    pub function: TwoFunction,
    #[serde(skip)]
    pub root: NodeId,
    /// Pairs whose block had to be patched, in the order they were met.
    pub patched_blocks: Vec<(u8, u8)>,
    /// Nodes in the term DAG of the result.
    pub dag_size: usize,
}

pub struct CaseOneRealizer {
    derivation: Derivation,
    class: PostClass,
    budget: Budget,
    switches: Option<BinarySwitches>,
    block_switch: HashMap<usize, NodeId>,
    blocks: HashMap<(usize, usize), ProjectedClosure>,
}

impl CaseOneRealizer {
    pub fn new(generators: &[TwoFunction], budget: Budget) -> Result<Self> {
        let symmetric = symmetric_closure(generators)?;
        let m = symmetric
            .first()
            .map(TwoFunction::m)
            .ok_or_else(|| Error::Precondition("no generators: the clone is trivial".into()))?;
        if m < MIN_DICHOTOMY_ALTERNATIVES {
            return Err(Error::Precondition(format!(
                "interpolation needs at least {MIN_DICHOTOMY_ALTERNATIVES} alternatives, got {m}"
            )));
        }
        if binary_non_projection(generators).is_none() {
            return Err(Error::Precondition("every binary member is a projection".into()));
        }
        let slices = symmetric
            .iter()
            .map(|g| g.boolean_slice((0, 1), 0))
            .collect::<Result<Vec<_>>>()?;
        let class = post_class(&slices)?;
        Ok(Self {
            derivation: Derivation::new(m, symmetric)?,
            class,
            budget,
            switches: None,
            block_switch: HashMap::new(),
            blocks: HashMap::new(),
        })
    }

    pub fn class(&self) -> PostClass {
        self.class
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    fn switch_for(&mut self, pair: usize) -> Result<NodeId> {
        if let Some(&id) = self.block_switch.get(&pair) {
            return Ok(id);
        }
        if self.switches.is_none() {
            self.switches = Some(BinarySwitches::build(&mut self.derivation, self.budget)?);
        }
        let sw = self.switches.as_ref().unwrap();
        let (a, b) = pair_at(self.derivation.m(), pair);
        let (i, j) = (sw.point_index([a, b]).unwrap(), sw.point_index([b, a]).unwrap());
        let want = 1u64 << i | 1u64 << j;
        let node = sw.union(&mut self.derivation, want)?;
        let got = super::witness::point_mask(self.derivation.value(node), &sw.points);
        if got != want {
            return Err(Error::Falsified(format!(
                "no binary member switches exactly on pair ({a}, {b}): best mask {got:#x}"
            )));
        }
        self.block_switch.insert(pair, node);
        Ok(node)
    }

    fn block_witness(&mut self, target: &TwoFunction, pair: usize) -> Result<NodeId> {
        let n = target.arity();
        let domain = target.domain().clone();
        let (a, b) = pair_at(domain.m(), pair);
        let rows = domain.block_rows((a, b), a)?;
        let inner = &rows[1..rows.len() - 1];
        if !self.blocks.contains_key(&(n, pair)) {
            let coords: Vec<&[u8]> = inner.iter().map(|&r| domain.tuple(r)).collect();
            let pc = ProjectedClosure::new(self.derivation.generators(), n, &coords, self.budget)?;
            self.blocks.insert((n, pair), pc);
        }
        let pc = self.blocks.get_mut(&(n, pair)).unwrap();
        let want: Vec<u8> = inner.iter().map(|&r| target.at(r)).collect();
        let idx = pc.position(&want).ok_or_else(|| {
            Error::Falsified(format!(
                "slice of the target on ({a}, {b}) lies in {} but is not generated",
                self.class
            ))
        })?;
        pc.rebuild(idx, &mut self.derivation)
    }

    /// A derivation of `target` from the generators.
    pub fn realize(&mut self, target: &TwoFunction) -> Result<Realization> {
        if target.m() != self.derivation.m() {
            return Err(Error::SizeMismatch(format!(
                "target over {} alternatives, generators over {}",
                target.m(),
                self.derivation.m()
            )));
        }
        let n = target.arity();
        let done = |d: &Derivation, root, patched| Realization {
            function: d.value(root).clone(),
            root,
            patched_blocks: patched,
            dag_size: d.dag_size(root),
        };
        if let Some(i) = target.projection_index() {
            let root = self.derivation.projection(n, i)?;
            return Ok(done(&self.derivation, root, Vec::new()));
        }
        if let Some(gi) = self.derivation.generators().iter().position(|g| g == target) {
            let root = self.derivation.generator(gi)?;
            return Ok(done(&self.derivation, root, Vec::new()));
        }
        if !extension_membership(target, self.class)?.free {
            return Err(Error::Precondition(format!(
                "target has a pair slice outside {}",
                self.class
            )));
        }

        let domain = target.domain().clone();
        let mut g = self.derivation.projection(n, 0)?;
        let mut patched = Vec::new();
        for idx in 0..domain.len() {
            if self.derivation.value(g).at(idx) == target.at(idx) {
                continue;
            }
            let pair = domain
                .block(idx)
                .ok_or_else(|| Error::Falsified("conservative functions disagree on a constant".into()))?;
            let f = self.block_witness(target, pair)?;
            let e = self.switch_for(pair)?;
            g = self.derivation.compose(e, &[g, f])?;
            patched.push(pair_at(domain.m(), pair));
        }
        if self.derivation.value(g) != target {
            return Err(Error::Falsified("interpolation did not reproduce the target".into()));
        }
        Ok(done(&self.derivation, g, patched))
    }
}

/// One-shot form of [`CaseOneRealizer::realize`]; the result is checked by
/// replaying every recorded step.
pub fn realize_case1(generators: &[TwoFunction], target: &TwoFunction) -> Result<TwoFunction> {
    let mut r = CaseOneRealizer::new(generators, Budget::default())?;
    let out = r.realize(target)?;
    r.derivation().replay()?;
    Ok(out.function)
}

/// `count` seeded draws from the n-ary part of the free extension of
/// `class`: an independent member of the class on every pair.
pub fn random_free_targets(m: usize, class: PostClass, n: usize, count: usize, seed: u64) -> Result<Vec<TwoFunction>> {
    let members = boolean_closure(&class.generators(), n, Budget::default())?.members;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let slices: Vec<_> = (0..pair_count(m)).map(|_| members[rng.gen_range(0..members.len())]).collect();
            glue(m, &slices)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::BooleanFunction;
    use crate::clone::extension::patchwork;

    #[test]
    fn trivial_targets() {
        let g = patchwork(5, PostClass::C4).unwrap();
        assert_eq!(realize_case1(&[g.clone()], &g).unwrap(), g);
        let p = TwoFunction::projection(5, 3, 2).unwrap();
        assert_eq!(realize_case1(&[g], &p).unwrap(), p);
    }

    #[test]
    fn random_targets_for_every_free_class() {
        for class in PostClass::ALL {
            let mut r = CaseOneRealizer::new(&[patchwork(5, class).unwrap()], Budget::default()).unwrap();
            assert_eq!(r.class(), class);
            for target in random_free_targets(5, class, 3, 5, 0).unwrap() {
                assert!(extension_membership(&target, class).unwrap().free);
                let out = r.realize(&target).unwrap();
                assert_eq!(out.function, target);
            }
            r.derivation().replay().unwrap();
        }
    }

    #[test]
    fn refuses_case_two_and_outside_targets() {
        let maj = TwoFunction::lift(5, &BooleanFunction::median()).unwrap();
        assert!(matches!(CaseOneRealizer::new(&[maj], Budget::default()), Err(Error::Precondition(_))));
        let and = patchwork(5, PostClass::A4).unwrap();
        let xor = TwoFunction::lift(5, &BooleanFunction::xor3()).unwrap();
        assert!(matches!(realize_case1(&[and], &xor), Err(Error::Precondition(_))));
    }
}
