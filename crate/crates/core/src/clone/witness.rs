//! Closures restricted to a handful of coordinates. A member found there is
//! rebuilt as a full function of the clone by replaying its origin into a
//! [`Derivation`], so a witness never requires enumerating a whole slice.

use std::collections::HashMap;

use super::closure::{close, Budget, Closure, Origin, TwoOps};
use super::derivation::{Derivation, NodeId};
use crate::error::{Error, Result};
use crate::two_function::TwoFunction;

pub struct ProjectedClosure {
    ops: TwoOps,
    closure: Closure<Box<[u8]>>,
    arity: usize,
    index: HashMap<Box<[u8]>, usize>,
    nodes: Vec<Option<NodeId>>,
}

impl ProjectedClosure {
    /// Closure of the `arity` projections, restricted to `coordinates`
    /// (tuples of `A^arity_2`), under `generators`.
    pub fn new(
        generators: &[TwoFunction],
        arity: usize,
        coordinates: &[&[u8]],
        budget: Budget,
    ) -> Result<Self> {
        if coordinates.is_empty() || coordinates.iter().any(|t| t.len() != arity) {
            return Err(Error::ArityMismatch(format!("coordinates must be {arity}-tuples")));
        }
        let ops = TwoOps::new(generators, coordinates)?;
        let seeds = (0..arity).map(|i| coordinates.iter().map(|t| t[i]).collect()).collect();
        let closure = close(&ops, seeds, budget, |_| false)?;
        let index = closure.members.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let nodes = vec![None; closure.members.len()];
        Ok(Self { ops, closure, arity, index, nodes })
    }

    pub fn len(&self) -> usize {
        self.closure.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.members.is_empty()
    }

    pub fn members(&self) -> &[Box<[u8]>] {
        &self.closure.members
    }

    pub fn position(&self, values: &[u8]) -> Option<usize> {
        self.index.get(values).copied()
    }

    /// Adds member `idx` to `d` as a full function. `d` must hold the same
    /// generator list this closure was built from.
    pub fn rebuild(&mut self, idx: usize, d: &mut Derivation) -> Result<NodeId> {
        let mut stack = vec![idx];
        while let Some(&i) = stack.last() {
            if self.nodes[i].is_some() {
                stack.pop();
                continue;
            }
            match &self.closure.origins[i] {
                Origin::Seed(s) => {
                    self.nodes[i] = Some(d.projection(self.arity, *s)?);
                    stack.pop();
                }
                Origin::Apply { generator, args } => {
                    let missing: Vec<usize> =
                        args.iter().copied().filter(|&a| self.nodes[a].is_none()).collect();
                    if missing.is_empty() {
                        let outer = d.generator(self.ops.original[*generator])?;
                        let inner: Vec<NodeId> = args.iter().map(|&a| self.nodes[a].unwrap()).collect();
                        self.nodes[i] = Some(d.compose(outer, &inner)?);
                        stack.pop();
                    } else {
                        stack.extend(missing);
                    }
                }
            }
        }
        Ok(self.nodes[idx].expect("rebuilt"))
    }
}

/// Off-diagonal points of `A²`, lexicographic.
pub fn ordered_points(m: usize) -> Vec<[u8; 2]> {
    let m = m as u8;
    (0..m).flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| [p, q])).collect()
}

/// Bit `i` is set when the binary function `f` returns the second argument
/// at `points[i]`.
pub fn point_mask(f: &TwoFunction, points: &[[u8; 2]]) -> u64 {
    debug_assert_eq!(f.arity(), 2);
    points
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, z)| acc | ((f.eval(z) == z[1]) as u64) << i)
}

/// For every off-diagonal point `z`, the smallest binary member of the clone
/// that switches to its second argument at `z`.
///
/// Binary members are read as sets of points (where they pick the second
/// argument). `a(π₁, v)` is the intersection of `a` and `v` and `a(u, π₂)`
/// their union, so the member for `z` is the meet of one witness per other
/// point `w` (second argument at `z`, first at `w`), and every binary
/// member is a union of these.
#[derive(Debug, Clone)]
pub struct BinarySwitches {
    pub points: Vec<[u8; 2]>,
    pub nodes: Vec<NodeId>,
    pub masks: Vec<u64>,
    /// Number of `(z, w)` witness searches that succeeded.
    pub witnesses: usize,
    /// `(z, w)` point indices with no witness: every member switching at
    /// `z` also switches at `w`.
    pub tied: Vec<(usize, usize)>,
}

impl BinarySwitches {
    pub fn build(d: &mut Derivation, budget: Budget) -> Result<Self> {
        let gens = d.generators().to_vec();
        let points = ordered_points(d.m());
        if points.len() > 64 {
            return Err(Error::Unsupported("more than 64 off-diagonal points".into()));
        }
        let first = d.projection(2, 0)?;
        let second = d.projection(2, 1)?;
        let mut nodes = Vec::with_capacity(points.len());
        let mut masks = Vec::with_capacity(points.len());
        let mut witnesses = 0;
        let mut tied = Vec::new();
        for (zi, z) in points.iter().enumerate() {
            let mut acc = second;
            for (wi, w) in points.iter().enumerate() {
                if wi == zi {
                    continue;
                }
                let mut pc = ProjectedClosure::new(&gens, 2, &[z, w], budget)?;
                match pc.position(&[z[1], w[0]]) {
                    Some(i) => {
                        let node = pc.rebuild(i, d)?;
                        acc = d.compose(node, &[first, acc])?;
                        witnesses += 1;
                    }
                    None => tied.push((zi, wi)),
                }
            }
            let mask = point_mask(d.value(acc), &points);
            let expected = tied
                .iter()
                .filter(|&&(a, _)| a == zi)
                .fold(1u64 << zi, |m, &(_, w)| m | 1 << w);
            if mask != expected {
                return Err(Error::Falsified(format!(
                    "switch for point {z:?} has mask {mask:#x}, expected {expected:#x}"
                )));
            }
            nodes.push(acc);
            masks.push(mask);
        }
        Ok(Self { points, nodes, masks, witnesses, tied })
    }

    /// A member whose point set is the union of the switches for `set`.
    pub fn union(&self, d: &mut Derivation, set: u64) -> Result<NodeId> {
        let mut acc = d.projection(2, 0)?;
        let second = d.projection(2, 1)?;
        for (i, &node) in self.nodes.iter().enumerate() {
            if set >> i & 1 == 1 {
                acc = d.compose(node, &[acc, second])?;
            }
        }
        Ok(acc)
    }

    pub fn point_index(&self, z: [u8; 2]) -> Option<usize> {
        self.points.iter().position(|&p| p == z)
    }

    /// Number of distinct unions of switches, i.e. the size of the binary
    /// part; errors once more than `cap` sets have been seen.
    pub fn lattice_size(&self, cap: usize) -> Result<u64> {
        let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::from([0]);
        for &e in &self.masks {
            let grown: Vec<u64> = seen.iter().map(|s| s | e).filter(|s| !seen.contains(s)).collect();
            seen.extend(grown);
            if seen.len() > cap {
                return Err(Error::BudgetExceeded(format!("binary part exceeds {cap} members")));
            }
        }
        Ok(seen.len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::BooleanFunction;

    #[test]
    fn projected_witness_rebuilds_to_full_member() {
        let maj = TwoFunction::lift(5, &BooleanFunction::median()).unwrap();
        let mut d = Derivation::new(5, vec![maj.clone()]).unwrap();
        let coords: [&[u8]; 2] = [&[0, 1, 1], &[2, 2, 3]];
        let mut pc = ProjectedClosure::new(&[maj.clone()], 3, &coords, Budget::default()).unwrap();
        let idx = pc.position(&[1, 2]).expect("majority reaches (1, 2)");
        let node = pc.rebuild(idx, &mut d).unwrap();
        let f = d.value(node);
        assert_eq!(f.eval(&[0, 1, 1]), 1);
        assert_eq!(f.eval(&[2, 2, 3]), 2);
        d.replay().unwrap();
    }

    #[test]
    fn points_and_masks() {
        let pts = ordered_points(5);
        assert_eq!(pts.len(), 20);
        assert_eq!(pts[0], [0, 1]);
        let pi2 = TwoFunction::projection(5, 2, 1).unwrap();
        assert_eq!(point_mask(&pi2, &pts), (1 << 20) - 1);
    }
}
