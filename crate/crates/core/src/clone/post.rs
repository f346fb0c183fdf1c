//! The six Boolean clones that preserve 0 and 1 and are closed under
//! duality, and a probe-based fingerprint that tells them apart.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::closure::{close, Budget, BooleanOps};
use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PostClass {
    O1,
    D1,
    D2,
    L4,
    A4,
    C4,
}

/// Membership of the four probe functions, in the order median, `x⊕y⊕z`,
/// `x∧y`, `x∨yz̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub median: bool,
    pub xor: bool,
    pub and: bool,
    pub or_and_not: bool,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| if x { '1' } else { '0' };
        write!(f, "{}{}{}{}", b(self.median), b(self.xor), b(self.and), b(self.or_and_not))
    }
}

impl PostClass {
    pub const ALL: [PostClass; 6] = [Self::O1, Self::D1, Self::D2, Self::L4, Self::A4, Self::C4];
    pub const SELF_DUAL: [PostClass; 4] = [Self::O1, Self::D1, Self::D2, Self::L4];

    /// Generating functions of each class as usually tabulated. Each class
    /// is the clone these generate together with their duals.
    pub fn table_generators(self) -> Vec<BooleanFunction> {
        match self {
            Self::O1 => vec![BooleanFunction::projection(1, 0)],
            Self::D1 => vec![BooleanFunction::minority_led_majority()],
            Self::D2 => vec![BooleanFunction::median()],
            Self::L4 => vec![BooleanFunction::xor3()],
            Self::A4 => vec![BooleanFunction::and2(), BooleanFunction::or2()],
            Self::C4 => vec![BooleanFunction::or_and_not()],
        }
    }

    /// Table generators plus any missing duals; these generate the class
    /// outright.
    pub fn generators(self) -> Vec<BooleanFunction> {
        let mut gens = self.table_generators();
        for g in gens.clone() {
            if !gens.contains(&g.dual()) {
                gens.push(g.dual());
            }
        }
        gens
    }

    pub fn fingerprint(self) -> Fingerprint {
        let (median, xor, and, or_and_not) = match self {
            Self::O1 => (false, false, false, false),
            Self::D2 => (true, false, false, false),
            Self::L4 => (false, true, false, false),
            Self::D1 => (true, true, false, false),
            Self::A4 => (true, false, true, false),
            Self::C4 => (true, true, true, true),
        };
        Fingerprint { median, xor, and, or_and_not }
    }

    pub fn from_fingerprint(fp: Fingerprint) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.fingerprint() == fp)
    }

    pub fn is_self_dual(self) -> bool {
        Self::SELF_DUAL.contains(&self)
    }

    /// Membership by the defining properties of each class.
    pub fn contains(self, h: &BooleanFunction) -> bool {
        if !h.preserves_zero() || !h.preserves_one() {
            return false;
        }
        match self {
            Self::O1 => h.projection_index().is_some(),
            Self::D1 => h.is_self_dual(),
            Self::D2 => h.is_self_dual() && h.is_monotone(),
            // 0,1-preserving linear functions are sums of an odd number of variables
            Self::L4 => h.is_linear(),
            Self::A4 => h.is_monotone(),
            Self::C4 => true,
        }
    }

    /// Smallest class containing every function in `fs` (all 0,1-preserving).
    fn ceiling(fs: &[BooleanFunction]) -> Self {
        let self_dual = fs.iter().all(BooleanFunction::is_self_dual);
        let monotone = fs.iter().all(BooleanFunction::is_monotone);
        let linear = fs.iter().all(BooleanFunction::is_linear);
        match (self_dual, monotone, linear) {
            (_, true, true) => Self::O1,
            (_, false, true) => Self::L4,
            (true, true, false) => Self::D2,
            (true, false, false) => Self::D1,
            (false, true, false) => Self::A4,
            (false, false, false) => Self::C4,
        }
    }

    /// Size of the ternary part, computed once by closure of the generators.
    pub fn ternary_size(self) -> usize {
        static SIZES: OnceLock<Vec<usize>> = OnceLock::new();
        let sizes = SIZES.get_or_init(|| {
            Self::ALL
                .iter()
                .map(|c| {
                    super::closure::boolean_closure(&c.generators(), 3, Budget::default())
                        .expect("small closure")
                        .len()
                })
                .collect()
        });
        sizes[Self::ALL.iter().position(|c| *c == self).unwrap()]
    }
}

impl fmt::Display for PostClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for PostClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown Post class {s:?}")))
    }
}

fn probes() -> [BooleanFunction; 4] {
    // all probes padded to ternary so a single ternary closure decides them
    [
        BooleanFunction::median(),
        BooleanFunction::xor3(),
        BooleanFunction::from_fn(3, |x| x[0] && x[1]).unwrap(),
        BooleanFunction::or_and_not(),
    ]
}

/// Probe membership in the clone generated by `generators` and their duals.
pub fn fingerprint(generators: &[BooleanFunction]) -> Result<Fingerprint> {
    if let Some(g) = generators.iter().find(|g| !g.preserves_zero() || !g.preserves_one()) {
        return Err(Error::Precondition(format!("{g:?} does not preserve 0 and 1")));
    }
    let mut gens: Vec<BooleanFunction> = Vec::new();
    for g in generators.iter().flat_map(|g| [*g, g.dual()]) {
        if g.projection_index().is_none() && !gens.contains(&g) {
            gens.push(g);
        }
    }
    let probes = probes();
    let ceiling = PostClass::ceiling(&gens);
    let target = ceiling.fingerprint();
    let found = |members: &[u64]| {
        let has = |p: &BooleanFunction| members.contains(&p.tt());
        Fingerprint {
            median: has(&probes[0]),
            xor: has(&probes[1]),
            and: has(&probes[2]),
            or_and_not: has(&probes[3]),
        }
    };
    // Every member lies in the ceiling class, so once its probes are all
    // present the fingerprint cannot change any further.
    let seeds = (0..3).map(|i| BooleanFunction::projection(3, i).tt()).collect();
    let c = close(&BooleanOps::new(&gens, 3), seeds, Budget::default(), |m| found(m) == target)?;
    Ok(found(&c.members))
}

/// Post class of the clone generated by `generators` closed under duality.
pub fn post_class(generators: &[BooleanFunction]) -> Result<PostClass> {
    let fp = fingerprint(generators)?;
    PostClass::from_fingerprint(fp).ok_or_else(|| {
        Error::Falsified(format!("probe signature {fp} matches none of the six classes"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clone::closure::boolean_closure;

    #[test]
    fn table_generators_classify() {
        for c in PostClass::ALL {
            assert_eq!(post_class(&c.table_generators()).unwrap(), c, "{c}");
        }
        let d1_alt = [BooleanFunction::median(), BooleanFunction::xor3()];
        assert_eq!(post_class(&d1_alt).unwrap(), PostClass::D1);
    }

    #[test]
    fn fingerprints_are_distinct() {
        let fps: std::collections::HashSet<_> = PostClass::ALL.iter().map(|c| c.fingerprint()).collect();
        assert_eq!(fps.len(), 6);
    }

    #[test]
    fn rejects_non_preserving() {
        let not = BooleanFunction::from_fn(1, |x| !x[0]).unwrap();
        assert!(matches!(post_class(&[not]), Err(Error::Precondition(_))));
    }

    #[test]
    fn printed_c4_generator_needs_its_dual() {
        let alone = boolean_closure(&PostClass::C4.table_generators(), 3, Budget::default()).unwrap();
        assert_eq!(alone.len(), 19);
        assert!(!alone.contains(&BooleanFunction::from_fn(3, |x| x[0] && x[1]).unwrap()));
    }

    #[test]
    fn ternary_sizes() {
        let sizes: Vec<_> = PostClass::ALL.iter().map(|c| c.ternary_size()).collect();
        // O1, D1, D2, L4, A4, C4
        assert_eq!(sizes, vec![3, 8, 4, 4, 18, 64]);
    }

    #[test]
    fn predicates_match_closures() {
        for c in PostClass::ALL {
            for n in 1..=3 {
                let slice = boolean_closure(&c.generators(), n, Budget::default()).unwrap();
                for tt in 0..1u64 << (1 << n) {
                    let h = BooleanFunction::new(n, tt).unwrap();
                    assert_eq!(c.contains(&h), slice.contains(&h), "{c} {h:?}");
                }
            }
        }
    }
}
