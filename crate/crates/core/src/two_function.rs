//! Conservative 2-functions: maps defined on the tuples of `A^n` that use at
//! most two distinct values, returning one of their arguments.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boolean::{BooleanFunction, MAX_BOOLEAN_ARITY};
use crate::error::{Error, Result};
use crate::universe::{check_alternatives, pair_count, pair_index, Permutation};

pub const MAX_TWO_ARITY: usize = 8;

/// Dense lookup is used while `m^n` stays below this bound.
const DENSE_LIMIT: usize = 1 << 20;

#[derive(Debug)]
enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<Box<[u8]>, u32>),
}

/// The tuples of `A^n` with at most two distinct entries, in lexicographic
/// order.
#[derive(Debug)]
pub struct TwoDomain {
    m: u8,
    arity: u8,
    tuples: Vec<u8>,
    /// Pair index of each tuple's value set, `None` for constant tuples.
    blocks: Vec<Option<u16>>,
    lookup: Lookup,
}

impl TwoDomain {
    fn build(m: usize, arity: usize) -> Self {
        let mut tuples = Vec::new();
        let mut blocks = Vec::new();
        let mut cur = vec![0u8; arity];
        fn rec(
            m: u8,
            pos: usize,
            cur: &mut [u8],
            vals: (Option<u8>, Option<u8>),
            tuples: &mut Vec<u8>,
            blocks: &mut Vec<Option<u16>>,
        ) {
            if pos == cur.len() {
                tuples.extend_from_slice(cur);
                blocks.push(match vals {
                    (Some(a), Some(b)) => Some(pair_index(m as usize, a, b) as u16),
                    _ => None,
                });
                return;
            }
            for v in 0..m {
                let next = match vals {
                    (None, _) => (Some(v), None),
                    (Some(a), None) if a == v => vals,
                    (Some(a), None) => (Some(a), Some(v)),
                    (Some(a), Some(b)) if a == v || b == v => vals,
                    _ => continue,
                };
                cur[pos] = v;
                rec(m, pos + 1, cur, next, tuples, blocks);
            }
        }
        rec(m as u8, 0, &mut cur, (None, None), &mut tuples, &mut blocks);

        let size = blocks.len();
        let lookup = match (m as u64).checked_pow(arity as u32) {
            Some(total) if (total as usize) <= DENSE_LIMIT => {
                let mut dense = vec![u32::MAX; total as usize];
                for (idx, t) in tuples.chunks(arity.max(1)).enumerate().take(size) {
                    dense[encode(m, t)] = idx as u32;
                }
                Lookup::Dense(dense)
            }
            _ => Lookup::Sparse(
                tuples
                    .chunks(arity)
                    .enumerate()
                    .map(|(i, t)| (t.to_vec().into_boxed_slice(), i as u32))
                    .collect(),
            ),
        };
        Self { m: m as u8, arity: arity as u8, tuples, blocks, lookup }
    }

    /// Shared, cached domain for `(m, arity)`.
    pub fn shared(m: usize, arity: usize) -> Result<Arc<TwoDomain>> {
        check_alternatives(m)?;
        if arity == 0 || arity > MAX_TWO_ARITY {
            return Err(Error::ArityMismatch(format!("2-function arity {arity} outside 1..=8")));
        }
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<TwoDomain>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().expect("domain cache poisoned");
        Ok(guard
            .entry((m, arity))
            .or_insert_with(|| Arc::new(TwoDomain::build(m, arity)))
            .clone())
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `m + C(m,2)·(2^n − 2)`.
    pub fn expected_len(m: usize, arity: usize) -> usize {
        m + pair_count(m) * ((1usize << arity) - 2)
    }

    pub fn tuple(&self, idx: usize) -> &[u8] {
        let n = self.arity as usize;
        &self.tuples[idx * n..(idx + 1) * n]
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[u8]> {
        self.tuples.chunks(self.arity as usize)
    }

    /// Canonical pair index of the tuple's value set, `None` for constants.
    pub fn block(&self, idx: usize) -> Option<usize> {
        self.blocks[idx].map(usize::from)
    }

    /// Rank of `tuple` in the canonical order, `None` if it uses more than
    /// two values or has the wrong length.
    #[inline]
    pub fn index_of(&self, tuple: &[u8]) -> Option<usize> {
        if tuple.len() != self.arity as usize || tuple.iter().any(|&v| v >= self.m) {
            return None;
        }
        match &self.lookup {
            Lookup::Dense(d) => {
                let i = d[encode(self.m as usize, tuple)];
                (i != u32::MAX).then_some(i as usize)
            }
            Lookup::Sparse(h) => h.get(tuple).map(|&i| i as usize),
        }
    }

    /// Table indices of the `2^n` tuples over `{lo, hi}`, listed by Boolean
    /// row: bit `i` of the row selects `hi` (under `zero = lo`) for argument
    /// `i`. With `zero = hi` the roles are exchanged.
    pub fn block_rows(&self, pair: (u8, u8), zero: u8) -> Result<Vec<usize>> {
        let (a, b) = pair;
        if a == b || a >= self.m || b >= self.m || (zero != a && zero != b) {
            return Err(Error::InvalidInput(format!("invalid pair/bijection {pair:?}, zero={zero}")));
        }
        let one = if zero == a { b } else { a };
        let n = self.arity as usize;
        let mut tuple = vec![0u8; n];
        Ok((0..1usize << n)
            .map(|row| {
                for (i, t) in tuple.iter_mut().enumerate() {
                    *t = if row >> i & 1 == 1 { one } else { zero };
                }
                self.index_of(&tuple).expect("two-valued tuple")
            })
            .collect())
    }
}

#[inline]
fn encode(m: usize, tuple: &[u8]) -> usize {
    tuple.iter().fold(0usize, |acc, &v| acc * m + v as usize)
}

/// A conservative n-ary 2-function, stored as one output per canonical tuple.
#[derive(Clone)]
pub struct TwoFunction {
    domain: Arc<TwoDomain>,
    table: Vec<u8>,
}

impl PartialEq for TwoFunction {
    fn eq(&self, other: &Self) -> bool {
        self.domain.m == other.domain.m
            && self.domain.arity == other.domain.arity
            && self.table == other.table
    }
}

impl Eq for TwoFunction {}

impl Hash for TwoFunction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.domain.m.hash(state);
        self.domain.arity.hash(state);
        self.table.hash(state);
    }
}

impl PartialOrd for TwoFunction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TwoFunction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.domain.m, self.domain.arity, &self.table).cmp(&(
            other.domain.m,
            other.domain.arity,
            &other.table,
        ))
    }
}

impl fmt::Debug for TwoFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoFunction(m={}, n={}, {:?})", self.domain.m, self.domain.arity, self.table)
    }
}

impl TwoFunction {
    /// Validates conservativity and table length.
    pub fn from_table(m: usize, arity: usize, table: Vec<u8>) -> Result<Self> {
        let domain = TwoDomain::shared(m, arity)?;
        if table.len() != domain.len() {
            return Err(Error::SizeMismatch(format!(
                "table of length {} for a domain of {} tuples",
                table.len(),
                domain.len()
            )));
        }
        for (t, &v) in domain.tuples().zip(&table) {
            if !t.contains(&v) {
                return Err(Error::NotConservative { tuple: t.to_vec(), value: v });
            }
        }
        Ok(Self { domain, table })
    }

    /// Skips validation; callers guarantee conservativity.
    pub(crate) fn from_parts(domain: Arc<TwoDomain>, table: Vec<u8>) -> Self {
        debug_assert_eq!(domain.len(), table.len());
        Self { domain, table }
    }

    pub fn from_fn(m: usize, arity: usize, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        let domain = TwoDomain::shared(m, arity)?;
        let table = domain.tuples().map(f).collect();
        Self::from_table(m, arity, table)
    }

    pub fn projection(m: usize, arity: usize, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::ArityMismatch(format!("projection {i} of arity {arity}")));
        }
        Self::from_fn(m, arity, |t| t[i])
    }

    /// Lifts a 0,1-preserving Boolean function to every pair through the
    /// order-preserving bijection (smaller element ↦ 0).
    pub fn lift(m: usize, h: &BooleanFunction) -> Result<Self> {
        if !h.preserves_zero() || !h.preserves_one() {
            return Err(Error::Precondition(format!("{h:?} does not preserve 0 and 1")));
        }
        Self::from_fn(m, h.arity(), |t| {
            let lo = *t.iter().min().unwrap();
            let hi = *t.iter().max().unwrap();
            let row = t.iter().enumerate().fold(0usize, |r, (i, &v)| r | ((v == hi) as usize) << i);
            if lo == hi || !h.eval_row(row) {
                lo
            } else {
                hi
            }
        })
    }

    pub fn m(&self) -> usize {
        self.domain.m()
    }

    pub fn arity(&self) -> usize {
        self.domain.arity()
    }

    pub fn domain(&self) -> &Arc<TwoDomain> {
        &self.domain
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn at(&self, idx: usize) -> u8 {
        self.table[idx]
    }

    /// Value on `tuple`; errors if the tuple is outside `A^n_2`.
    pub fn try_eval(&self, tuple: &[u8]) -> Result<u8> {
        self.domain
            .index_of(tuple)
            .map(|i| self.table[i])
            .ok_or_else(|| Error::InvalidInput(format!("{tuple:?} is not in A^{}_2", self.arity())))
    }

    /// Value on `tuple`. Panics outside `A^n_2`.
    #[inline]
    pub fn eval(&self, tuple: &[u8]) -> u8 {
        self.table[self.domain.index_of(tuple).expect("tuple outside the 2-domain")]
    }

    pub fn projection_index(&self) -> Option<usize> {
        (0..self.arity()).find(|&i| self.domain.tuples().zip(&self.table).all(|(t, &v)| t[i] == v))
    }

    pub fn is_projection(&self) -> bool {
        self.projection_index().is_some()
    }

    /// `g_σ(x) = σ⁻¹(g(σ(x)))`.
    pub fn act(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.m() != self.m() {
            return Err(Error::SizeMismatch(format!(
                "2-function over {} alternatives, permutation over {}",
                self.m(),
                sigma.m()
            )));
        }
        let inv = sigma.inverse();
        let mut image = vec![0u8; self.arity()];
        let table = self
            .domain
            .tuples()
            .map(|t| {
                for (d, &s) in image.iter_mut().zip(t) {
                    *d = sigma.apply(s);
                }
                inv.apply(self.eval(&image))
            })
            .collect();
        Ok(Self::from_parts(self.domain.clone(), table))
    }

    /// Invariance under every relabeling, checked on the generators
    /// `(0 1)` and `(0 1 … m-1)` of the symmetric group.
    pub fn is_self_dual(&self) -> bool {
        Permutation::generators(self.m())
            .iter()
            .all(|s| self.act(s).map(|g| g == *self).unwrap_or(false))
    }

    /// Pointwise composition `self(inner_1(x), …, inner_n(x))`.
    pub fn superpose(&self, inner: &[&TwoFunction]) -> Result<Self> {
        if inner.len() != self.arity() {
            return Err(Error::ArityMismatch(format!(
                "{} inner functions for an outer function of arity {}",
                inner.len(),
                self.arity()
            )));
        }
        let first = inner
            .first()
            .ok_or_else(|| Error::ArityMismatch("no inner functions".into()))?;
        let domain = first.domain.clone();
        for g in inner {
            if g.m() != self.m() || g.arity() != domain.arity() {
                return Err(Error::ArityMismatch(format!(
                    "inner function (m={}, n={}) does not match (m={}, n={})",
                    g.m(),
                    g.arity(),
                    self.m(),
                    domain.arity()
                )));
            }
        }
        let mut args = vec![0u8; inner.len()];
        let table = (0..domain.len())
            .map(|t| {
                for (a, g) in args.iter_mut().zip(inner) {
                    *a = g.table[t];
                }
                self.eval(&args)
            })
            .collect();
        Ok(Self::from_parts(domain, table))
    }

    /// `self(x_{map[0]}, …, x_{map[n-1]})` as a function of `arity` arguments.
    pub fn minor(&self, map: &[usize], arity: usize) -> Result<Self> {
        let projections = (0..arity)
            .map(|i| Self::projection(self.m(), arity, i))
            .collect::<Result<Vec<_>>>()?;
        let inner: Vec<&TwoFunction> = map
            .iter()
            .map(|&j| projections.get(j).ok_or_else(|| Error::InvalidInput(format!("variable {j} out of range"))))
            .collect::<Result<_>>()?;
        self.superpose(&inner)
    }

    /// All binary minors, i.e. the results of substituting the two binary
    /// projections for the arguments in every possible way.
    pub fn binary_minors(&self) -> Vec<TwoFunction> {
        let n = self.arity();
        (0..1usize << n)
            .map(|mask| {
                let map: Vec<usize> = (0..n).map(|i| mask >> i & 1).collect();
                self.minor(&map, 2).expect("valid minor")
            })
            .collect()
    }

    /// The restriction to `pair^n`, transported to `{0,1}` by `zero ↦ 0`.
    pub fn boolean_slice(&self, pair: (u8, u8), zero: u8) -> Result<BooleanFunction> {
        if self.arity() > MAX_BOOLEAN_ARITY {
            return Err(Error::Unsupported(format!("Boolean slices of arity {}", self.arity())));
        }
        let rows = self.domain.block_rows(pair, zero)?;
        let mut tt = 0u64;
        for (row, &idx) in rows.iter().enumerate() {
            if self.table[idx] != zero {
                tt |= 1 << row;
            }
        }
        BooleanFunction::new(self.arity(), tt)
    }
}

/// Every conservative n-ary 2-function over `m` alternatives, indexed by the
/// mask of non-constant tuples on which the larger value is returned. Only
/// domains with at most 24 non-constant tuples are enumerated.
pub fn conservative_functions(m: usize, arity: usize) -> Result<impl Iterator<Item = TwoFunction>> {
    let domain = TwoDomain::shared(m, arity)?;
    let free: Vec<usize> = (0..domain.len()).filter(|&i| domain.block(i).is_some()).collect();
    if free.len() > 24 {
        return Err(Error::Unsupported(format!(
            "{} free table cells is too many to enumerate",
            free.len()
        )));
    }
    Ok((0..1u32 << free.len()).map(move |mask| {
        let mut table: Vec<u8> = (0..domain.len()).map(|i| *domain.tuple(i).iter().min().unwrap()).collect();
        for (bit, &i) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                table[i] = *domain.tuple(i).iter().max().unwrap();
            }
        }
        TwoFunction::from_parts(domain.clone(), table)
    }))
}

#[derive(Serialize, Deserialize)]
struct TwoJson {
    m: usize,
    arity: usize,
    table: Vec<u8>,
}

impl Serialize for TwoFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TwoJson { m: self.m(), arity: self.arity(), table: self.table.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TwoJson::deserialize(d)?;
        TwoFunction::from_table(raw.m, raw.arity, raw.table).map_err(serde::de::Error::custom)
    }
}
