//! Boolean functions of small arity as little-endian truth tables.
//!
//! Row `r` of the table holds `f(x_0, …, x_{n-1})` where `x_i` is bit `i` of
//! `r`. Arity is limited to 6 so that a table fits in a `u64`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_BOOLEAN_ARITY: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BooleanJson", into = "BooleanJson")]
pub struct BooleanFunction {
    arity: u8,
    tt: u64,
}

#[derive(Serialize, Deserialize)]
struct BooleanJson {
    arity: usize,
    tt: u64,
}

impl TryFrom<BooleanJson> for BooleanFunction {
    type Error = Error;
    fn try_from(raw: BooleanJson) -> Result<Self> {
        Self::new(raw.arity, raw.tt)
    }
}

impl From<BooleanFunction> for BooleanJson {
    fn from(f: BooleanFunction) -> Self {
        Self { arity: f.arity(), tt: f.tt }
    }
}

/// Mask with the low `2^n` bits set.
#[inline]
pub(crate) fn row_mask(n: usize) -> u64 {
    if n == MAX_BOOLEAN_ARITY {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl BooleanFunction {
    pub fn new(arity: usize, tt: u64) -> Result<Self> {
        if arity == 0 || arity > MAX_BOOLEAN_ARITY {
            return Err(Error::ArityMismatch(format!("Boolean arity {arity} outside 1..=6")));
        }
        if tt & !row_mask(arity) != 0 {
            return Err(Error::SizeMismatch(format!("truth table {tt:#x} too wide for arity {arity}")));
        }
        Ok(Self { arity: arity as u8, tt })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        let mut tt = 0u64;
        let mut args = vec![false; arity];
        for row in 0..1usize << arity {
            for (i, a) in args.iter_mut().enumerate() {
                *a = row >> i & 1 == 1;
            }
            if f(&args) {
                tt |= 1 << row;
            }
        }
        Self::new(arity, tt)
    }

    pub fn projection(arity: usize, i: usize) -> Self {
        Self::from_fn(arity, |x| x[i]).expect("valid projection")
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn tt(&self) -> u64 {
        self.tt
    }

    #[inline]
    pub fn eval_row(&self, row: usize) -> bool {
        self.tt >> row & 1 == 1
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        let row = args.iter().enumerate().fold(0, |r, (i, &b)| r | (b as usize) << i);
        self.eval_row(row)
    }

    /// `¬f(¬x)`.
    pub fn dual(&self) -> Self {
        let rows = 1usize << self.arity;
        let mut tt = 0u64;
        for row in 0..rows {
            let neg = !row & (rows - 1);
            if !self.eval_row(neg) {
                tt |= 1 << row;
            }
        }
        Self { arity: self.arity, tt }
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual() == *self
    }

    pub fn preserves_zero(&self) -> bool {
        !self.eval_row(0)
    }

    pub fn preserves_one(&self) -> bool {
        self.eval_row((1 << self.arity) - 1)
    }

    pub fn is_monotone(&self) -> bool {
        let rows = 1usize << self.arity;
        (0..rows).all(|r| {
            !self.eval_row(r)
                || (0..self.arity as usize).all(|i| r >> i & 1 == 1 || self.eval_row(r | 1 << i))
        })
    }

    /// If `f = c ⊕ ⊕_{i∈S} x_i`, returns `(c, S)` with `S` as a bitmask.
    pub fn linear_form(&self) -> Option<(bool, u32)> {
        let c = self.eval_row(0);
        let mut support = 0u32;
        for i in 0..self.arity as usize {
            if self.eval_row(1 << i) != c {
                support |= 1 << i;
            }
        }
        let rows = 1usize << self.arity;
        let ok = (0..rows).all(|r| {
            let parity = ((r as u32) & support).count_ones() % 2 == 1;
            self.eval_row(r) == (c ^ parity)
        });
        ok.then_some((c, support))
    }

    pub fn is_linear(&self) -> bool {
        self.linear_form().is_some()
    }

    /// Index of the argument this function projects onto, if any.
    pub fn projection_index(&self) -> Option<usize> {
        (0..self.arity as usize).find(|&i| *self == Self::projection(self.arity as usize, i))
    }

    /// Coordinatewise application to `args.len()` truth tables of arity
    /// `inner_arity`: the result's row `r` is `self` applied to the bits at
    /// row `r` of each argument.
    pub fn apply_tables(&self, inner_arity: usize, args: &[u64]) -> u64 {
        debug_assert_eq!(args.len(), self.arity as usize);
        let mut out = 0u64;
        for row in 0..1usize << inner_arity {
            let mut idx = 0usize;
            for (i, &t) in args.iter().enumerate() {
                idx |= ((t >> row & 1) as usize) << i;
            }
            out |= (self.tt >> idx & 1) << row;
        }
        out
    }

    /// `x y ∨ y z ∨ x z`.
    pub fn median() -> Self {
        Self::from_fn(3, |x| (x[0] && x[1]) || (x[1] && x[2]) || (x[0] && x[2])).unwrap()
    }

    /// `x ⊕ y ⊕ z`.
    pub fn xor3() -> Self {
        Self::from_fn(3, |x| x[0] ^ x[1] ^ x[2]).unwrap()
    }

    /// `x y`.
    pub fn and2() -> Self {
        Self::from_fn(2, |x| x[0] && x[1]).unwrap()
    }

    /// `x ∨ y`.
    pub fn or2() -> Self {
        Self::from_fn(2, |x| x[0] || x[1]).unwrap()
    }

    /// `x ∨ y z̄`.
    pub fn or_and_not() -> Self {
        Self::from_fn(3, |x| x[0] || (x[1] && !x[2])).unwrap()
    }

    /// `x̄ y ∨ x̄ z ∨ y z`, the majority of `x̄, y, z`.
    pub fn minority_led_majority() -> Self {
        Self::from_fn(3, |x| (!x[0] && x[1]) || (!x[0] && x[2]) || (x[1] && x[2])).unwrap()
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = 1usize << self.arity;
        let bits: String = (0..rows).map(|r| if self.eval_row(r) { '1' } else { '0' }).collect();
        write!(f, "Bool{}[{}]", self.arity, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_bit_exact() {
        // rows 0..8 are (x,y,z) = 000,100,010,110,001,101,011,111 (x is bit 0)
        assert_eq!(BooleanFunction::median().tt(), 0b1110_1000);
        assert_eq!(BooleanFunction::xor3().tt(), 0b1001_0110);
        assert_eq!(BooleanFunction::and2().tt(), 0b1000);
        assert_eq!(BooleanFunction::or2().tt(), 0b1110);
        assert_eq!(BooleanFunction::or_and_not().tt(), 0b1010_1110);
        assert_eq!(BooleanFunction::projection(3, 1).tt(), 0b1100_1100);
    }

    #[test]
    fn predicates() {
        let med = BooleanFunction::median();
        assert!(med.is_self_dual() && med.is_monotone() && !med.is_linear());
        let x = BooleanFunction::xor3();
        assert!(x.is_self_dual() && !x.is_monotone() && x.linear_form() == Some((false, 0b111)));
        let and = BooleanFunction::and2();
        assert!(!and.is_self_dual() && and.is_monotone());
        assert_eq!(and.dual(), BooleanFunction::or2());
        let c4 = BooleanFunction::or_and_not();
        assert!(c4.preserves_zero() && c4.preserves_one() && !c4.is_monotone() && !c4.is_self_dual());
        let d1 = BooleanFunction::minority_led_majority();
        assert!(d1.is_self_dual() && d1.preserves_zero() && d1.preserves_one());
        assert_eq!(BooleanFunction::projection(4, 2).projection_index(), Some(2));
        assert_eq!(med.projection_index(), None);
    }

    #[test]
    fn apply_tables_composes() {
        let p: Vec<u64> = (0..3).map(|i| BooleanFunction::projection(3, i).tt()).collect();
        let med = BooleanFunction::median();
        assert_eq!(med.apply_tables(3, &p), med.tt());
        // median(x, x, y) = x
        assert_eq!(med.apply_tables(2, &[0b1010, 0b1010, 0b1100]), 0b1010);
    }

    #[test]
    fn width_validation() {
        assert!(BooleanFunction::new(2, 0b1_0000).is_err());
        assert!(BooleanFunction::new(7, 0).is_err());
        assert!(BooleanFunction::new(6, u64::MAX).is_ok());
        let json = serde_json::to_string(&BooleanFunction::median()).unwrap();
        assert_eq!(json, r#"{"arity":3,"tt":232}"#);
    }
}
