//! Aggregation rules on choice functions: local rules backed by
//! 2-functions, explicitly tabled rules, and rules given by decisive
//! coalitions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boolean::BooleanFunction;
use crate::clone::post::{post_class, PostClass};
use crate::error::{Error, Result};
use crate::two_function::TwoFunction;
use crate::universe::{pair_at, pair_count, ChoiceFunction, Permutation};

pub const MAX_VOTERS: usize = 6;
/// Largest universe and arity accepted by [`TabledRule`].
pub const MAX_TABLED_ALTERNATIVES: usize = 3;
pub const MAX_TABLED_ARITY: usize = 3;

/// A rule given as an explicit map `Cⁿ → C`. Entry `Σ bits(c_i)·|C|^i`
/// holds the bits of `f(c_0, …, c_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTabled")]
pub struct TabledRule {
    m: usize,
    n: usize,
    table: Vec<u32>,
}

#[derive(Deserialize)]
struct RawTabled {
    m: usize,
    n: usize,
    table: Vec<u32>,
}

impl TryFrom<RawTabled> for TabledRule {
    type Error = Error;
    fn try_from(raw: RawTabled) -> Result<Self> {
        Self::new(raw.m, raw.n, raw.table)
    }
}

impl TabledRule {
    pub fn new(m: usize, n: usize, table: Vec<u32>) -> Result<Self> {
        if !(2..=MAX_TABLED_ALTERNATIVES).contains(&m) || !(1..=MAX_TABLED_ARITY).contains(&n) {
            return Err(Error::Unsupported(format!(
                "tabled rules need m ≤ {MAX_TABLED_ALTERNATIVES} and n ≤ {MAX_TABLED_ARITY}"
            )));
        }
        let size = 1usize << pair_count(m);
        if table.len() != size.pow(n as u32) {
            return Err(Error::SizeMismatch(format!("{} entries for {}^{n} inputs", table.len(), size)));
        }
        if table.iter().any(|&b| (b as usize) >= size) {
            return Err(Error::InvalidInput("table entry is not a choice function".into()));
        }
        let rule = Self { m, n, table };
        if let Some(b) = (0..size as u32).find(|&b| {
            let c = ChoiceFunction::new(m, b).unwrap();
            rule.table[rule.code(&vec![c; n])] != b
        }) {
            return Err(Error::InvalidInput(format!(
                "not unanimous at {}",
                ChoiceFunction::new(m, b).unwrap()
            )));
        }
        Ok(rule)
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(&[ChoiceFunction]) -> ChoiceFunction) -> Result<Self> {
        let size = 1u32 << pair_count(m);
        let mut table = Vec::new();
        let mut args = vec![ChoiceFunction::new(m, 0)?; n];
        for code in 0..(size as usize).pow(n as u32) {
            let mut rest = code;
            for a in args.iter_mut() {
                *a = ChoiceFunction::new(m, (rest % size as usize) as u32)?;
                rest /= size as usize;
            }
            table.push(f(&args).bits());
        }
        Self::new(m, n, table)
    }

    fn code(&self, args: &[ChoiceFunction]) -> usize {
        let size = 1usize << pair_count(self.m);
        args.iter().rev().fold(0, |acc, c| acc * size + c.bits() as usize)
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Rule {
    Local { two_function: TwoFunction },
    Tabled(TabledRule),
}

impl Rule {
    pub fn local(g: TwoFunction) -> Self {
        Rule::Local { two_function: g }
    }

    pub fn m(&self) -> usize {
        match self {
            Rule::Local { two_function } => two_function.m(),
            Rule::Tabled(t) => t.m,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Local { two_function } => two_function.arity(),
            Rule::Tabled(t) => t.n,
        }
    }

    pub fn apply(&self, args: &[ChoiceFunction]) -> Result<ChoiceFunction> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch(format!("{} inputs for a rule of arity {}", args.len(), self.arity())));
        }
        let m = self.m();
        if args.iter().any(|c| c.m() != m) {
            return Err(Error::SizeMismatch(format!("inputs must be over {m} alternatives")));
        }
        match self {
            Rule::Local { two_function: g } => {
                let mut vals = vec![0u8; args.len()];
                let mut bits = 0u32;
                for k in 0..pair_count(m) {
                    for (v, c) in vals.iter_mut().zip(args) {
                        *v = c.choose_pair(k);
                    }
                    if g.eval(&vals) == pair_at(m, k).1 {
                        bits |= 1 << k;
                    }
                }
                ChoiceFunction::new(m, bits)
            }
            Rule::Tabled(t) => ChoiceFunction::new(m, t.table[t.code(args)]),
        }
    }

    /// Every input profile, for universes small enough to tabulate.
    fn profiles(&self) -> Result<Vec<Vec<ChoiceFunction>>> {
        let m = self.m();
        let n = self.arity();
        if m > MAX_TABLED_ALTERNATIVES || n > MAX_TABLED_ARITY {
            return Err(Error::Unsupported(format!("exhaustive profile scan at m={m}, n={n}")));
        }
        let size = 1usize << pair_count(m);
        (0..size.pow(n as u32))
            .map(|code| {
                let mut rest = code;
                (0..n)
                    .map(|_| {
                        let c = ChoiceFunction::new(m, (rest % size) as u32);
                        rest /= size;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    /// The same rule as an explicit table (m ≤ 3, n ≤ 3).
    pub fn tabulate(&self) -> Result<TabledRule> {
        match self {
            Rule::Tabled(t) => Ok(t.clone()),
            Rule::Local { .. } => {
                let table = self
                    .profiles()?
                    .iter()
                    .map(|p| self.apply(p).map(|c| c.bits()))
                    .collect::<Result<_>>()?;
                TabledRule::new(self.m(), self.arity(), table)
            }
        }
    }

    pub fn is_unanimous(&self) -> Result<bool> {
        match self {
            // conservative functions fix constant tuples
            Rule::Local { two_function: g } => {
                Ok((0..g.m() as u8).all(|a| g.eval(&vec![a; g.arity()]) == a))
            }
            // checked on construction
            Rule::Tabled(_) => Ok(true),
        }
    }

    /// For local rules, the 2-function reading `f(c)(b) = f̂(c_1(b), …)`;
    /// errors on a non-local tabled rule.
    pub fn two_function(&self) -> Result<TwoFunction> {
        match self {
            Rule::Local { two_function } => Ok(two_function.clone()),
            Rule::Tabled(t) => {
                let m = t.m;
                let mut table: Vec<Option<u8>> = Vec::new();
                let domain = crate::two_function::TwoDomain::shared(m, t.n)?;
                table.resize(domain.len(), None);
                let mut vals = vec![0u8; t.n];
                for p in self.profiles()? {
                    let out = self.apply(&p)?;
                    for k in 0..pair_count(m) {
                        for (v, c) in vals.iter_mut().zip(&p) {
                            *v = c.choose_pair(k);
                        }
                        let idx = domain.index_of(&vals).expect("two-valued");
                        let o = out.choose_pair(k);
                        match table[idx] {
                            None => table[idx] = Some(o),
                            Some(prev) if prev != o => return Err(Error::NotLocal),
                            Some(_) => {}
                        }
                    }
                }
                // constant tuples are reached through every pair containing the value
                let table = table
                    .into_iter()
                    .map(|v| v.ok_or_else(|| Error::Falsified("uncovered tuple".into())))
                    .collect::<Result<Vec<_>>>()?;
                TwoFunction::from_table(m, t.n, table)
            }
        }
    }

    pub fn is_local(&self) -> Result<bool> {
        match self.two_function() {
            Ok(_) => Ok(true),
            Err(Error::NotLocal) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `f_σ(c_1, …, c_n) = f((c_1)_{σ⁻¹}, …)_σ`; for local rules this is
    /// the rule of `f̂_σ`.
    pub fn act(&self, sigma: &Permutation) -> Result<Rule> {
        match self {
            Rule::Local { two_function } => Ok(Rule::local(two_function.act(sigma)?)),
            Rule::Tabled(t) => {
                let inv = sigma.inverse();
                let f = |args: &[ChoiceFunction]| -> ChoiceFunction {
                    let moved: Vec<ChoiceFunction> = args.iter().map(|c| c.act(&inv).unwrap()).collect();
                    ChoiceFunction::new(t.m, t.table[t.code(&moved)]).unwrap().act(sigma).unwrap()
                };
                Ok(Rule::Tabled(TabledRule::from_fn(t.m, t.n, f)?))
            }
        }
    }

    /// `f_σ = f` for all σ, checked on a transposition and an m-cycle.
    pub fn is_neutral(&self) -> Result<bool> {
        match self {
            Rule::Local { two_function } => Ok(two_function.is_self_dual()),
            Rule::Tabled(_) => {
                for s in Permutation::generators(self.m()) {
                    if self.act(&s)? != *self {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// A family of voter sets containing exactly one of every complementary
/// pair, including the full set. Bit `s` of `mask` stands for the set whose
/// voter `i + 1` is present iff bit `i` of `s` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CoalitionJson", into = "CoalitionJson")]
pub struct DecisiveCoalition {
    n: u8,
    mask: u64,
}

#[derive(Serialize, Deserialize)]
struct CoalitionJson {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl TryFrom<CoalitionJson> for DecisiveCoalition {
    type Error = Error;
    fn try_from(raw: CoalitionJson) -> Result<Self> {
        Self::from_members(raw.n, &raw.members)
    }
}

impl From<DecisiveCoalition> for CoalitionJson {
    fn from(k: DecisiveCoalition) -> Self {
        Self { n: k.voters(), members: k.members() }
    }
}

impl DecisiveCoalition {
    pub fn new(n: usize, mask: u64) -> Result<Self> {
        if n == 0 || n > MAX_VOTERS {
            return Err(Error::InvalidCoalition(format!("{n} voters outside 1..={MAX_VOTERS}")));
        }
        let full = (1usize << n) - 1;
        if n < MAX_VOTERS && mask >> (1 << n) != 0 {
            return Err(Error::InvalidCoalition(format!("mask {mask:#x} has sets beyond {n} voters")));
        }
        if mask >> full & 1 == 0 {
            return Err(Error::InvalidCoalition("the set of all voters must be decisive".into()));
        }
        for s in 0..=full {
            if (mask >> s & 1) == (mask >> (full ^ s) & 1) {
                return Err(Error::InvalidCoalition(format!(
                    "exactly one of {:?} and its complement must be decisive",
                    subset_voters(s)
                )));
            }
        }
        Ok(Self { n: n as u8, mask })
    }

    /// From 1-based voter lists.
    pub fn from_members(n: usize, members: &[Vec<usize>]) -> Result<Self> {
        let mut mask = 0u64;
        for set in members {
            let mut s = 0usize;
            for &v in set {
                if v == 0 || v > n {
                    return Err(Error::InvalidCoalition(format!("voter {v} outside 1..={n}")));
                }
                s |= 1 << (v - 1);
            }
            mask |= 1 << s;
        }
        Self::new(n, mask)
    }

    pub fn voters(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, set: usize) -> bool {
        self.mask >> set & 1 == 1
    }

    /// Decisive sets as 1-based voter lists, by subset index.
    pub fn members(&self) -> Vec<Vec<usize>> {
        (0..1usize << self.n).filter(|&s| self.contains(s)).map(subset_voters).collect()
    }

    /// All coalitions over `n` voters, in a fixed order.
    pub fn enumerate(n: usize) -> Result<impl Iterator<Item = DecisiveCoalition>> {
        if n == 0 || n > 5 {
            return Err(Error::Unsupported(format!("enumerating coalitions of {n} voters")));
        }
        let full = (1usize << n) - 1;
        // one free choice per complementary pair {s, full ^ s} with voter n ∉ s, s ≠ ∅
        let reps: Vec<usize> = (1..1usize << (n - 1)).collect();
        Ok((0..1u64 << reps.len()).map(move |choice| {
            let mut mask = 1u64 << full;
            for (j, &s) in reps.iter().enumerate() {
                mask |= 1 << if choice >> j & 1 == 1 { s } else { full ^ s };
            }
            DecisiveCoalition { n: n as u8, mask }
        }))
    }

    /// Count of valid coalitions, `2^(2^(n−1) − 1)`.
    pub fn count(n: usize) -> u64 {
        1u64 << ((1u64 << (n - 1)) - 1)
    }

    /// Count when the full set is not required to be decisive, `2^(2^(n−1))`.
    pub fn count_without_unanimity(n: usize) -> u64 {
        1u64 << (1u64 << (n - 1))
    }

    /// The self-dual Boolean function `h(x) = 1` iff the voters with `x_i = 1`
    /// form a decisive set.
    pub fn boolean_function(&self) -> BooleanFunction {
        BooleanFunction::new(self.voters(), self.mask).expect("mask fits the arity")
    }

    /// The 2-function returning the value whose supporters are decisive.
    pub fn two_function(&self, m: usize) -> Result<TwoFunction> {
        TwoFunction::lift(m, &self.boolean_function())
    }

    pub fn rule(&self, m: usize) -> Result<Rule> {
        Ok(Rule::local(self.two_function(m)?))
    }

    /// Supersets of decisive sets are decisive.
    pub fn is_monotone(&self) -> bool {
        self.boolean_function().is_monotone()
    }

    /// The 1-based voter whose presence alone decides, if any.
    pub fn dictator(&self) -> Option<usize> {
        self.boolean_function().projection_index().map(|i| i + 1)
    }

    /// 1-based voters `S` such that a set is decisive iff it meets `S` in an
    /// odd number of voters, if the coalition has that form.
    pub fn parity_support(&self) -> Option<Vec<usize>> {
        let (c, s) = self.boolean_function().linear_form()?;
        (!c).then(|| subset_voters(s as usize))
    }

    pub fn delta() -> Self {
        Self::from_members(3, &[vec![1], vec![1, 2], vec![1, 3], vec![1, 2, 3]]).unwrap()
    }

    pub fn nu() -> Self {
        Self::from_members(3, &[vec![2], vec![3], vec![2, 3], vec![1, 2, 3]]).unwrap()
    }

    pub fn lambda() -> Self {
        Self::from_members(3, &[vec![1], vec![2], vec![3], vec![1, 2, 3]]).unwrap()
    }

    pub fn mu() -> Self {
        Self::from_members(3, &[vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 2, 3]]).unwrap()
    }
}

fn subset_voters(s: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

impl fmt::Display for DecisiveCoalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self
            .members()
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", sets.join(", "))
    }
}

/// The four canonical ternary rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecialRule {
    Delta,
    Nu,
    Lambda,
    Mu,
}

impl SpecialRule {
    pub const ALL: [SpecialRule; 4] = [Self::Delta, Self::Nu, Self::Lambda, Self::Mu];

    pub fn coalition(self) -> DecisiveCoalition {
        match self {
            Self::Delta => DecisiveCoalition::delta(),
            Self::Nu => DecisiveCoalition::nu(),
            Self::Lambda => DecisiveCoalition::lambda(),
            Self::Mu => DecisiveCoalition::mu(),
        }
    }

    pub fn rule(self, m: usize) -> Result<Rule> {
        self.coalition().rule(m)
    }

    pub fn two_function(self, m: usize) -> Result<TwoFunction> {
        self.coalition().two_function(m)
    }

    /// The Post class of the Boolean clone generated by the rule's slice.
    pub fn class(self) -> PostClass {
        match self {
            Self::Delta => PostClass::O1,
            Self::Nu => PostClass::D1,
            Self::Lambda => PostClass::L4,
            Self::Mu => PostClass::D2,
        }
    }

    pub fn from_class(class: PostClass) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.class() == class)
    }
}

impl fmt::Display for SpecialRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Delta => "delta",
            Self::Nu => "nu",
            Self::Lambda => "lambda",
            Self::Mu => "mu",
        })
    }
}

impl FromStr for SpecialRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "delta" | "δ" => Ok(Self::Delta),
            "nu" | "ν" => Ok(Self::Nu),
            "lambda" | "λ" => Ok(Self::Lambda),
            "mu" | "μ" => Ok(Self::Mu),
            _ => Err(Error::Parse(format!("unknown rule {s:?}"))),
        }
    }
}

/// Binary local rules given by Cayley tables over 3 and 4 alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CayleyRule {
    A3,
    A4,
}

impl CayleyRule {
    /// Rows are the first argument.
    pub fn table(self) -> &'static [&'static [u8]] {
        match self {
            Self::A3 => &[&[0, 1, 0], &[1, 1, 2], &[0, 2, 2]],
            Self::A4 => &[&[0, 1, 0, 3], &[0, 1, 2, 1], &[2, 1, 2, 3], &[0, 3, 2, 3]],
        }
    }

    pub fn m(self) -> usize {
        self.table().len()
    }

    pub fn two_function(self) -> TwoFunction {
        let t = self.table();
        TwoFunction::from_fn(self.m(), 2, |x| t[x[0] as usize][x[1] as usize]).expect("conservative table")
    }

    pub fn rule(self) -> Rule {
        Rule::local(self.two_function())
    }
}

impl FromStr for CayleyRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a3" => Ok(Self::A3),
            "a4" => Ok(Self::A4),
            _ => Err(Error::Parse(format!("unknown Cayley rule {s:?}"))),
        }
    }
}

/// Post class of the coalition's slice clone; always one of the four
/// self-dual classes.
pub fn classify_coalition(k: &DecisiveCoalition) -> Result<PostClass> {
    let class = post_class(&[k.boolean_function()])?;
    if !class.is_self_dual() {
        return Err(Error::Falsified(format!("coalition {k} generates {class}")));
    }
    Ok(class)
}

/// Probability that the rule picks the correct alternative when voter `i`
/// independently votes correctly with probability `p[i]`.
pub fn correct_probability(k: &DecisiveCoalition, p: &[BigRational]) -> Result<BigRational> {
    if p.len() != k.voters() {
        return Err(Error::SizeMismatch(format!("{} probabilities for {} voters", p.len(), k.voters())));
    }
    if p.iter().any(|q| q.is_negative() || *q > BigRational::one()) {
        return Err(Error::InvalidInput("probabilities must lie in [0, 1]".into()));
    }
    let mut total = BigRational::zero();
    for s in (0..1usize << k.voters()).filter(|&s| k.contains(s)) {
        let term = p.iter().enumerate().fold(BigRational::one(), |acc, (i, q)| {
            if s >> i & 1 == 1 {
                acc * q
            } else {
                acc * (BigRational::one() - q)
            }
        });
        total += term;
    }
    Ok(total)
}

/// Exact value of a decimal literal such as `0.55`.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let value = BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -value } else { value })
}

/// Decimal rendering rounded half-up to `sig` significant digits, trailing
/// zeros dropped.
pub fn to_decimal(r: &BigRational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut x = r.abs();
    let mut exp: i64 = 0;
    while x >= ten {
        x /= &ten;
        exp += 1;
    }
    while x < BigRational::one() {
        x *= &ten;
        exp -= 1;
    }
    // x in [1, 10): keep sig digits
    let scale = BigRational::from_integer(BigInt::from(10).pow(sig as u32 - 1));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut n = (x * scale + half).floor().to_integer();
    if n >= BigInt::from(10).pow(sig as u32) {
        n /= 10;
        exp += 1;
    }
    let digits = n.to_string();
    // value = digits × 10^(exp − sig + 1)
    let point = exp + 1; // digits before the decimal point
    let mut out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if r.is_negative() {
        out.insert(0, '-');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::Universe;

    fn q(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn coalition_rules_on_examples() {
        let m = 4;
        let delta = SpecialRule::Delta.two_function(m).unwrap();
        assert_eq!(delta, TwoFunction::projection(m, 3, 0).unwrap());
        let mu = SpecialRule::Mu.two_function(m).unwrap();
        assert_eq!(mu.eval(&[2, 2, 0]), 2);
        let lambda = SpecialRule::Lambda.two_function(m).unwrap();
        assert_eq!(lambda.eval(&[1, 3, 3]), 1);
        let nu = SpecialRule::Nu.two_function(m).unwrap();
        assert_eq!(nu.eval(&[1, 3, 3]), 3);
        assert_eq!(nu.boolean_slice((0, 1), 0).unwrap(), BooleanFunction::minority_led_majority());
    }

    #[test]
    fn special_rules_on_choice_functions() {
        let u = Universe::new(3).unwrap();
        let cs: Vec<_> = u.choice_functions().collect();
        let mu = SpecialRule::Mu.rule(3).unwrap();
        let nu = SpecialRule::Nu.rule(3).unwrap();
        let lambda = SpecialRule::Lambda.rule(3).unwrap();
        for &c in &cs {
            for &d in &cs {
                assert_eq!(mu.apply(&[c, c, d]).unwrap(), c);
                assert_eq!(nu.apply(&[c, d, d]).unwrap(), d);
                assert_eq!(lambda.apply(&[c, d, d]).unwrap(), c);
            }
        }
    }

    #[test]
    fn coalition_validation_and_counts() {
        assert!(DecisiveCoalition::from_members(3, &[vec![1], vec![2]]).is_err());
        // without the full set: valid complement structure, not unanimous
        assert!(DecisiveCoalition::from_members(3, &[vec![], vec![1], vec![2], vec![3]]).is_err());
        for n in 1..=5 {
            let all: Vec<_> = DecisiveCoalition::enumerate(n).unwrap().collect();
            assert_eq!(all.len() as u64, DecisiveCoalition::count(n));
            for k in &all {
                DecisiveCoalition::new(n, k.mask()).unwrap();
            }
        }
        assert_eq!(DecisiveCoalition::count(3), 8);
        assert_eq!(DecisiveCoalition::count_without_unanimity(3), 16);
        assert_eq!(DecisiveCoalition::count(5), 32768);
    }

    #[test]
    fn coalition_json() {
        let k = DecisiveCoalition::delta();
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(json, r#"{"n":3,"members":[[1],[1,2],[1,3],[1,2,3]]}"#);
        assert_eq!(serde_json::from_str::<DecisiveCoalition>(&json).unwrap(), k);
    }

    #[test]
    fn classification_of_named_coalitions() {
        for r in SpecialRule::ALL {
            assert_eq!(classify_coalition(&r.coalition()).unwrap(), r.class(), "{r}");
        }
        let mut counts = std::collections::BTreeMap::new();
        for k in DecisiveCoalition::enumerate(3).unwrap() {
            *counts.entry(classify_coalition(&k).unwrap()).or_insert(0) += 1;
        }
        let expected: std::collections::BTreeMap<_, _> =
            [(PostClass::O1, 3), (PostClass::D1, 3), (PostClass::D2, 1), (PostClass::L4, 1)].into();
        assert_eq!(counts, expected);
    }

    #[test]
    fn probabilities() {
        let p = [q("0.4"), q("0.6"), q("0.6")];
        assert_eq!(correct_probability(&DecisiveCoalition::delta(), &p).unwrap(), q("0.4"));
        assert_eq!(correct_probability(&DecisiveCoalition::nu(), &p).unwrap(), q("0.648"));
        assert_eq!(correct_probability(&DecisiveCoalition::mu(), &p).unwrap(), q("0.552"));
        assert!(correct_probability(&DecisiveCoalition::nu(), &p[..2]).is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q("0.648"), 12), "0.648");
        assert_eq!(to_decimal(&BigRational::new(1.into(), 3.into()), 12), "0.333333333333");
        assert_eq!(to_decimal(&BigRational::new(2.into(), 3.into()), 3), "0.667");
        assert_eq!(to_decimal(&q("0.99999999999999"), 12), "1");
        assert_eq!(to_decimal(&q("123.5"), 3), "124");
        assert_eq!(to_decimal(&q("-0.0005"), 12), "-0.0005");
        assert!(parse_decimal("1.2.3").is_err());
    }

    #[test]
    fn cayley_tables() {
        let g = CayleyRule::A3.two_function();
        assert_eq!(g.eval(&[1, 2]), 2);
        let h = CayleyRule::A4.two_function();
        assert_eq!((h.eval(&[0, 2]), h.eval(&[2, 0]), h.eval(&[1, 2])), (0, 2, 2));
        for r in [CayleyRule::A3, CayleyRule::A4] {
            assert!(!r.rule().is_neutral().unwrap());
            assert!(r.rule().is_unanimous().unwrap());
        }
    }

    #[test]
    fn tabled_rules_and_locality() {
        let local = CayleyRule::A3.rule();
        let tabled = Rule::Tabled(local.tabulate().unwrap());
        assert!(tabled.is_local().unwrap());
        assert_eq!(tabled.two_function().unwrap(), CayleyRule::A3.two_function());
        assert_eq!(tabled.is_neutral().unwrap(), local.is_neutral().unwrap());
        // a rule that looks at another pair is not local
        let peek = TabledRule::from_fn(3, 2, |c| if c[1].bits() & 1 == 1 { c[0] } else { c[1] }).unwrap();
        let peek = Rule::Tabled(peek);
        assert!(!peek.is_local().unwrap());
        assert!(peek.is_unanimous().unwrap());
        assert!(TabledRule::from_fn(3, 1, |_| ChoiceFunction::new(3, 5).unwrap()).is_err());
    }
}
