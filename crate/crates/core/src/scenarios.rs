//! Named verification runs. Each one checks a single published claim on
//! concrete instances and returns a deterministic [`ScenarioReport`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boolean::BooleanFunction;
use crate::clone::closure::boolean_closure;
use crate::clone::extension::{dependent_part_matches, free_binary_part, patchwork};
use crate::clone::{
    classify_symmetric_2clone, post_class, random_free_targets, two_closure, Budget, CaseOneRealizer, ExtensionKind, Fact1Oracle,
    PostClass,
};
use crate::domains::{bounded_invariant_search, invariant_family, DomainClass, DomainSet, SearchFilter};
use crate::error::{Error, Result};
use crate::rules::{
    classify_coalition, correct_probability, parse_decimal, to_decimal, CayleyRule, DecisiveCoalition, Rule,
    SpecialRule,
};
use crate::two_function::{conservative_functions, TwoFunction};
use crate::universe::{pair_count, ChoiceFunction, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Confirmed,
    Falsified,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Confirmed => 0,
            Status::Falsified => 2,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub id: &'static str,
    pub name: &'static str,
    pub claim: &'static str,
    pub status: Status,
    pub parameters: BTreeMap<&'static str, Value>,
    /// Number of instances examined.
    pub checked: u64,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    /// Readings that are reported but not asserted.
    pub observations: Vec<Witness>,
    pub notes: Vec<String>,
    /// Wall time; kept out of the JSON so reports stay byte-identical.
    #[serde(skip)]
    pub runtime: Duration,
}

impl ScenarioReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable form, rendered from the JSON value.
    pub fn to_text(&self) -> String {
        render_text(&serde_json::to_value(self).expect("report serializes"))
    }
}

/// Text rendering of a report's JSON value.
pub fn render_text(v: &Value) -> String {
    let s = |k: &str| v[k].as_str().unwrap_or_default().to_string();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}: {}", s("id"), s("name"), s("status"));
    let _ = writeln!(out, "  claim: {}", s("claim"));
    if let Some(p) = v["parameters"].as_object() {
        let params: Vec<String> = p.iter().map(|(k, x)| format!("{k}={x}")).collect();
        let _ = writeln!(out, "  parameters: {}", params.join(" "));
    }
    let _ = writeln!(out, "  checked: {}", v["checked"]);
    for c in v["checks"].as_array().into_iter().flatten() {
        let mark = if c["passed"].as_bool() == Some(true) { "ok  " } else { "FAIL" };
        let _ = write!(out, "  [{mark}] {}", c["name"].as_str().unwrap_or_default());
        if let Some(d) = c["detail"].as_str() {
            let _ = write!(out, ": {d}");
        }
        out.push('\n');
    }
    for (title, key) in [("witness", "witnesses"), ("observed", "observations")] {
        for w in v[key].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  {title} {}: {}", w["label"].as_str().unwrap_or_default(), w["value"]);
        }
    }
    for n in v["notes"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  note: {}", n.as_str().unwrap_or_default());
    }
    out
}

/// Caller-supplied parameters; `None` means the scenario default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub alpha: Option<String>,
    pub seed: u64,
    pub budget: Option<u64>,
}

type Runner = fn(&Params, &mut Recorder) -> Result<()>;

pub struct ScenarioSpec {
    pub id: &'static str,
    pub name: &'static str,
    pub claim: &'static str,
    /// Optional parameters the scenario reads, besides the seed.
    pub accepts: &'static [&'static str],
    /// Meaning of `--budget`, if any.
    pub budget: Option<&'static str>,
    run: Runner,
}

pub const REGISTRY: [ScenarioSpec; 10] = [
    ScenarioSpec {
        id: "S1",
        name: "counterexample-a3",
        claim: "f(c1, c2) = f(c2, c1) = c2: over 3 alternatives a local non-neutral rule keeps the symmetric non-trivial rock-paper-scissors set",
        accepts: &[],
        budget: None,
        run: s1,
    },
    ScenarioSpec {
        id: "S2",
        name: "counterexample-a4",
        claim: "over 4 alternatives the class of pairs {c<1, c<2} with x2 <2 x1 <2 x4 <2 x3 is symmetric, non-trivial, rational and preserved by a local non-neutral rule",
        accepts: &[],
        budget: None,
        run: s2,
    },
    ScenarioSpec {
        id: "S3",
        name: "post-table",
        claim: "the tabulated generators give the six classes O1, D1, D2, L4, A4, C4, of which O1, D1, D2, L4 are self-dual",
        accepts: &[],
        budget: Some("closure element cap"),
        run: s3,
    },
    ScenarioSpec {
        id: "S4",
        name: "coalition-census",
        claim: "every local neutral rule is invariantly equivalent to one of the rules delta, nu, lambda, mu",
        accepts: &["n"],
        budget: None,
        run: s4,
    },
    ScenarioSpec {
        id: "S5",
        name: "nu-optimality",
        claim: "nu maximizes the probability of a correct social decision when voters 2, 3 are right with probability alpha and voter 1 with 1 - alpha",
        accepts: &["alpha"],
        budget: None,
        run: s5,
    },
    ScenarioSpec {
        id: "S6",
        name: "arrow-condorcet",
        claim: "the class of rational choice functions is not preserved by either rule lambda or mu",
        accepts: &["m"],
        budget: Some("candidate sets in the lambda symmetric-invariant search"),
        run: s6,
    },
    ScenarioSpec {
        id: "S7",
        name: "inv-nu-intersection",
        claim: "Inv nu = Inv mu ∩ Inv lambda",
        accepts: &["m"],
        budget: Some("closure element cap"),
        run: s7,
    },
    ScenarioSpec {
        id: "S8",
        name: "prop-neutrality",
        claim: "every local neutral rule preserves any two-element set",
        accepts: &["m"],
        budget: Some("sampled (rule, two-element set) instances"),
        run: s8,
    },
    ScenarioSpec {
        id: "S9",
        name: "theorem2-suite",
        claim: "over at least 5 alternatives a symmetric conservative 2-clone is the free extension of O1, D1, D2, L4, A4 or C4, or the dependent extension of O1, D1, D2 or L4",
        accepts: &["m"],
        budget: Some("closure element cap"),
        run: s9,
    },
    ScenarioSpec {
        id: "S10",
        name: "prop3-bijection",
        claim: "every local rule is represented by a unique conservative 2-function",
        accepts: &[],
        budget: None,
        run: s10,
    },
];

pub fn find(id: &str) -> Option<&'static ScenarioSpec> {
    REGISTRY.iter().find(|s| s.id.eq_ignore_ascii_case(id) || s.name.eq_ignore_ascii_case(id))
}

/// Runs the scenario named by `id` (either `S4` or `coalition-census`).
///
/// Bad parameters are errors; a budget running out yields an inconclusive
/// report and a contradicted claim a falsified one.
pub fn run_scenario(id: &str, params: &Params) -> Result<ScenarioReport> {
    let spec = find(id).ok_or_else(|| Error::InvalidInput(format!("unknown scenario {id:?}")))?;
    for (name, given) in [("m", params.m.is_some()), ("n", params.n.is_some()), ("alpha", params.alpha.is_some())] {
        if given && !spec.accepts.contains(&name) {
            return Err(Error::InvalidInput(format!("{} does not take --{name}", spec.id)));
        }
    }
    if params.budget.is_some() && spec.budget.is_none() {
        return Err(Error::InvalidInput(format!("{} does not take --budget", spec.id)));
    }
    let start = Instant::now();
    let mut rec = Recorder::default();
    rec.param("seed", params.seed);
    let outcome = (spec.run)(params, &mut rec);
    let status = match outcome {
        Ok(()) if rec.checks.iter().all(|c| c.passed) => Status::Confirmed,
        Ok(()) => Status::Falsified,
        Err(Error::BudgetExceeded(msg)) => {
            rec.notes.push(format!("budget exceeded: {msg}"));
            Status::Inconclusive
        }
        Err(Error::Falsified(msg)) => {
            rec.check("internal consistency", false, Some(msg));
            Status::Falsified
        }
        Err(e) => return Err(e),
    };
    if status == Status::Falsified && rec.witnesses.is_empty() {
        let failed: Vec<String> = rec.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        rec.witness("failed checks", failed);
    }
    Ok(ScenarioReport {
        id: spec.id,
        name: spec.name,
        claim: spec.claim,
        status,
        parameters: rec.parameters,
        checked: rec.checked,
        checks: rec.checks,
        witnesses: rec.witnesses,
        observations: rec.observations,
        notes: rec.notes,
        runtime: start.elapsed(),
    })
}

#[derive(Default)]
pub struct Recorder {
    parameters: BTreeMap<&'static str, Value>,
    checked: u64,
    checks: Vec<Check>,
    witnesses: Vec<Witness>,
    observations: Vec<Witness>,
    notes: Vec<String>,
}

impl Recorder {
    fn param(&mut self, name: &'static str, v: impl Serialize) {
        self.parameters.insert(name, json!(v));
    }

    fn count(&mut self, n: u64) {
        self.checked += n;
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    fn witness(&mut self, label: impl Into<String>, v: impl Serialize) {
        self.witnesses.push(Witness { label: label.into(), value: json!(v) });
    }

    fn observe(&mut self, label: impl Into<String>, v: impl Serialize) {
        self.observations.push(Witness { label: label.into(), value: json!(v) });
    }
}

fn closure_budget(p: &Params) -> Budget {
    p.budget.map_or_else(Budget::default, |b| Budget::elements(b as usize))
}

/// Alternatives listed from most to least often chosen.
fn ranking(c: &ChoiceFunction) -> Vec<u8> {
    let m = c.m() as u8;
    let mut wins = vec![0usize; m as usize];
    for i in 0..m {
        for j in i + 1..m {
            wins[c.choose(i, j) as usize] += 1;
        }
    }
    let mut order: Vec<u8> = (0..m).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(wins[a as usize]));
    order
}

fn rock_paper_scissors() -> Result<(ChoiceFunction, ChoiceFunction)> {
    let c1 = ChoiceFunction::from_fn(3, |i, j| match (i, j) {
        (0, 1) => 0,
        (1, 2) => 1,
        _ => 2,
    })?;
    let c2 = ChoiceFunction::from_fn(3, |i, j| match (i, j) {
        (0, 1) => 1,
        (1, 2) => 2,
        _ => 0,
    })?;
    Ok((c1, c2))
}

fn s1(_: &Params, rec: &mut Recorder) -> Result<()> {
    rec.param("m", 3);
    let rule = CayleyRule::A3.rule();
    let g = CayleyRule::A3.two_function();
    rec.check("g(a2, a3) = a3", g.eval(&[1, 2]) == 2, None);
    rec.check("rule is local", rule.is_local()?, None);
    rec.check("rule is not neutral", !rule.is_neutral()?, None);
    let (c1, c2) = rock_paper_scissors()?;
    let d = DomainSet::new(3, [c1, c2])?;
    rec.check("D is symmetric", d.is_symmetric()?, None);
    rec.check("D orbit is {D}", d.orbit()?.sets() == [d.clone()], None);
    rec.check("D is non-trivial", !d.is_trivial()?, Some(format!("agreement mask {:#b}", d.agreement_pairs()?)));
    rec.check("D is invariant", d.is_invariant(&rule)?, None);
    let f12 = rule.apply(&[c1, c2])?;
    let f21 = rule.apply(&[c2, c1])?;
    rec.check("f(c1, c2) = c2", f12 == c2, Some(f12.to_bitstring()));
    rec.check("f(c2, c1) = c2", f21 == c2, Some(f21.to_bitstring()));
    rec.count(4);
    rec.witness("c1", c1);
    rec.witness("c2", c2);
    rec.witness("f(c1, c2)", f12);
    rec.witness("f(c2, c1)", f21);
    Ok(())
}

fn s2(_: &Params, rec: &mut Recorder) -> Result<()> {
    rec.param("m", 4);
    let rule = CayleyRule::A4.rule();
    let h = CayleyRule::A4.two_function();
    let first_pairs = [[0u8, 2], [2, 0], [1, 3], [3, 1]];
    let mut projection_ok = true;
    for a in 0..4u8 {
        for b in (0..4u8).filter(|&b| b != a) {
            let want = if first_pairs.contains(&[a, b]) { a } else { b };
            if h.eval(&[a, b]) != want {
                projection_ok = false;
                rec.witness("projection mismatch", json!({"args": [a, b], "value": h.eval(&[a, b])}));
            }
        }
    }
    rec.check("h is the first projection on (a1,a3),(a3,a1),(a2,a4),(a4,a2) and the second elsewhere", projection_ok, None);
    rec.check("rule is local", rule.is_local()?, None);
    rec.check("rule is not neutral", !rule.is_neutral()?, None);

    let mut sets = Vec::new();
    let mut cases_ok = true;
    for x in Universe::new(4)?.permutations() {
        let x = x.image();
        let c1 = ChoiceFunction::from_order(&[x[0], x[1], x[2], x[3]])?;
        let c2 = ChoiceFunction::from_order(&[x[1], x[0], x[3], x[2]])?;
        let head = [x[0].min(x[1]), x[0].max(x[1])];
        let kept = head == [0, 2] || head == [1, 3];
        let (f12, f21) = (rule.apply(&[c1, c2])?, rule.apply(&[c2, c1])?);
        let want = if kept { (c1, c2) } else { (c2, c1) };
        if (f12, f21) != want {
            cases_ok = false;
            rec.witness("displayed case mismatch", json!({"x": x, "f(c1,c2)": f12, "f(c2,c1)": f21}));
        }
        sets.push(DomainSet::new(4, [c1, c2])?);
        rec.count(1);
    }
    rec.check("f(c<1, c<2), f(c<2, c<1) follow the two displayed cases for all 24 labelings", cases_ok, None);
    let class = DomainClass::new(sets);
    rec.check("class has 12 sets", class.len() == 12, Some(class.len().to_string()));
    rec.check("class is the orbit of one set", class == class.sets()[0].orbit()?, None);
    rec.check("class is symmetric", class.is_symmetric()?, None);
    let rational = class.sets().iter().all(|d| d.members().iter().all(ChoiceFunction::is_rational));
    rec.check("class is rational", rational, None);
    let mut nontrivial = true;
    let mut invariant = true;
    for d in class.sets() {
        nontrivial &= !d.is_trivial()?;
        if let Some((args, out)) = d.invariance_violation(&rule)? {
            invariant = false;
            rec.witness("invariance violation", json!({"domain": d, "args": args, "output": out}));
        }
    }
    rec.check("every set is non-trivial", nontrivial, None);
    rec.check("every set is invariant", invariant, None);
    rec.witness("first set", &class.sets()[0]);
    Ok(())
}

/// The first generator as printed for D1, `x̄y ∨ ȳz ∨ yz`.
fn printed_d1_generator() -> BooleanFunction {
    BooleanFunction::from_fn(3, |v| (!v[0] && v[1]) || (!v[1] && v[2]) || (v[1] && v[2])).expect("ternary")
}

fn s3(p: &Params, rec: &mut Recorder) -> Result<()> {
    let budget = closure_budget(p);
    rec.param("budget", budget.max_elements);
    let mut prints = BTreeMap::new();
    let mut self_dual = BTreeSet::new();
    let mut sizes = BTreeMap::new();
    for class in PostClass::ALL {
        let got = post_class(&class.table_generators())?;
        rec.check(format!("{class} generators give {class}"), got == class, Some(got.to_string()));
        prints.insert(class.to_string(), crate::clone::fingerprint(&class.table_generators())?.to_string());
        let ternary = boolean_closure(&class.generators(), 3, budget)?;
        if ternary.members.iter().all(BooleanFunction::is_self_dual) {
            self_dual.insert(class);
        }
        sizes.insert(class.to_string(), ternary.len());
        rec.count(1);
    }
    let distinct: BTreeSet<&String> = prints.values().collect();
    rec.check("six pairwise-distinct fingerprints", distinct.len() == 6, None);
    rec.check(
        "self-dual classes are exactly O1, D1, D2, L4",
        self_dual.iter().copied().eq(PostClass::SELF_DUAL),
        Some(format!("{self_dual:?}")),
    );
    let alt = post_class(&[BooleanFunction::median(), BooleanFunction::xor3()])?;
    rec.check("median with x⊕y⊕z gives D1", alt == PostClass::D1, Some(alt.to_string()));
    rec.witness("fingerprints (median, xor, and, x∨yz̄)", prints);
    rec.observe("ternary sizes", sizes);
    let printed = printed_d1_generator();
    rec.observe(
        "printed D1 formula x̄y ∨ ȳz ∨ yz",
        json!({
            "self_dual": printed.is_self_dual(),
            "generates": post_class(&[printed])?.to_string(),
            "generates_without_dual": boolean_closure(&[printed], 3, budget)?.len(),
        }),
    );
    rec.notes.push("D1 is checked with x̄y ∨ x̄z ∨ yz, the self-dual reading of the printed formula".into());
    Ok(())
}

fn s4(p: &Params, rec: &mut Recorder) -> Result<()> {
    let n = p.n.unwrap_or(3);
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidInput(format!("S4 takes 1 ≤ n ≤ 5, got {n}")));
    }
    rec.param("n", n);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut all_self_dual = true;
    let mut monotone_reading = (0u64, None::<String>);
    let mut parity_reading = (0u64, None::<String>);
    for k in DecisiveCoalition::enumerate(n)? {
        let h = k.boolean_function();
        all_self_dual &= h.is_self_dual() && h.preserves_zero() && h.preserves_one();
        let class = classify_coalition(&k)?;
        *counts.entry(class.to_string()).or_default() += 1;
        let monotone_nondictator = k.is_monotone() && k.dictator().is_none();
        if monotone_nondictator != (class == PostClass::D2) {
            monotone_reading.0 += 1;
            monotone_reading.1.get_or_insert_with(|| format!("{k} is in {class}"));
        }
        let odd_parity = k.parity_support().is_some_and(|s| s.len() >= 3);
        if odd_parity != (class == PostClass::L4) {
            parity_reading.0 += 1;
            parity_reading.1.get_or_insert_with(|| format!("{k} is in {class}"));
        }
        rec.count(1);
    }
    let total = rec.checked;
    let want = DecisiveCoalition::count(n);
    rec.check("coalition count is 2^(2^(n-1) - 1)", total == want, Some(format!("{total} of {want}")));
    rec.check("every coalition function is self-dual and preserves 0 and 1", all_self_dual, None);
    let classes: BTreeSet<&String> = counts.keys().collect();
    rec.check("every coalition lands in O1, D1, D2 or L4", classes.iter().all(|c| ["O1", "D1", "D2", "L4"].contains(&c.as_str())), None);
    if n >= 3 {
        rec.check("all four classes occur", classes.len() == 4, None);
    }
    if n == 3 {
        let want: BTreeMap<String, u64> =
            [("D1", 3), ("D2", 1), ("L4", 1), ("O1", 3)].map(|(c, k)| (c.to_string(), k)).into();
        rec.check("counts O1:3, D1:3, D2:1, L4:1", counts == want, Some(format!("{counts:?}")));
        for r in SpecialRule::ALL {
            let got = classify_coalition(&r.coalition())?;
            rec.check(format!("{r} coalition is in {}", r.class()), got == r.class(), Some(got.to_string()));
        }
    }
    rec.witness("class counts", &counts);
    rec.observe(
        "monotone and non-dictatorial ⇔ D2",
        json!({"holds": monotone_reading.0 == 0, "exceptions": monotone_reading.0, "first_exception": monotone_reading.1}),
    );
    rec.observe(
        "odd number of non-dummy voters, parity vote ⇔ L4",
        json!({"holds": parity_reading.0 == 0, "exceptions": parity_reading.0, "first_exception": parity_reading.1}),
    );
    Ok(())
}

fn s5(p: &Params, rec: &mut Recorder) -> Result<()> {
    let grid: Vec<String> = match &p.alpha {
        Some(a) => vec![a.clone()],
        None => (11..=19).map(|k| to_decimal(&BigRational::new((k * 5).into(), 100.into()), 12)).collect(),
    };
    rec.param("alpha", &grid);
    let half = BigRational::new(1.into(), 2.into());
    let one = BigRational::from_integer(1.into());
    let coalitions: Vec<DecisiveCoalition> = DecisiveCoalition::enumerate(3)?.collect();
    let nu = DecisiveCoalition::nu();
    let mut table = Vec::new();
    for a in &grid {
        let alpha = parse_decimal(a)?;
        if alpha <= half || alpha >= one {
            return Err(Error::InvalidInput(format!("alpha must lie strictly between 1/2 and 1, got {a}")));
        }
        let p = [&one - &alpha, alpha.clone(), alpha.clone()];
        let mut values = Vec::new();
        for k in &coalitions {
            values.push((k.clone(), correct_probability(k, &p)?));
            rec.count(1);
        }
        let best = values.iter().map(|(_, v)| v).max().expect("eight coalitions").clone();
        let winners: Vec<&DecisiveCoalition> = values.iter().filter(|(_, v)| *v == best).map(|(k, _)| k).collect();
        let nu_value = values.iter().find(|(k, _)| *k == nu).map(|(_, v)| v.clone()).expect("nu enumerated");
        let runner_up = values.iter().filter(|(k, _)| *k != nu).map(|(_, v)| v).max().expect("seven others").clone();
        rec.check(
            format!("alpha={a}: nu is the unique maximum"),
            winners == [&nu],
            Some(format!("P(nu)={}, next={}", to_decimal(&nu_value, 12), to_decimal(&runner_up, 12))),
        );
        if alpha == BigRational::new(3.into(), 5.into()) {
            let exact = BigRational::new(81.into(), 125.into());
            rec.check("alpha=0.6: P(nu) = 81/125 exactly", nu_value == exact, Some(nu_value.to_string()));
        }
        table.push(json!({
            "alpha": a,
            "p_nu": nu_value.to_string(),
            "p_nu_decimal": to_decimal(&nu_value, 12),
            "runner_up": to_decimal(&runner_up, 12),
        }));
    }
    rec.witness("probabilities", table);
    Ok(())
}

fn s6(p: &Params, rec: &mut Recorder) -> Result<()> {
    let ms: Vec<usize> = match p.m {
        Some(m) if (3..=5).contains(&m) => vec![m],
        Some(m) => return Err(Error::InvalidInput(format!("S6 takes 3 ≤ m ≤ 5, got {m}"))),
        None => vec![3, 4, 5],
    };
    rec.param("m", &ms);
    let search_budget = p.budget.unwrap_or(10_000);
    rec.param("budget", search_budget);
    for &m in &ms {
        let rational = DomainSet::rational(m)?;
        for r in [SpecialRule::Mu, SpecialRule::Lambda] {
            let rule = r.rule(m)?;
            let Some((args, out)) = rational.invariance_violation(&rule)? else {
                rec.check(format!("m={m}: {r} has a Condorcet witness"), false, Some("rational set is invariant".into()));
                continue;
            };
            let verified = args.iter().all(ChoiceFunction::is_rational) && !out.is_rational() && rule.apply(&args)? == out;
            rec.check(format!("m={m}: {r} has a Condorcet witness"), verified, None);
            rec.witness(
                format!("m={m} {r}"),
                json!({
                    "inputs": args,
                    "orders": args.iter().map(ranking).collect::<Vec<_>>(),
                    "output": out,
                }),
            );
            rec.count(1);
        }
        // unions of orbits: every symmetric set
        let cap = 1 << pair_count(m);
        let lambda = SpecialRule::Lambda.rule(m)?;
        let found = bounded_invariant_search(&lambda, cap, SearchFilter { symmetric: true, nontrivial: true }, search_budget)?;
        rec.observe(
            format!("m={m}: non-trivial symmetric lambda-invariant sets"),
            json!({
                "count": found.found.len(),
                "sizes": found.found.iter().map(DomainSet::len).collect::<Vec<_>>(),
                "complete": found.complete,
                "examined": found.examined,
            }),
        );
    }
    Ok(())
}

fn s7(p: &Params, rec: &mut Recorder) -> Result<()> {
    let m = p.m.unwrap_or(5);
    rec.param("m", m);
    let budget = closure_budget(p);
    rec.param("budget", budget.max_elements);
    let hat = |r: SpecialRule, m: usize| r.two_function(m);
    let (nu, mu, lambda) = (hat(SpecialRule::Nu, m)?, hat(SpecialRule::Mu, m)?, hat(SpecialRule::Lambda, m)?);
    let mu_lambda = two_closure(m, &[mu.clone(), lambda.clone()], 3, budget)?;
    let from_nu = two_closure(m, &[nu.clone()], 3, budget)?;
    rec.count(2);
    rec.check(
        format!("m={m}: nu ∈ <mu, lambda>"),
        mu_lambda.contains(&nu),
        Some(format!("ternary part has {} members", mu_lambda.len())),
    );
    rec.check(
        format!("m={m}: mu, lambda ∈ <nu>"),
        from_nu.contains(&mu) && from_nu.contains(&lambda),
        Some(format!("ternary part has {} members", from_nu.len())),
    );
    rec.check("ternary parts have at most 64 members", mu_lambda.len() <= 64 && from_nu.len() <= 64, None);

    let fam = |r: SpecialRule| r.rule(3).and_then(|f| invariant_family(&f));
    let (inv_nu, inv_mu, inv_lambda) = (fam(SpecialRule::Nu)?, fam(SpecialRule::Mu)?, fam(SpecialRule::Lambda)?);
    let mismatches: Vec<DomainSet> = (0..=255u8)
        .filter(|&s| inv_nu[s as usize] != (inv_mu[s as usize] && inv_lambda[s as usize]))
        .map(DomainSet::from_subset_index)
        .collect();
    rec.count(256);
    rec.check("m=3: Inv nu = Inv mu ∩ Inv lambda over all 256 subsets", mismatches.is_empty(), None);
    if let Some(d) = mismatches.first() {
        rec.witness("first mismatch", d);
    }
    let size = |f: &[bool]| f.iter().filter(|&&b| b).count();
    rec.witness(
        "m=3 invariant family sizes",
        json!({"nu": size(&inv_nu), "mu": size(&inv_mu), "lambda": size(&inv_lambda)}),
    );
    Ok(())
}

fn s8(p: &Params, rec: &mut Recorder) -> Result<()> {
    let m = p.m.unwrap_or(5);
    let samples = p.budget.unwrap_or(10_000);
    rec.param("m", m);
    rec.param("budget", samples);
    let mut violation = None;

    let exhaustive: Vec<DecisiveCoalition> = DecisiveCoalition::enumerate(3)?.collect();
    let pairs: Vec<Vec<ChoiceFunction>> = {
        let all: Vec<ChoiceFunction> = Universe::new(3)?.choice_functions().collect();
        (0..all.len()).flat_map(|i| (i + 1..all.len()).map(move |j| (i, j))).map(|(i, j)| vec![all[i], all[j]]).collect()
    };
    for k in &exhaustive {
        let rule = k.rule(3)?;
        for pair in &pairs {
            let d = DomainSet::new(3, pair.clone())?;
            if violation.is_none() && !d.is_invariant(&rule)? {
                violation = Some(json!({"coalition": k, "domain": d}));
            }
            rec.count(1);
        }
    }
    rec.check(
        "m=3: all 8 coalitions of 3 voters keep all 28 two-element sets",
        violation.is_none() && exhaustive.len() * pairs.len() == 224,
        None,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let coalitions: Vec<Vec<DecisiveCoalition>> =
        (1..=5).map(|n| DecisiveCoalition::enumerate(n).map(Iterator::collect)).collect::<Result<_>>()?;
    let size = 1u64 << pair_count(m);
    let mut sampled_violation = None;
    for _ in 0..samples {
        let pool = &coalitions[rng.gen_range(0..coalitions.len())];
        let k = &pool[rng.gen_range(0..pool.len())];
        let a = rng.gen_range(0..size) as u32;
        let b = (a + rng.gen_range(1..size) as u32) % size as u32;
        let d = DomainSet::new(m, [ChoiceFunction::new(m, a)?, ChoiceFunction::new(m, b)?])?;
        if let Some((args, out)) = d.invariance_violation(&k.rule(m)?)? {
            sampled_violation.get_or_insert(json!({"coalition": k, "domain": d, "args": args, "output": out}));
        }
        rec.count(1);
    }
    rec.check(format!("m={m}: {samples} sampled instances, no violation"), sampled_violation.is_none(), None);
    if let Some(v) = violation.or(sampled_violation) {
        rec.witness("violation", v);
    }
    Ok(())
}

fn s9(p: &Params, rec: &mut Recorder) -> Result<()> {
    let m = p.m.unwrap_or(5);
    if m < 5 {
        return Err(Error::InvalidInput(format!("S9 needs at least 5 alternatives, got {m}")));
    }
    let budget = closure_budget(p);
    rec.param("m", m);
    rec.param("budget", budget.max_elements);

    for r in SpecialRule::ALL {
        let gens = [r.two_function(m)?];
        let c = classify_symmetric_2clone(&gens)?;
        let class = r.class();
        rec.check(
            format!("{r}: Dependent({class})"),
            c.kind == ExtensionKind::Dependent && c.base == class,
            Some(format!("{}({})", c.kind, c.base)),
        );
        let (got, want, eq) = dependent_part_matches(&gens, class, 3, budget)?;
        rec.check(format!("{r}: ternary part equals the dependent extension"), eq, Some(format!("{got} vs {want}")));
        rec.count(1);
    }

    let mut sizes = BTreeMap::new();
    for class in PostClass::ALL {
        let gens = [patchwork(m, class)?];
        let c = classify_symmetric_2clone(&gens)?;
        rec.check(
            format!("{class} patchwork: Free({class})"),
            c.kind == ExtensionKind::Free && c.base == class,
            Some(format!("{}({})", c.kind, c.base)),
        );
        let part = free_binary_part(&gens, budget)?;
        rec.check(
            format!("{class} patchwork: binary part equals the free extension"),
            part.matches_free_extension(),
            Some(format!("{} vs {}", part.size, part.expected_size)),
        );
        sizes.insert(class.to_string(), part.size);
        rec.count(1);
    }
    rec.witness("free binary part sizes", sizes);

    // one non-projection binary generator whose orbit generates the free A4 extension
    let min_like = TwoFunction::lift(m, &BooleanFunction::and2())?;
    let oracle = Fact1Oracle::new(&[min_like], budget)?;
    let mut queries = 0u64;
    let mut missing = None;
    let pairs: Vec<[u8; 2]> =
        (0..m as u8).flat_map(|a| (0..m as u8).filter(move |&b| b != a).map(move |b| [a, b])).collect();
    for p1 in &pairs {
        for p2 in &pairs {
            if (p1[0] == p2[0] && p1[1] == p2[1]) || (p1[0] == p2[1] && p1[1] == p2[0]) {
                continue;
            }
            for x in *p1 {
                for y in *p2 {
                    let a = [p1[0], p1[1], p2[0], p2[1]];
                    match oracle.witness(a, x, y) {
                        Ok(_) => {}
                        Err(Error::NoWitness(msg)) => {
                            missing.get_or_insert(msg);
                        }
                        Err(e) => return Err(e),
                    }
                    queries += 1;
                }
            }
        }
    }
    rec.count(queries);
    rec.check(
        format!("binary witness for all {queries} valid (a1, a2, a3, a4, x, y) under the min-like orbit"),
        missing.is_none(),
        missing.clone(),
    );

    let mut realized = 0u64;
    let mut mismatch = None;
    for class in PostClass::ALL {
        let mut r = CaseOneRealizer::new(&[patchwork(m, class)?], budget)?;
        for target in random_free_targets(m, class, 3, 100, p.seed)? {
            let out = r.realize(&target)?;
            if out.function != target {
                mismatch.get_or_insert_with(|| json!({"class": class, "target": target}));
            }
            realized += 1;
        }
        r.derivation().replay()?;
    }
    rec.count(realized);
    rec.check(format!("{realized} random free-extension ternary targets realized exactly"), mismatch.is_none(), None);
    if let Some(w) = mismatch {
        rec.witness("realization mismatch", w);
    }
    Ok(())
}

fn s10(_: &Params, rec: &mut Recorder) -> Result<()> {
    rec.param("m", 3);
    let mut seen = BTreeSet::new();
    let mut roundtrip = true;
    let mut identity = true;
    let mut neutrality = true;
    let all: Vec<ChoiceFunction> = Universe::new(3)?.choice_functions().collect();
    for g in conservative_functions(3, 2)? {
        let local = Rule::local(g.clone());
        let tabled = Rule::Tabled(local.tabulate()?);
        seen.insert(tabled.tabulate()?.table().to_vec());
        roundtrip &= tabled.two_function()? == g && Rule::local(tabled.two_function()?).tabulate()? == local.tabulate()?;
        for &c1 in &all {
            for &c2 in &all {
                let out = tabled.apply(&[c1, c2])?;
                identity &= (0..3u8)
                    .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                    .all(|(i, j)| out.choose(i, j) == g.eval(&[c1.choose(i, j), c2.choose(i, j)]));
            }
        }
        neutrality &= tabled.is_neutral()? == g.is_self_dual();
        rec.count(1);
    }
    rec.check("64 conservative binary 2-functions", rec.checked == 64, Some(rec.checked.to_string()));
    rec.check("64 distinct local rules", seen.len() == 64, None);
    rec.check("rule to 2-function to rule round-trips", roundtrip, None);
    rec.check("f(c1, c2)(b) = g(c1(b), c2(b)) on all inputs and pairs", identity, None);
    rec.check("neutral ⇔ self-dual", neutrality, None);
    // swapping the output at one profile breaks locality
    let mut table = CayleyRule::A3.rule().tabulate()?.table().to_vec();
    let code = 1 + 8 * 2;
    table[code] ^= 1;
    let broken = Rule::Tabled(crate::rules::TabledRule::new(3, 2, table)?);
    rec.check("an altered table is rejected as non-local", matches!(broken.two_function(), Err(Error::NotLocal)), None);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(id: &str, p: Params) -> ScenarioReport {
        let r = run_scenario(id, &p).unwrap();
        assert_eq!(r.status, Status::Confirmed, "{}", r.to_text());
        r
    }

    #[test]
    fn quick_scenarios_confirm() {
        for id in ["S1", "S2", "S3", "S5", "S10"] {
            run(id, Params::default());
        }
        run("S4", Params::default());
        run("S7", Params { m: Some(3), ..Params::default() });
        run("S8", Params { m: Some(4), budget: Some(200), ..Params::default() });
    }

    #[test]
    fn reports_are_deterministic() {
        let p = Params { budget: Some(300), ..Params::default() };
        assert_eq!(run("S8", p.clone()).to_json(), run("S8", p).to_json());
    }

    #[test]
    fn parameters_are_validated() {
        assert!(run_scenario("S99", &Params::default()).is_err());
        assert!(run_scenario("S1", &Params { m: Some(4), ..Params::default() }).is_err());
        assert!(run_scenario("S5", &Params { alpha: Some("0.4".into()), ..Params::default() }).is_err());
        assert!(run_scenario("S9", &Params { m: Some(4), ..Params::default() }).is_err());
        assert_eq!(find("coalition-census").unwrap().id, "S4");
    }

    #[test]
    fn small_budget_is_inconclusive() {
        let r = run_scenario("S3", &Params { budget: Some(5), ..Params::default() }).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        assert!(!r.notes.is_empty());
        assert_eq!(r.status.exit_code(), 3);
    }

    #[test]
    fn text_is_rendered_from_json() {
        let r = run("S1", Params::default());
        let text = r.to_text();
        assert!(text.starts_with("S1 counterexample-a3: confirmed"));
        assert!(text.contains("[ok  ] f(c1, c2) = c2"));
    }
}
