//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

use std::time::{Duration, Instant};

use agclone_core::domains::{invariant_family, DomainSet};
use agclone_core::rules::{Rule, SpecialRule};
use agclone_core::scenarios::{run_scenario, Params, ScenarioReport, Status};
use agclone_core::two_function::conservative_functions;
use agclone_core::{ChoiceFunction, Permutation, TwoFunction, Universe};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};
use serde_json::{json, Value};

struct Outcome {
    ok: bool,
    detail: String,
}

fn scenario(id: &str, params: Params) -> (ScenarioReport, Duration) {
    let report = run_scenario(id, &params).unwrap_or_else(|e| panic!("{id}: {e}"));
    let t = report.runtime;
    (report, t)
}

fn witness<'a>(r: &'a ScenarioReport, label: &str) -> &'a Value {
    &r.witnesses.iter().find(|w| w.label == label).unwrap_or_else(|| panic!("no witness {label}")).value
}

fn confirmed(r: &ScenarioReport) -> Outcome {
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    Outcome {
        ok: r.status == Status::Confirmed && failed.is_empty(),
        detail: format!("{:?}, {} checks, {} instances", r.status, r.checks.len(), r.checked),
    }
}

fn and(mut o: Outcome, cond: bool, what: &str) -> Outcome {
    if !cond {
        o.ok = false;
        o.detail.push_str(&format!("; {what} failed"));
    }
    o
}

fn c1() -> Outcome {
    let (r, _) = scenario("S1", Params::default());
    let bits = |l: &str| witness(&r, l)["bits"].clone();
    let o = confirmed(&r);
    let o = and(o, bits("c1") == json!("010") && bits("c2") == json!("101"), "rock-paper-scissors inputs");
    and(o, bits("f(c1, c2)") == json!("101") && bits("f(c2, c1)") == json!("101"), "both outputs equal c2")
}

fn c2() -> Outcome {
    let (r, _) = scenario("S2", Params::default());
    let o = confirmed(&r);
    and(o, r.checks.iter().any(|c| c.name.starts_with("class has 12 sets")), "orbit size check present")
}

fn c3() -> Outcome {
    let (r, _) = scenario("S3", Params::default());
    let fp = witness(&r, "fingerprints (median, xor, and, x∨yz̄)");
    let expected = json!({"O1":"0000","D2":"1000","L4":"0100","D1":"1100","A4":"1010","C4":"1111"});
    and(confirmed(&r), *fp == expected, "fingerprints")
}

fn c4() -> (Outcome, Duration) {
    let (small, t3) = scenario("S4", Params { n: Some(3), ..Params::default() });
    let o = confirmed(&small);
    let o = and(o, *witness(&small, "class counts") == json!({"O1":3,"D1":3,"D2":1,"L4":1}), "counts at n=3");
    let (big, t5) = scenario("S4", Params { n: Some(5), ..Params::default() });
    let o = and(o, confirmed(&big).ok && big.checked == 32768, "census at n=5");
    let total: u64 = witness(&big, "class counts").as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    let o = and(o, total == 32768, "n=5 counts sum to 32768");
    let readings = big.observations.len() == 2;
    (and(o, readings, "both readings reported"), t3.max(t5))
}

fn c5() -> Outcome {
    let (r, _) = scenario("S5", Params::default());
    let probs = witness(&r, "probabilities").as_array().unwrap();
    let at_06 = probs.iter().find(|p| p["alpha"] == "0.6").unwrap();
    let o = and(confirmed(&r), probs.len() == 9, "nine grid points");
    and(o, at_06["p_nu"] == "81/125" && at_06["p_nu_decimal"] == "0.648", "exact value at 0.6")
}

fn c6() -> Outcome {
    let (r, _) = scenario("S6", Params::default());
    let found = r.witnesses.iter().filter(|w| w.label.starts_with("m=")).count();
    and(confirmed(&r), found == 6, "six Condorcet witnesses")
}

fn c7() -> Outcome {
    let (r, _) = scenario("S7", Params::default());
    confirmed(&r)
}

fn c8() -> Outcome {
    let (r, _) = scenario("S8", Params::default());
    and(confirmed(&r), r.checked >= 8 * 28 + 10_000, "at least 10^4 samples")
}

fn c9() -> Outcome {
    let (r, _) = scenario("S9", Params::default());
    confirmed(&r)
}

fn c10() -> Outcome {
    let (r, _) = scenario("S10", Params::default());
    confirmed(&r)
}

/// Condensed property suites: exhaustive where cheap, seeded otherwise.
fn c11() -> Outcome {
    let mut failures = Vec::new();
    let u = Universe::new(3).unwrap();
    let perms: Vec<Permutation> = u.permutations().collect();
    let binary: Vec<TwoFunction> = conservative_functions(3, 2).unwrap().collect();

    let action = u.choice_functions().all(|c| {
        perms.iter().all(|s| perms.iter().all(|t| c.act(s).unwrap().act(t).unwrap() == c.act(&s.compose(t)).unwrap()))
    }) && binary.iter().all(|g| {
        perms.iter().all(|s| perms.iter().all(|t| g.act(s).unwrap().act(t).unwrap() == g.act(&s.compose(t)).unwrap()))
    });
    if !action {
        failures.push("action laws");
    }

    let mut runner = TestRunner::new(Config {
        cases: 256,
        rng_seed: RngSeed::Fixed(0),
        failure_persistence: None,
        ..Config::default()
    });
    let perm5 = Just((0..5u8).collect::<Vec<u8>>()).prop_shuffle();
    let sampled = runner.run(&(0u32..1024, perm5.clone(), perm5), |(bits, s, t)| {
        let c = ChoiceFunction::new(5, bits).unwrap();
        let (s, t) = (Permutation::new(s).unwrap(), Permutation::new(t).unwrap());
        prop_assert_eq!(c.act(&s).unwrap().act(&t).unwrap(), c.act(&s.compose(&t)).unwrap());
        prop_assert_eq!(c.is_rational(), c.act(&s).unwrap().is_rational());
        Ok(())
    });
    if sampled.is_err() {
        failures.push("action laws at m=5");
    }

    // superposing binary conservative functions into binary ones
    let conservative = binary.iter().all(|f| {
        binary.iter().step_by(7).all(|g| {
            let h = f.superpose(&[g, &binary[21]]).unwrap();
            let ok = h.domain().tuples().enumerate().all(|(i, t)| t.contains(&h.at(i)));
            ok
        })
    });
    if !conservative {
        failures.push("conservativity closure");
    }

    let mut rules: Vec<Rule> = binary.iter().cloned().map(Rule::local).collect();
    rules.extend(SpecialRule::ALL.map(|r| r.rule(3).unwrap()));
    let closed = rules.iter().all(|rule| {
        let fam = invariant_family(rule).unwrap();
        (0..256usize).all(|a| !fam[a] || (0..256usize).all(|b| !fam[b] || fam[a & b]))
    });
    if !closed {
        failures.push("Inv intersection closure");
    }

    let trivial_ok = (1..=255u8).all(|s| {
        let d = DomainSet::from_subset_index(s);
        d.is_trivial().unwrap() == d.is_trivial_by_definition().unwrap()
    });
    if !trivial_ok {
        failures.push("triviality oracle");
    }

    let neutral = binary.iter().all(|g| {
        let tabled = Rule::Tabled(Rule::local(g.clone()).tabulate().unwrap());
        tabled.is_neutral().unwrap() == g.is_self_dual()
    });
    if !neutral || binary.len() != 64 {
        failures.push("neutrality ⇔ self-duality");
    }

    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() { "0 counterexamples, seed 0".into() } else { failures.join(", ") },
    }
}

fn main() {
    type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> (Outcome, Duration)>);
    fn timed(f: fn() -> Outcome) -> Box<dyn Fn() -> (Outcome, Duration)> {
        Box::new(move || {
            let start = Instant::now();
            let o = f();
            (o, start.elapsed())
        })
    }
    let criteria: Vec<Criterion> = vec![
        (1, "S1 counterexample over 3 alternatives", 1, timed(c1)),
        (2, "S2 counterexample over 4 alternatives", 1, timed(c2)),
        (3, "S3 six Post fingerprints", 1, timed(c3)),
        (4, "S4 coalition census at n=3 and n=5", 60, Box::new(c4)),
        (5, "S5 nu optimality, exact at 0.6", 1, timed(c5)),
        (6, "S6 Condorcet witnesses", 5, timed(c6)),
        (7, "S7 Inv nu = Inv mu ∩ Inv lambda", 10, timed(c7)),
        (8, "S8 two-element sets preserved", 30, timed(c8)),
        (9, "S9 symmetric 2-clone classification", 60, timed(c9)),
        (10, "S10 binary rule bijection", 1, timed(c10)),
        (11, "property suites", 60, timed(c11)),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in &criteria {
        let (o, t) = run();
        let in_time = t < Duration::from_secs(*limit);
        let pass = o.ok && in_time;
        failed += !pass as usize;
        println!(
            "{} criterion {n:>2}: {name} ({}; {:.3} s, limit {limit} s{})",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            t.as_secs_f64(),
            if in_time { "" } else { ", too slow" },
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
