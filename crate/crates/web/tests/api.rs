use agclone_web::{check_domain, classify_coalition, fingerprint};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn coalition_classes() {
    let v = parse(classify_coalition(r#"{"n":3,"members":[[2],[3],[2,3],[1,2,3]]}"#));
    assert_eq!(v["class"], "D1");
    assert_eq!(v["equivalent_rule"], "nu");
    let v = parse(classify_coalition(r#"{"n":3,"members":[[1],[1,2],[1,3],[1,2,3]]}"#));
    assert_eq!(v["class"], "O1");
    assert_eq!(v["dictator"], 1);
    assert!(parse(classify_coalition("{")).get("error").is_some());
}

#[test]
fn fingerprints() {
    assert_eq!(parse(fingerprint("00010111"))["class"], "D2");
    assert_eq!(parse(fingerprint("01101001"))["class"], "L4");
    assert_eq!(parse(fingerprint("0001"))["class"], "A4");
    assert_eq!(parse(fingerprint("0001"))["fingerprint"], "1010");
    // x ∨ yz̄ with its dual
    assert_eq!(parse(fingerprint("01110101"))["class"], "C4");
    assert!(parse(fingerprint("0110")).get("error").is_some(), "xor of two does not preserve 1");
    assert!(parse(fingerprint("011")).get("error").is_some());
}

#[test]
fn domains() {
    let v = parse(check_domain("a3", 3, "010 101"));
    assert_eq!(v["invariant"], true);
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["trivial"], false);
    let rational = "000,001,011,100,110,111";
    let v = parse(check_domain("mu", 3, rational));
    assert_eq!(v["invariant"], false);
    assert_eq!(v["rational"], true);
    assert_eq!(v["violation"]["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(parse(check_domain("delta", 3, rational))["invariant"], true);
    assert!(parse(check_domain("a4", 3, "010")).get("error").is_some());
}
