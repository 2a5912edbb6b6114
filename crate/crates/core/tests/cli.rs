use std::path::{Path, PathBuf};
use std::process::Command;

use gauge_formality::ainf::build_as_koszul_cooperad;
use gauge_formality::cli_io::{
    parse_problem, parse_problem_str, run_command, scalar_to_nums, verify_certificate, Certificate, CooperadSpec,
    InlineCooperad, Num, Outcome,
};
use gauge_formality::ns_operadic::COUNIT;
use gauge_formality::{Error, Rational};
use serde_json::json;
use tempfile::TempDir;

const MASSEY: &str = r#"{
  "degrees": [1, 1, 1, 4],
  "operations": { "3": [[0, 1, 2, 3, 1, 1]] }
}"#;

const EXTERIOR: &str = r#"{
  "degrees": [0, 1, 1, 2],
  "operations": {
    "2": [
      [0, 0, 0, 1, 1], [0, 1, 1, 1, 1], [0, 2, 2, 1, 1], [0, 3, 3, 1, 1],
      [1, 0, 1, 1, 1], [2, 0, 2, 1, 1], [3, 0, 3, 1, 1],
      [1, 2, 3, 1, 1], [2, 1, 3, -1, 1]
    ]
  }
}"#;

/// Three-term dga with `ab = du`, so the transferred `m₃` is nonzero.
const MASSEY_DGA: &str = r#"{
  "degrees": [1, 1, 1, 2, 2, 3, 3, 4],
  "differential": [[3, 5, 1, 1], [4, 6, 1, 1]],
  "operations": { "2": [[0, 1, 3, 1, 1], [1, 2, 4, 1, 1], [5, 2, 7, 1, 1]] }
}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn gform(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Outcome {
    let argv = std::iter::once(std::ffi::OsString::from("gform")).chain(args.iter().map(|a| a.as_ref().to_owned()));
    run_command(argv)
}

fn read_cert(p: &Path) -> Certificate {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn non_prime_field_is_a_positioned_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.json", r#"{"field": "F4", "degrees": [0]}"#);
    let out = gform(&[&"check-mc", &f]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("field") && out.stderr.contains("not prime"), "{}", out.stderr);
    let out = gform(&[&"--field", &"Fp:9", &"check-mc", &write(&dir, "q.json", r#"{"degrees": [0]}"#)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--field"), "{}", out.stderr);
}

#[test]
fn missing_degrees_names_the_line() {
    let err = parse_problem_str("{\n  \"field\": \"Q\"\n}").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("degrees") && msg.contains("line 3"), "{msg}");
    let err = parse_problem_str("{\"degrees\": [0], \"operations\": {\"2\": [[0, 0, 0.5, 1, 1]]}}").unwrap_err();
    assert!(err.to_string().contains("operations.2"), "{err}");
}

/// The associative Koszul dual cooperad written out inline.
fn inline_as_koszul(cap: usize) -> InlineCooperad {
    let coop = build_as_koszul_cooperad::<Rational>(cap).unwrap();
    let name = |c: usize| coop.element(c).name.clone();
    let mut spec = json!({"elements": [], "decompositions": []});
    for c in (0..coop.len()).filter(|c| *c != COUNIT) {
        spec["elements"].as_array_mut().unwrap().push(json!({
            "name": name(c), "weight": coop.weight(c), "arity": coop.arity(c), "degree": coop.degree(c),
        }));
        for t in coop.decomposition(c) {
            if t.root == COUNIT || t.leaves.iter().all(|l| *l == COUNIT) {
                continue;
            }
            spec["decompositions"].as_array_mut().unwrap().push(json!({
                "element": name(c),
                "root": name(t.root),
                "leaves": t.leaves.iter().map(|l| name(*l)).collect::<Vec<_>>(),
                "coeff": scalar_to_nums(&t.coeff),
            }));
        }
    }
    serde_json::from_value(spec).unwrap()
}

fn with_cooperad(base: &str, coop: InlineCooperad, structure: serde_json::Value) -> String {
    let mut v: serde_json::Value = serde_json::from_str(base).unwrap();
    let obj = v.as_object_mut().unwrap();
    obj.remove("operations");
    obj.insert("cooperad".into(), serde_json::to_value(CooperadSpec::Inline(coop)).unwrap());
    obj.insert("structure".into(), structure);
    serde_json::to_string_pretty(&v).unwrap()
}

#[test]
fn inline_cooperad_failing_coassociativity_names_the_element() {
    let mut coop = inline_as_koszul(3);
    let term = coop
        .decompositions
        .iter_mut()
        .find(|d| d.element == "mu4" && d.root == "mu2" && d.leaves == ["mu2", "mu2"])
        .unwrap();
    let Num::Int(v) = term.coeff[0] else { panic!() };
    term.coeff[0] = Num::Int(-v);
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.json", &with_cooperad(MASSEY, coop, json!({"mu3": [[0, 1, 2, 3, 1, 1]]})));
    let out = gform(&[&"--weight-cap", &"3", &"check-mc", &f]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("mu4") && out.stderr.contains("coassociativity"), "{}", out.stderr);
}

#[test]
fn inline_cooperad_agrees_with_the_builtin() {
    let dir = TempDir::new().unwrap();
    let inline = write(&dir, "i.json", &with_cooperad(MASSEY, inline_as_koszul(3), json!({"mu3": [[0, 1, 2, 3, 1, 1]]})));
    let builtin = write(&dir, "b.json", MASSEY);
    for n in ["1", "2"] {
        let a = gform(&[&"--weight-cap", &"3", &"formality", &inline, &"--truncation", &n]);
        let b = gform(&[&"--weight-cap", &"3", &"formality", &builtin, &"--truncation", &n]);
        assert_eq!((a.code, &a.stdout), (b.code, &b.stdout));
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let massey = write(&dir, "m.json", MASSEY);
    let ext = write(&dir, "e.json", EXTERIOR);
    let zero = write(&dir, "z.json", r#"{"degrees": [0, 1]}"#);
    let bad = write(&dir, "x.json", r#"{"degrees": [0, 0], "operations": {"2": [[0, 0, 1, 1, 1], [1, 0, 0, 1, 1]]}}"#);
    assert_eq!(gform(&[&"check-mc", &zero]).code, 0);
    assert_eq!(gform(&[&"check-mc", &bad]).code, 1);
    assert_eq!(gform(&[&"formality", &bad, &"--truncation", &"1"]).code, 2);
    assert_eq!(gform(&[&"formality", &massey, &"--truncation", &"1"]).code, 1);
    assert_eq!(gform(&[&"formality", &ext, &"--truncation", &"2"]).code, 0);
    assert_eq!(gform(&[&"class", &massey, &"--truncation", &"1"]).code, 1);
    assert_eq!(gform(&[&"trivialize", &massey, &"--truncation", &"1"]).code, 1);
    assert_eq!(gform(&[&"trivialize", &ext, &"--truncation", &"1"]).code, 0);
    let gate = gform(&[&"--field", &"F3:3", &"formality", &ext, &"--truncation", &"3"]);
    assert_eq!(gate.code, 2);
    assert!(gate.stderr.contains("3!"), "{}", gate.stderr);
    assert_eq!(gform(&[&"--field", &"F3:3", &"formality", &ext, &"--truncation", &"2"]).code, 0);
    let unbounded = write(&dir, "u.json", r#"{"degrees": [-1, 0, 1]}"#);
    let out = gform(&[&"formality", &unbounded, &"--full"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unbounded"), "{}", out.stderr);
    assert_eq!(gform(&[&"formality", &ext]).code, 2);
    assert_eq!(gform(&[&"--help"]).code, 0);
}

#[test]
fn field_conflict_between_flag_and_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.json", r#"{"field": "Fp:5", "degrees": [0]}"#);
    assert_eq!(gform(&[&"--field", &"Fp:5", &"check-mc", &f]).code, 0);
    let out = gform(&[&"--field", &"Q", &"check-mc", &f]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Fp:5"), "{}", out.stderr);
}

#[test]
fn transfer_output_is_a_problem_file() {
    let dir = TempDir::new().unwrap();
    let dga = write(&dir, "d.json", MASSEY_DGA);
    let out = gform(&[&"transfer", &dga, &"--weight-cap", &"2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let h = write(&dir, "h.json", &out.stdout);
    let parsed = parse_problem(&h).unwrap();
    assert_eq!(parsed.file.degrees, [1, 1, 1, 4]);
    assert!(parsed.file.operations.contains_key("3"));
    let a = gform(&[&"formality", &dga, &"--truncation", &"1"]);
    let b = gform(&[&"formality", &h, &"--truncation", &"1"]);
    assert_eq!((a.code, a.stdout), (b.code, b.stdout));
}

#[test]
fn certificates_round_trip() {
    let dir = TempDir::new().unwrap();
    let massey = write(&dir, "m.json", MASSEY);
    let ext = write(&dir, "e.json", EXTERIOR);
    let dga = write(&dir, "d.json", MASSEY_DGA);
    let runs: Vec<(&Path, Vec<&str>)> = vec![
        (&massey, vec!["formality", "--truncation", "1"]),
        (&massey, vec!["formality", "--full"]),
        (&dga, vec!["formality", "--truncation", "1"]),
        (&ext, vec!["formality", "--truncation", "2"]),
        (&ext, vec!["--field", "Fp:5", "formality", "--truncation", "2"]),
        (&ext, vec!["trivialize", "--truncation", "2"]),
        (&ext, vec!["criteria", "purity", "--truncation", "2", "--cross-check"]),
        (&massey, vec!["criteria", "intrinsic"]),
    ];
    for (j, (file, args)) in runs.into_iter().enumerate() {
        let cert = dir.path().join(format!("c{j}.json"));
        let mut argv: Vec<&dyn AsRef<std::ffi::OsStr>> = args.iter().map(|a| a as &dyn AsRef<std::ffi::OsStr>).collect();
        argv.push(&file);
        argv.push(&"--certificate");
        argv.push(&cert);
        let out = gform(&argv);
        assert!(out.code < 2, "{args:?}: {}", out.stderr);
        let v = gform(&[&"verify", &file, &cert]);
        assert_eq!(v.code, 0, "{args:?}: {}{}", v.stdout, v.stderr);
    }
}

/// Changes the first numerator found in a payload array entry.
fn tamper(v: &mut serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(xs) if xs.len() >= 3 && xs.iter().all(|x| x.is_i64()) => {
            let k = xs.len() - 2;
            xs[k] = json!(xs[k].as_i64().unwrap() + 1);
            true
        }
        serde_json::Value::Array(xs) => xs.iter_mut().any(tamper),
        serde_json::Value::Object(m) => m.values_mut().any(tamper),
        _ => false,
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let dir = TempDir::new().unwrap();
    let massey = write(&dir, "m.json", MASSEY);
    let ext = write(&dir, "e.json", EXTERIOR);
    for (file, args) in [(&massey, ["formality", "--truncation", "1"]), (&ext, ["formality", "--truncation", "2"])] {
        let cert = dir.path().join("c.json");
        gform(&[&args[0], &file, &args[1], &args[2], &"--certificate", &cert]);
        let mut c = read_cert(&cert);
        assert!(tamper(&mut c.payload));
        let problem = parse_problem(file).unwrap();
        assert!(!verify_certificate(&problem, &c).unwrap());
        std::fs::write(&cert, serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(gform(&[&"verify", &file, &cert]).code, 1);
    }
}

#[test]
fn replay_against_an_edited_problem_is_a_hash_mismatch() {
    let dir = TempDir::new().unwrap();
    let massey = write(&dir, "m.json", MASSEY);
    let cert = dir.path().join("c.json");
    gform(&[&"formality", &massey, &"--truncation", &"1", &"--certificate", &cert]);
    let edited = write(&dir, "m2.json", &MASSEY.replace("[0, 1, 2, 3, 1, 1]", "[0, 1, 2, 3, 2, 1]"));
    let err = verify_certificate(&parse_problem(&edited).unwrap(), &read_cert(&cert)).unwrap_err();
    assert!(matches!(err, Error::HashMismatch { .. }));
    let out = gform(&[&"verify", &edited, &cert]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("hash"), "{}", out.stderr);
    let reformatted = write(&dir, "m3.json", &MASSEY.replace('\n', " "));
    assert_eq!(gform(&[&"verify", &reformatted, &cert]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let dga = write(&dir, "d.json", MASSEY_DGA);
    let (c1, c2) = (dir.path().join("1.json"), dir.path().join("2.json"));
    let a = gform(&[&"formality", &dga, &"--truncation", &"1", &"--certificate", &c1]);
    let b = gform(&[&"formality", &dga, &"--truncation", &"1", &"--certificate", &c2]);
    assert_eq!(a, b);
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
    let t1 = gform(&[&"transfer", &dga]);
    assert_eq!(t1, gform(&[&"transfer", &dga]));
}

#[test]
fn binary_reports_exit_codes() {
    let dir = TempDir::new().unwrap();
    let massey = write(&dir, "m.json", MASSEY);
    let out = Command::new(env!("CARGO_BIN_EXE_gform"))
        .args(["formality", "--truncation", "1"])
        .arg(&massey)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("gauge 1-formal: no"));
    let out = Command::new(env!("CARGO_BIN_EXE_gform"))
        .args(["check-mc"])
        .arg(&massey)
        .env("GFORM_WEIGHT_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("1..=4"));
}
