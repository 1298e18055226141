use std::process::{Command, Output};

use hdisc::polyring::MultiPoly;

fn hdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdisc"))
        .args(args)
        .env_remove("HD_CAPACITY")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn equations(out: &Output) -> Vec<MultiPoly> {
    stdout(out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(" = 0").next().unwrap().parse().unwrap())
        .collect()
}

fn p(s: &str) -> MultiPoly {
    s.parse().unwrap()
}

#[test]
fn generate_golden_systems() {
    let out = hdisc(&["generate", "-k", "3", "-p", "3"]);
    assert!(out.status.success());
    let d3 = p("-27*a^2*d^2 + 18*a*b*c*d - 4*a*c^3 - 4*b^3*d + b^2*c^2");
    assert_eq!(equations(&out), vec![p("b^2 - 3*a*c"), d3]);

    let out = hdisc(&["generate", "-k", "2", "-p", "2"]);
    assert_eq!(equations(&out), vec![p("b^2 - 4*a*c")]);

    let out = hdisc(&["generate", "-k", "4", "-p", "2,2", "--stage", "cnf"]);
    let text = stdout(&out);
    assert!(text.starts_with("# cnf of S^4_{2,2}, 8 group(s)"), "{text}");
    assert_eq!(text.lines().nth(1).unwrap().matches(" & ").count(), 7);
}

#[test]
fn json_round_trips_through_the_parser() {
    let out = hdisc(&["generate", "-k", "4", "-p", "3,1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stratum"], "S^4_{3}");
    assert_eq!(v["clause_count"], 3);
    let eqs = v["equations"].as_array().unwrap();
    assert_eq!(eqs.len(), 2);
    for e in eqs {
        let poly = MultiPoly::from_json_value(&e["poly"]).unwrap();
        assert_eq!(poly, e["text"].as_str().unwrap().parse().unwrap());
        assert_eq!(poly.to_json_value(), e["poly"]);
    }
    assert_eq!(v["equations"][0]["content"], "2");
    assert_eq!(v["pruned"][0]["divisible_by"], 1);

    let out = hdisc(&[
        "generate",
        "-k",
        "4",
        "-p",
        "3",
        "--stage",
        "root-system",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for entry in v["polys"].as_array().unwrap() {
        let poly = MultiPoly::from_json_value(&entry["poly"]).unwrap();
        assert_eq!(poly.to_string(), entry["text"].as_str().unwrap());
    }
}

#[test]
fn latex_keeps_constants_on_request() {
    let out = hdisc(&[
        "generate",
        "-k",
        "3",
        "-p",
        "3",
        "--format",
        "latex",
        "--paper-constants",
    ]);
    let text = stdout(&out);
    assert!(text.contains("&2(-3ac+b^2)=0"), "{text}");
    let plain = stdout(&hdisc(&["generate", "-k", "3", "-p", "3", "--format", "latex"]));
    assert!(plain.contains("&-3ac+b^2=0"), "{plain}");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("hdisc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s33.txt");
    let out = hdisc(&["generate", "-k", "3", "-p", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&hdisc(&["generate", "-k", "3", "-p", "3"])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_reports() {
    let text = stdout(&hdisc(&["classify", "-k", "3", "-c", "1,-4,5,-2"]));
    assert!(text.contains("pattern: 2,1\n"), "{text}");
    assert!(text.contains("strata: S^3_{2}\n"), "{text}");
    let text = stdout(&hdisc(&["classify", "-k", "2", "-c", "1,2,1"]));
    assert!(text.contains("pattern: 2\n"), "{text}");
    let text = stdout(&hdisc(&["classify", "-k", "4", "-c", "0,0,1,0,0"]));
    assert!(text.contains("pattern: 2,2 (infinity: 2)"), "{text}");
    let json = hdisc(&["classify", "-k", "3", "-c", "1,-3,3,-1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["pattern"], serde_json::json!([3]));
    assert_eq!(v["strata"], serde_json::json!(["S^3_{3}", "S^3_{2}"]));
}

#[test]
fn verify_passes() {
    for (k, part) in [("3", "3"), ("4", "3"), ("4", "2,2")] {
        let out = hdisc(&["verify", "-k", k, "-p", part, "-n", "200"]);
        let text = stdout(&out);
        assert!(out.status.success(), "{text}");
        assert!(text.contains("PASS: 0 disagreement(s)"), "{text}");
        assert!(
            text.lines().filter(|l| l.contains("agree 200/200")).count() >= 3,
            "{text}"
        );
    }
}

#[test]
fn orbit_and_invariance() {
    let text = stdout(&hdisc(&["orbit", "-k", "3", "--poly", "b^2-3*a*c"]));
    assert!(
        text.contains("Z(G) = G11^2*(-3*a*c + b^2) + G11*G12*(-9*a*d + b*c) + G12^2*(-3*b*d + c^2)"),
        "{text}"
    );
    for (k, name) in [("4", "apolara"), ("3", "disc"), ("4", "disc")] {
        let out = hdisc(&["invariance", "-k", k, "--poly", name, "-n", "50"]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("PASS: 50/50 invariant"));
    }
}

#[test]
fn exit_codes_are_stable() {
    let code = |args: &[&str]| hdisc(args).status.code().unwrap();
    assert_eq!(code(&["generate", "-k", "3", "-p", "3"]), 0);
    assert_eq!(code(&["generate", "-k", "3", "-p", "1"]), 2);
    assert_eq!(code(&["generate", "-k", "3", "-p", "4"]), 2);
    assert_eq!(code(&["generate", "-k", "5", "-p", "2,2"]), 3);
    assert_eq!(code(&["classify", "-k", "3", "-c", "0,0,0,0"]), 2);
    assert_eq!(code(&["classify", "-k", "3", "-c", "1,2"]), 2);
    assert_eq!(code(&["orbit", "-k", "3", "--poly", "unknown name"]), 2);
    assert_eq!(code(&["invariance", "-k", "3", "--poly", "apolara"]), 2);
    assert_eq!(code(&["invariance", "-k", "3", "--poly", "a*d", "-n", "3"]), 4);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["--help"]), 0);

    let err = hdisc(&["generate", "-k", "4", "-p", "2,z"]);
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains('z'));

    let capped = Command::new(env!("CARGO_BIN_EXE_hdisc"))
        .args(["generate", "-k", "4", "-p", "2,2"])
        .env("HD_CAPACITY", "max_degree=3,extended_degree=3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let root_capped = Command::new(env!("CARGO_BIN_EXE_hdisc"))
        .args(["generate", "-k", "5", "-p", "3,2"])
        .env("HD_CAPACITY", "extended_root_degree=30")
        .output()
        .unwrap();
    assert_eq!(root_capped.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["generate", "-k", "4", "-p", "2,2", "--format", "json"][..],
        &["verify", "-k", "4", "-p", "3", "-n", "20", "--seed", "5"][..],
        &["invariance", "-k", "4", "--poly", "apolara", "-n", "10", "--seed", "3"][..],
    ] {
        assert_eq!(hdisc(args).stdout, hdisc(args).stdout);
    }
}
