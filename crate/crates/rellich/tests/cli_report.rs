use std::process::{Command, Output};

use rellich::cli::{to_json, CoeffsReport, ConstantsReport, TransformCheckReport};
use rellich::exact::GapReport;
use rellich::harness::HarnessReport;
use rellich::minimizer::RefinementStudy;
use rellich::quadrature::SweepReport;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rellich")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

/// Parses the JSON output as `T`, re-serializes it and demands identical bytes.
fn assert_round_trip<T: Serialize + DeserializeOwned>(args: &[&str]) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let value: T = serde_json::from_str(&text).expect("parses");
    assert_eq!(to_json(&value).unwrap(), text, "{args:?}");
}

#[test]
fn json_round_trips_byte_identically() {
    assert_round_trip::<ConstantsReport>(&["constants", "--N", "8", "--k", "4", "--gamma", "5", "--p", "3/2"]);
    assert_round_trip::<CoeffsReport>(&["coeffs", "--N", "9", "--m", "3"]);
    assert_round_trip::<SweepReport>(&["sweep", "--N", "4", "--k", "2", "--family", "psi", "--gamma", "4"]);
    assert_round_trip::<HarnessReport>(&["harness", "--cases", "3", "--only", "gh,musina"]);
    assert_round_trip::<RefinementStudy>(&["minimize", "--N", "4", "--k", "2", "--gamma", "3", "--levels", "3"]);
    assert_round_trip::<TransformCheckReport>(&["transform-check", "--cases", "3"]);
    assert_round_trip::<GapReport>(&["gap", "--m", "3"]);
}

#[test]
fn json_keys_are_sorted() {
    let o = run(&["gap", "--format", "json"]);
    let text = stdout(&o);
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert!(top.len() > 3);
    assert_eq!(top, sorted);
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 7] = [
        (&["constants", "--N", "8", "--k", "4"], "name,exact,decimal,value,note"),
        (&["coeffs", "--N", "8", "--m", "2"], "kind,l,j,value"),
        (&["sweep", "--N", "4", "--k", "2"], "epsilon,"),
        (&["harness", "--cases", "2", "--only", "gh"], "inequality,"),
        (
            &["minimize", "--N", "4", "--k", "2", "--levels", "3"],
            "level,n_dof,t_min,t_max,knots_per_octave,value,second_value,residual,iterations,outer_fraction,inner_fraction,indicator",
        ),
        (&["transform-check", "--cases", "2"], "case,N,p,alpha,beta,"),
        (&["gap"], "chain,step,inequality,factor,running_product"),
    ];
    for (args, header) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let text = stdout(&o);
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(header), "{args:?}: {first}");
        let cols = first.split(',').count();
        assert!(cols >= 2);
    }
}

#[test]
fn constants_match_known_values() {
    let text = stdout(&run(&["constants", "--N", "8", "--k", "4"]));
    assert!(text.contains("24/1^(2/1),576.000000"), "{text}");
    let text = stdout(&run(&["constants", "--N", "4", "--k", "2", "--gamma", "4"]));
    assert!(text.contains("3/4^(2/1),0.562500000"), "{text}");
    let text = stdout(&run(&["gap"]));
    assert!(text.contains("A_squared=100,R_rad=576"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["harness", "--cases", "2"]).status.code(), Some(0));
    assert_eq!(run(&["transform-check"]).status.code(), Some(0));
    // a coarse quadrature tolerance breaks the 1e-8 identity threshold
    assert_eq!(run(&["transform-check", "--tol", "0.3"]).status.code(), Some(1));
    assert_eq!(run(&["constants", "--N", "4", "--k", "2", "--gamma", "x"]).status.code(), Some(2));
    assert_eq!(run(&["minimize", "--N", "4", "--k", "2", "--gamma", "6"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--N", "1", "--m", "2"]).status.code(), Some(2));
    assert_ne!(run(&["sweep"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("rellich-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gap.json");
    let o = run(&["gap", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&run(&["gap", "--format", "json"])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_documents_defaults() {
    let text = stdout(&run(&["--help"]));
    for needle in ["R = 1", "a = 1", "tol = 1e-10", "seed = 42"] {
        assert!(text.contains(needle), "{needle}");
    }
    for sub in ["constants", "coeffs", "sweep", "harness", "minimize", "transform-check", "gap"] {
        assert!(text.contains(sub), "{sub}");
    }
}
