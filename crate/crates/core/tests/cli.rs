use serde_json::Value;

use tomo_core::cli::run_from_args;
use tomo_core::{canonicalize, BinaryImage};

const WORKED: &str = r#"{"rows":[5,5,5,4,4,2,1,1],"cols":[6,6,6,3,3,3]}"#;

fn tomo(args: &[&str], stdin: &str) -> (i32, String, String) {
    let argv = std::iter::once("tomo").chain(args.iter().copied());
    run_from_args(argv, &mut stdin.as_bytes())
}

#[test]
fn alpha_on_worked_example() {
    let (code, out, _) = tomo(&["alpha", "--json", WORKED], "");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "alpha = 4\nV = (8, 6, 5, 5, 3, 0)\nC = (6, 6, 6, 3, 3, 3)\n"
    );
    let (_, out, _) = tomo(&["alpha", "--format", "json"], WORKED);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["alpha"], 4);
    assert_eq!(v["v"], serde_json::json!([8, 6, 5, 5, 3, 0]));
}

#[test]
fn pairs_json_lists_groups() {
    let (code, out, _) = tomo(&["pairs", "--format", "json", "--json", WORKED], "");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let groups: Vec<(u64, u64, u64, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|g| {
            (
                g["source"].as_u64().unwrap(),
                g["target"].as_u64().unwrap(),
                g["multiplicity"].as_u64().unwrap(),
                g["final"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(groups, vec![(1, 3, 1, 3), (1, 6, 1, 1), (4, 6, 2, 6)]);
}

#[test]
fn diverge_reports_guarantee() {
    let (code, out, _) = tomo(&["diverge", "--format", "json", "--json", WORKED], "");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["alpha"], 4);
    assert_eq!(v["guarantee"], 10);
    assert!(v["diff_size"].as_u64().unwrap() >= 10);
    let p = canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3]);
    for key in ["f2", "f3"] {
        let img: BinaryImage = serde_json::from_value(v[key].clone()).unwrap();
        assert!(p.is_solution(&img));
    }
    assert_eq!(v["trace"]["f3_batches"].as_array().unwrap().len(), 3);

    let (_, text, _) = tomo(&["diverge", "--json", WORKED], "");
    assert!(text.starts_with("alpha = 4\nguarantee = 10\nsymmetric difference = "));
}

#[test]
fn diverge_reports_in_caller_order() {
    let raw = r#"{"rows":[0,1,1],"cols":[1,0,1]}"#;
    let (code, out, _) = tomo(&["diverge", "--format", "json", "--json", raw], "");
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["diff_size"], 4);
    for key in ["f2", "f3"] {
        let img: BinaryImage = serde_json::from_value(v[key].clone()).unwrap();
        assert_eq!(img.row_sums(), vec![0, 1, 1]);
        assert_eq!(img.col_sums(), vec![1, 0, 1]);
    }
}

#[test]
fn domain_errors_exit_one() {
    let (code, out, err) = tomo(&["diverge", "--json", r#"{"rows":[2,1],"cols":[2,1]}"#], "");
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("line sums determine a unique image"));
    let (code, _, err) = tomo(&["diverge", "--json", r#"{"rows":[2],"cols":[1]}"#], "");
    assert_eq!(code, 1);
    assert!(err.contains("inconsistent"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(tomo(&["alpha", "--json", "{not json"], "").0, 2);
    assert_eq!(
        tomo(&["alpha", "--json", r#"{"rows":[-1],"cols":[1]}"#], "").0,
        2
    );
    assert_eq!(
        tomo(&["alpha", "--input", "/nonexistent/profile.json"], "").0,
        2
    );
    assert_eq!(tomo(&["frobnicate"], "").0, 2);
    assert_eq!(tomo(&["render"], "#x\n").0, 2);
}

#[test]
fn check_reports_verdict() {
    assert_eq!(tomo(&["check", "--json", WORKED], "").1, "consistent\n");
    let (code, out, _) = tomo(&["check", "--json", r#"{"rows":[2,2],"cols":[3,1]}"#], "");
    assert_eq!((code, out.as_str()), (0, "inconsistent\n"));
}

#[test]
fn neighbour_renders_left_justified() {
    let (_, out, _) = tomo(
        &["neighbour", "--json", r#"{"rows":[1,3],"cols":[1,1,2]}"#],
        "",
    );
    // canonical row/column order mapped back: the tallest column is original column 3
    assert_eq!(out, "..#\n###\n");
    let (_, pbm, _) = tomo(
        &[
            "neighbour",
            "--format",
            "pbm",
            "--json",
            r#"{"rows":[3,1],"cols":[2,1,1]}"#,
        ],
        "",
    );
    assert_eq!(pbm, "P1\n3 2\n1 1 1\n1 0 0\n");
}

#[test]
fn render_converts_and_round_trips() {
    let (code, pbm, _) = tomo(&["render"], "##.\n..#\n");
    assert_eq!(code, 0);
    assert_eq!(pbm, "P1\n3 2\n1 1 0\n0 0 1\n");
    let (_, text, _) = tomo(&["render", "--format", "text"], &pbm);
    assert_eq!(text, "##.\n..#\n");
}

#[test]
fn generate_feeds_other_commands() {
    let (code, profile, _) = tomo(&["generate", "sharp", "4"], "");
    assert_eq!(code, 0);
    assert_eq!(profile, "{\"rows\":[1,1,1,1,1],\"cols\":[1,1,1,1,1]}\n");
    assert!(tomo(&["alpha"], &profile).1.starts_with("alpha = 4\n"));
    let (_, json, _) = tomo(&["generate", "uniform", "4", "2", "--format", "json"], "");
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["predicted_alpha"], 4);
    assert_eq!(v["predicted_max_symdiff"], 16);
    assert_eq!(tomo(&["generate", "uniform", "4", "3"], "").0, 1);
}

#[test]
fn enumerate_and_verify() {
    let p = canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3]);
    let count = tomo_core::enumerate_solutions(&p, 100_000)
        .unwrap()
        .solutions
        .len();
    let (code, out, _) = tomo(&["enumerate", "--format", "json", "--json", WORKED], "");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["solution_count"].as_u64().unwrap() as usize, count);
    assert!(v["max_pairwise_symdiff"].as_u64().unwrap() >= 10);

    let (code, out, _) = tomo(&["verify", "--json", WORKED], "");
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches(" ok").count(), 5);

    let (code, _, err) = tomo(&["verify", "--cap", "10", "--json", WORKED], "");
    assert_eq!(code, 1);
    assert!(err.contains("truncated"));
}

#[test]
fn input_file_and_seeded_determinism() {
    let path = std::env::temp_dir().join(format!("tomo-cli-{}.json", std::process::id()));
    std::fs::write(&path, WORKED).unwrap();
    let file = path.to_str().unwrap();
    let a = tomo(
        &[
            "diverge", "--input", file, "--seed", "9", "--format", "json",
        ],
        "",
    );
    let b = tomo(
        &[
            "diverge", "--input", file, "--seed", "9", "--format", "json",
        ],
        "",
    );
    std::fs::remove_file(&path).unwrap();
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}
