use std::process::Command;

fn beamplan() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beamplan"))
}

#[test]
fn golden_subcommand_passes() {
    let out = beamplan().arg("golden").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        3,
        "{text}"
    );
}

#[test]
fn eval_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(
        &config,
        r#"{"noise": {"p_wrong_effect": 0.2, "q_inverse": 0.9}}"#,
    )
    .unwrap();
    for (name, jobs) in [("a", "1"), ("b", "3")] {
        let status = beamplan()
            .args([
                "eval",
                "--env",
                "languagetable",
                "--episodes",
                "15",
                "--seed",
                "5",
                "--jobs",
                jobs,
            ])
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(dir.path().join(name))
            .output()
            .unwrap()
            .status;
        assert!(status.success());
    }
    for file in ["episodes.jsonl", "metrics.csv"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn plan_prints_json() {
    let out = beamplan()
        .args(["plan", "--env", "frozenlake", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let plan: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(plan["status"], "complete");
}

#[test]
fn missing_env_is_an_error() {
    let out = beamplan().arg("eval").output().unwrap();
    assert!(!out.status.success());
}
