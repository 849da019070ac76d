use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use passflow_core::analysis::prepare;
use passflow_core::match_data::{build_dictionary, parse_match, TeamId};
use passflow_core::seqmine::{phase_sequences, SequenceMode};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn passflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_passflow"))
        .args(args)
        .env_remove("PASSFLOW_PORT")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_for_every_subcommand() {
    for sub in ["ingest", "detect", "mine", "export", "serve"] {
        let out = passflow(&[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
    }
    let serve = String::from_utf8_lossy(&passflow(&["serve", "--help"]).stdout).into_owned();
    for var in [
        "PASSFLOW_PORT",
        "PASSFLOW_DATA_DIR",
        "PASSFLOW_DEFAULT_K",
        "PASSFLOW_DEFAULT_SEED",
    ] {
        assert!(serve.contains(var), "{var}");
    }
    assert_eq!(code(&passflow(&["--help"])), 0);
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.json");
    assert_eq!(code(&passflow(&[])), 2);
    assert_eq!(code(&passflow(&["frobnicate"])), 2);
    assert_eq!(code(&passflow(&["detect", p(&fixture("minimal.json"))])), 2);
    assert_eq!(
        code(&passflow(&[
            "detect",
            p(&fixture("minimal.json")),
            "--k",
            "three",
            "-o",
            p(&out)
        ])),
        2
    );
    let missing = passflow(&["detect", "/no/such/match.json", "-o", p(&out)]);
    assert_eq!(code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("does not exist"));
    let no_dir = dir.path().join("nowhere").join("m.json");
    assert_eq!(
        code(&passflow(&[
            "detect",
            p(&fixture("minimal.json")),
            "-o",
            p(&no_dir)
        ])),
        2
    );
    assert_eq!(
        code(&passflow(&[
            "export",
            p(&fixture("minimal.json")),
            "--output-dir",
            p(&dir.path().join("x"))
        ])),
        2
    );
}

#[test]
fn domain_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"match_id": "x", "teams": 3}"#).unwrap();
    let out = dir.path().join("m.json");
    let r = passflow(&["detect", p(&bad), "-o", p(&out)]);
    assert_eq!(code(&r), 1);
    assert!(String::from_utf8_lossy(&r.stderr).contains("teams"));

    let tracked = fixture("grouped-tracked.json");
    assert_eq!(
        code(&passflow(&[
            "detect",
            p(&tracked),
            "--k",
            "0",
            "-o",
            p(&out)
        ])),
        1
    );
    assert_eq!(
        code(&passflow(&[
            "detect",
            p(&tracked),
            "--team",
            "Z",
            "-o",
            p(&out)
        ])),
        1
    );
    assert_eq!(
        code(&passflow(&[
            "mine",
            p(&tracked),
            "--min-support",
            "0",
            "-o",
            p(&out)
        ])),
        1
    );
    assert!(!out.exists());
}

#[test]
fn detect_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let input = fixture("grouped-tracked.json");
    for out in [&a, &b] {
        let r = passflow(&["detect", p(&input), "--k", "3", "--seed", "7", "-o", p(out)]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["k"], 3);
    assert_eq!(v["seed"], 7);

    let c = dir.path().join("c.json");
    passflow(&["detect", p(&input), "--k", "3", "--seed", "8", "-o", p(&c)]);
    assert_ne!(std::fs::read(&c).unwrap(), x);
}

/// Support by direct subsequence test.
fn support(seqs: &[Vec<String>], pattern: &[String]) -> usize {
    seqs.iter()
        .filter(|s| {
            let mut it = s.iter();
            pattern.iter().all(|t| it.any(|x| x == t))
        })
        .count()
}

#[test]
fn mine_output_matches_direct_counts() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("seq.csv");
    let input = fixture("grouped-events-only.json");
    let r = passflow(&[
        "mine",
        p(&input),
        "--min-support",
        "2",
        "--max-len",
        "3",
        "-o",
        p(&out),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));

    let record = parse_match(&std::fs::read(&input).unwrap()).unwrap();
    let a = TeamId::new("A");
    let record = prepare(&record, &a, None).unwrap();
    let dict = build_dictionary(&record.team(&a).unwrap().player_ids()).unwrap();
    let (seqs, labels) =
        phase_sequences(&record, &record.phases, &a, &dict, SequenceMode::Player).unwrap();
    let seqs: Vec<Vec<String>> = seqs
        .iter()
        .map(|s| s.iter().map(|&t| labels[t].clone()).collect())
        .collect();

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tokens,support,length"));
    let mut emitted = std::collections::BTreeSet::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let tokens: Vec<String> = cols[0].split(' ').map(str::to_string).collect();
        let s: usize = cols[1].parse().unwrap();
        assert_eq!(cols[2].parse::<usize>().unwrap(), tokens.len());
        assert_eq!(support(&seqs, &tokens), s, "{line}");
        assert!(s >= 2);
        emitted.insert(tokens);
    }
    // Completeness up to length 2 by enumeration over the alphabet.
    for x in &labels {
        let single = vec![x.clone()];
        assert_eq!(emitted.contains(&single), support(&seqs, &single) >= 2);
        for y in &labels {
            let pair = vec![x.clone(), y.clone()];
            assert_eq!(
                emitted.contains(&pair),
                support(&seqs, &pair) >= 2,
                "{pair:?}"
            );
        }
    }

    let roles = dir.path().join("roles.csv");
    assert_eq!(
        code(&passflow(&[
            "mine",
            p(&input),
            "--mode",
            "role",
            "-o",
            p(&roles)
        ])),
        0
    );
    let text = std::fs::read_to_string(&roles).unwrap();
    for line in text.lines().skip(1) {
        let tokens = line.split(',').next().unwrap();
        assert!(tokens
            .split(' ')
            .all(|t| ["guard", "midfielder", "forward"].contains(&t)));
    }
}

#[test]
fn ingest_normalizes_and_is_stable() {
    let dir = TempDir::new().unwrap();
    let (once, twice) = (dir.path().join("once.json"), dir.path().join("twice.json"));
    let input = fixture("grouped-tracked.json");
    let r = passflow(&["ingest", p(&input), "--team", "B", "-o", p(&once)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(summary["team"], "B");
    assert!(summary["phases"].as_u64().unwrap() > 0);

    let normalized = parse_match(&std::fs::read(&once).unwrap()).unwrap();
    let b = normalized.team(&TeamId::new("B")).unwrap();
    assert!(b
        .attack_direction_by_half
        .values()
        .all(|d| *d == passflow_core::match_data::AttackDirection::LeftToRight));

    assert_eq!(
        code(&passflow(&[
            "ingest",
            p(&once),
            "--team",
            "B",
            "-o",
            p(&twice)
        ])),
        0
    );
    assert_eq!(
        std::fs::read(&once).unwrap(),
        std::fs::read(&twice).unwrap()
    );
}

#[test]
fn export_writes_tables() {
    let dir = TempDir::new().unwrap();
    let input = fixture("grouped-tracked.json");
    let r = passflow(&[
        "export",
        p(&input),
        "--k",
        "3",
        "--seed",
        "7",
        "--output-dir",
        p(dir.path()),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    for f in [
        "model.json",
        "flow.json",
        "patterns.json",
        "flow.csv",
        "patterns.csv",
        "metrics.csv",
    ] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let flow: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("flow.json")).unwrap()).unwrap();
    let flow_csv = std::fs::read_to_string(dir.path().join("flow.csv")).unwrap();
    assert_eq!(flow_csv.lines().count(), flow.as_array().unwrap().len() + 1);
    let patterns_csv = std::fs::read_to_string(dir.path().join("patterns.csv")).unwrap();
    assert_eq!(patterns_csv.lines().count(), 1 + 4);
    let metrics_csv = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert!(metrics_csv
        .lines()
        .skip(1)
        .all(|l| !l.split(',').nth(3).unwrap().is_empty()));

    // Reusing the written model reproduces the same tables.
    let again = TempDir::new().unwrap();
    let model = dir.path().join("model.json");
    let r = passflow(&[
        "export",
        p(&input),
        "--model",
        p(&model),
        "--output-dir",
        p(again.path()),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    for f in ["model.json", "flow.csv", "patterns.csv", "metrics.csv"] {
        assert_eq!(
            std::fs::read(dir.path().join(f)).unwrap(),
            std::fs::read(again.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

fn http(port: u16, method: &str, path: &str, body: &[u8]) -> (u16, String) {
    let mut s = TcpStream::connect(("127.0.0.1", port)).unwrap();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    )
    .unwrap();
    s.write_all(body).unwrap();
    let mut resp = String::new();
    s.read_to_string(&mut resp).unwrap();
    let status = resp[9..12].parse().unwrap();
    (status, resp)
}

#[test]
fn serve_answers_over_tcp() {
    let dir = TempDir::new().unwrap();
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_passflow"))
        .args(["serve", "--data-dir", p(dir.path()), "--log", "warn"])
        .env("PASSFLOW_PORT", port.to_string())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(20);
    while TcpStream::connect(("127.0.0.1", port)).is_err() {
        assert!(Instant::now() < deadline, "server did not start");
        std::thread::sleep(Duration::from_millis(50));
    }
    let body = std::fs::read(fixture("minimal.json")).unwrap();
    let (status, _) = http(port, "POST", "/matches", &body);
    assert_eq!(status, 201);
    let (status, resp) = http(port, "GET", "/matches/synthetic", b"");
    assert_eq!(status, 200);
    assert!(resp.contains("\"phase_count\""));
    let (status, _) = http(port, "GET", "/matches/unknown", b"");
    assert_eq!(status, 404);
    child.kill().unwrap();
    child.wait().unwrap();
}
