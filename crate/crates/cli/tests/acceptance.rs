//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};

use satstack::error::integrality_failures;
use satstack::table::{build_table, Family, Source};
use satstack::verify::{self, Bounds, Suite};
use serde_json::Value;

/// Published ELO(n,k): `n`, first listed `k`, then the values for
/// consecutive `k`, then the column sum after `|`.
const TABLE: &str = "
3 1 1 | 1
4 2 2 | 2
5 2 7 | 7
6 2 9 3 | 12
7 2 8 18 | 26
8 2 6 46 5 | 57
9 2 2 73 41 | 116
10 3 82 162 7 | 251
11 3 70 395 80 | 545
12 3 40 666 444 9 | 1159
13 3 10 834 1534 139 | 2517
14 4 799 3667 1026 11 | 5503
15 4 563 6449 4728 222 | 11962
16 4 251 8690 15151 2099 13 | 26204
17 4 50 9146 35820 12362 333 | 57711
18 5 7403 64919 50796 3921 15 | 127054
19 5 4312 92557 154746 28613 476 | 280704
20 5 1570 105168 363026 145817 6827 17 | 622425
21 5 260 94660 673021 553028 60299 655 | 1381923
22 6 65265 1003604 1623141 371629 11239 19 | 3074897
23 6 32109 1214930 3784746 1708309 117960 874 | 6858928
24 6 9875 1191281 7141955 6100976 862174 17676 21 | 15323958
";

type Cells = BTreeMap<(u32, String), String>;

fn published() -> (Cells, Cells) {
    let (mut cells, mut sums) = (Cells::new(), Cells::new());
    for line in TABLE.lines().filter(|l| !l.trim().is_empty()) {
        let (row, sum) = line.split_once('|').expect("row has a sum");
        let mut it = row.split_whitespace().map(|t| t.parse::<u32>().expect("number"));
        let n = it.next().expect("n");
        let k0 = it.next().expect("first k");
        for (i, v) in it.enumerate() {
            cells.insert((n, (k0 + i as u32).to_string()), v.to_string());
        }
        sums.insert((n, "sum".into()), sum.trim().to_string());
    }
    (cells, sums)
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn satstack(threads: usize, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_satstack"))
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .env_remove("SATSTACK_THREADS")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Records every command a criterion runs so it can be replayed at another
/// thread count.
#[derive(Default)]
struct Runner {
    log: Vec<(Vec<String>, String)>,
}

impl Runner {
    fn run(&mut self, args: &[&str]) -> Result<String, String> {
        let r = satstack(1, args);
        self.log.push((args.iter().map(|s| s.to_string()).collect(), r.stdout.clone()));
        if r.code != 0 {
            return Err(format!("`{}` exited {}: {}", args.join(" "), r.code, r.stderr.trim()));
        }
        Ok(r.stdout)
    }

    /// Runs a verify suite and checks the named checks passed with at least
    /// the given number of cases.
    fn suite(&mut self, args: &[&str], expect: &[(&str, u64)]) -> Result<(), String> {
        let text = self.run(args)?;
        let report: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if report["passed"] != Value::Bool(true) {
            return Err(format!("report failed: {text}"));
        }
        let checks = report["checks"].as_array().ok_or("no checks")?;
        for &(name, min) in expect {
            let c = checks
                .iter()
                .find(|c| c["name"] == name)
                .ok_or_else(|| format!("missing check {name:?}"))?;
            let cases = c["cases"].as_u64().unwrap_or(0);
            if cases < min {
                return Err(format!("{name:?} ran {cases} cases, expected at least {min}"));
            }
        }
        Ok(())
    }
}

fn criterion_1(r: &mut Runner) -> Result<(), String> {
    let csv = r.run(&["count", "--family", "extended-saturated", "--n", "3..24"])?;
    let mut got = Cells::new();
    let mut lines = csv.lines();
    if lines.next() != Some("n,k,value") {
        return Err("missing CSV header".into());
    }
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let [n, k, v] = f[..] else { return Err(format!("bad row {line:?}")) };
        got.insert((n.parse().map_err(|_| format!("bad n in {line:?}"))?, k.to_string()), v.to_string());
    }
    let (cells, sums) = published();
    for (key, want) in cells.iter().chain(&sums) {
        match got.get(key) {
            Some(v) if v == want => {}
            other => return Err(format!("cell {key:?}: got {other:?}, published {want}")),
        }
    }
    for (key, v) in &got {
        if key.1 != "sum" && !cells.contains_key(key) && v != "0" {
            return Err(format!("cell {key:?} = {v} is blank in the published table"));
        }
    }
    let json = r.run(&["count", "--family", "extended-saturated", "--n", "3..24", "--format", "json"])?;
    let table: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    for c in table["cells"].as_array().ok_or("no cells")? {
        let (n, k) = (c["n"].as_u64().unwrap_or(0), c["k"].as_u64().unwrap_or(0));
        let want = if n >= 6 && k >= 3 { "formula" } else { "oracle" };
        if c["provenance"] != want || !c["value"].is_string() {
            return Err(format!("cell ({n},{k}) annotated {c}"));
        }
    }
    Ok(())
}

fn criterion_7(r: &mut Runner) -> Result<(), String> {
    r.suite(
        &["verify", "--suite", "bijections", "--max-n", "10"],
        &[
            ("phi_inv(phi(d)) = d on all 2-regular simple stacks", 760),
            ("psi_inv(psi(t)) = t on random labelled trees", 1000),
            ("stf is a bijection onto its image", 1),
            ("worked examples", 7),
        ],
    )?;
    r.suite(
        &["verify", "--suite", "forests", "--max-n", "10", "--mutations", "1000"],
        &[
            ("saturated-forest check holds exactly on images of saturated stacks", 760),
            ("mutated forests are judged by the stacks they decode to", 1000),
            ("eSTF images of saturated extended stacks pass the extended check and invert", 1),
            ("mutated eSTF images are rejected", 1),
        ],
    )?;
    let (simple, extended) = (fixture("simple_stack.json"), fixture("extended_stack.json"));
    let (labels, rest) = (fixture("labelling.json"), fixture("rest_labelling.json"));
    let tree = std::fs::read_to_string(fixture("tree.json")).map_err(|e| e.to_string())?;
    let forest = std::fs::read_to_string(fixture("forest.json")).map_err(|e| e.to_string())?;
    let cases: [(Vec<&str>, &str); 3] = [
        (vec!["bijection", "--map", "phi", "--roundtrip", &simple], &tree),
        (
            vec!["bijection", "--map", "stf", "--roundtrip", "--labelling", &labels, &simple],
            &forest,
        ),
        (
            vec!["bijection", "--map", "estf", "--roundtrip", "--labelling", &rest, &extended],
            &forest,
        ),
    ];
    for (args, want) in cases {
        let got = r.run(&args)?;
        if got != want {
            return Err(format!("`{}` gave {got}", args.join(" ")));
        }
    }
    Ok(())
}

/// Runs every library path of criteria 1 to 7 in this process and checks
/// that no integrality assertion fired.
fn criterion_8() -> Result<(), String> {
    build_table(Family::ExtendedSaturated { m: 2 }, 3..=24, None, Source::Auto).map_err(|e| e.to_string())?;
    let bounds = Bounds {
        max_n: 14,
        ..Bounds::default()
    };
    for suite in Suite::EACH {
        let b = match suite {
            Suite::Components => Bounds { max_n: 12, ..bounds },
            Suite::Bijections | Suite::Forests => Bounds { max_n: 10, ..bounds },
            _ => bounds,
        };
        verify::run(suite, &b);
    }
    match integrality_failures() {
        0 => Ok(()),
        k => Err(format!("{k} integrality assertions fired")),
    }
}

fn criterion_9(log: &[(Vec<String>, String)]) -> Result<(), String> {
    let threads = std::thread::available_parallelism().map_or(4, |p| p.get()).max(4);
    for (args, single) in log {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let many = satstack(threads, &args);
        if many.stdout != *single {
            return Err(format!("`{}` differs at {threads} threads", args.join(" ")));
        }
    }
    if log.is_empty() {
        return Err("no outputs recorded".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut r = Runner::default();
    let results: Vec<(u32, &str, Result<(), String>)> = vec![
        (1, "published ELO table and column sums", criterion_1(&mut r)),
        (
            2,
            "elo formula equals the extended oracle for 6 <= n <= 14",
            r.suite(&["verify", "--suite", "elo", "--max-n", "14"], &[("elo formula equals oracle count", 25)]),
        ),
        (
            3,
            "rs_coeff equals the plain oracle for m in 2..=4, n <= 14",
            r.suite(
                &["verify", "--suite", "plain", "--max-n", "14"],
                &[
                    ("rs_coeff equals oracle count for n >= m-1", 180),
                    ("rs2 and rs3 equal rs_coeff", 2 * 256),
                ],
            ),
        ),
        (
            4,
            "saturation hierarchy polynomials up to n = 60",
            r.suite(
                &["verify", "--suite", "hierarchy", "--max-n", "14"],
                &[
                    ("lo_sat equals the closed polynomials", 170),
                    ("elo_sat equals the closed polynomials", 160),
                    ("published seed values", 100),
                ],
            ),
        ),
        (
            5,
            "partition formula equals the partition oracle",
            r.suite(&["verify", "--suite", "partitions", "--max-l", "6"], &[("c_formula equals partition count", 500)]),
        ),
        (
            6,
            "component decomposition and per-class counts",
            r.suite(
                &["verify", "--suite", "components", "--max-n", "12"],
                &[
                    ("component sum equals direct formula", 324),
                    ("s_i equals oracle count per primary class", 300),
                ],
            ),
        ),
        (7, "bijections, worked examples and forest checkers", criterion_7(&mut r)),
        (8, "no integrality assertion fires", criterion_8()),
    ];
    let c9 = criterion_9(&r.log);
    let mut failed = false;
    for (id, title, res) in results.into_iter().chain([(9, "byte-identical output at 1 and N threads", c9)]) {
        match res {
            Ok(()) => println!("criterion {id}: PASS {title}"),
            Err(e) => {
                failed = true;
                println!("criterion {id}: FAIL {title}: {e}");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
