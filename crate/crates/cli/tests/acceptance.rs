//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;
use subdivide::relcheck::perturbation_controls;
use subdivide::shell::Convention;
use subdivide::simplexmaps::CenterFamily;
use subdivide_cli::census::run_census;
use subdivide_cli::degrees::{run_degrees, DegreesOptions};
use subdivide_cli::homotopy::{run_homotopy, ConventionChoice, HomotopyOptions};
use subdivide_cli::relations::{run_relations, RelationsOptions};
use subdivide_cli::shell::run_shell;
use subdivide_cli::Outcome;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(name)
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.json).expect("reports are valid JSON")
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Collects failures of one criterion; a criterion passes when none occur.
#[derive(Default)]
struct Check {
    problems: Vec<String>,
}

impl Check {
    fn ensure(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.problems.push(what.into());
        }
    }
}

/// One CLI invocation replayed through the binary for the determinism check.
struct Recorded {
    args: Vec<String>,
    json: String,
}

struct Suite {
    recorded: Vec<Recorded>,
    results: Vec<bool>,
}

impl Suite {
    fn record(&mut self, args: &[&str], outcome: &Outcome) {
        self.recorded.push(Recorded {
            args: args.iter().map(|s| s.to_string()).collect(),
            json: outcome.json.clone(),
        });
    }

    fn criterion(
        &mut self,
        id: usize,
        name: &str,
        limit: Option<Duration>,
        body: impl FnOnce(&mut Suite, &mut Check),
    ) {
        let start = Instant::now();
        let mut check = Check::default();
        body(self, &mut check);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            check.ensure(
                elapsed <= limit,
                format!("took {elapsed:.1?}, limit {limit:?}"),
            );
        }
        let ok = check.problems.is_empty();
        let detail = if ok {
            String::new()
        } else {
            format!(" :: {}", check.problems.join("; "))
        };
        println!(
            "criterion {id} [{name}]: {} ({elapsed:.2?}){detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        self.results.push(ok);
    }
}

fn relation_suite(suite: &mut Suite, c: &mut Check) {
    let opts = RelationsOptions {
        max_n: 4,
        ..Default::default()
    };
    let out = run_relations(&opts).unwrap();
    suite.record(&["relations", "--max-n", "4"], &out);
    let r = json(&out);
    c.ensure(
        out.passed && r["summary"]["failures"] == 0,
        "relations failed at n <= 4",
    );
    for section in ["subdivision", "patience"] {
        for n in 1..=4 {
            let at_n = r[section]
                .as_array()
                .unwrap()
                .iter()
                .filter(|x| x["n"] == n)
                .count();
            c.ensure(at_n > 0, format!("no {section} instances at n = {n}"));
        }
    }

    let corrupted = run_relations(&RelationsOptions {
        max_n: 2,
        corrupt_center: true,
        ..Default::default()
    })
    .unwrap();
    suite.record(
        &["relations", "--max-n", "2", "--corrupt-center"],
        &corrupted,
    );
    c.ensure(
        !corrupted.passed && json(&corrupted)["summary"]["failures"].as_u64() >= Some(1),
        "corrupted center not caught",
    );

    let perturbed = run_relations(&RelationsOptions {
        max_n: 2,
        perturb_entry: Some((1, 1)),
        ..Default::default()
    })
    .unwrap();
    suite.record(
        &["relations", "--max-n", "2", "--perturb-entry", "1,1"],
        &perturbed,
    );
    c.ensure(!perturbed.passed, "perturbed entry not caught");

    let controls = perturbation_controls(2, &CenterFamily::symbolic(2));
    let silent = controls.iter().filter(|ctl| ctl.failures == 0).count();
    c.ensure(
        silent == 0,
        format!(
            "{silent} of {} single-entry perturbations went unnoticed",
            controls.len()
        ),
    );
}

fn telescoping(suite: &mut Suite, c: &mut Check) {
    let out = run_homotopy(&HomotopyOptions::default()).unwrap();
    suite.record(&["homotopy", "--max-s", "3"], &out);
    let r = json(&out);
    c.ensure(out.passed, "telescoping failed");
    c.ensure(
        r["search"]["common"].as_array().map(Vec::len) == Some(1),
        "convention is not unique",
    );
    c.ensure(
        r["convention"] == serde_json::json!({"epsilon": 1, "lambda": 1}),
        "unexpected convention",
    );
    for s in 1..=3usize {
        let working = &r["search"]["working"][s][1];
        c.ensure(
            working.as_array().map(Vec::len) == Some(1),
            format!("s = {s}: not exactly one convention"),
        );
        let level = &r["levels"][s];
        let homotopy_maps: usize = (0..=s).map(|k| factorial(k + 1)).sum();
        let lower_maps: usize = (0..s).map(|k| factorial(k + 1)).sum();
        c.ensure(
            level["d_h_terms"] == (s + 2) * homotopy_maps,
            format!("s = {s}: d∘H term count"),
        );
        c.ensure(
            level["h_d_terms"] == (s + 1) * lower_maps,
            format!("s = {s}: H∘d term count"),
        );
        c.ensure(
            level["residual_terms"]
                .as_array()
                .is_some_and(Vec::is_empty),
            format!("s = {s}: residual"),
        );
        let spec = &r["specialization"][s];
        c.ensure(
            spec["q"] == 11 && spec["degree_bound"] == 3,
            "specialization parameters",
        );
        c.ensure(
            spec["residual_zero"] == true && spec["commutes"] == true,
            format!("s = {s}: specialization"),
        );
    }

    let wrong = HomotopyOptions {
        convention: ConventionChoice::Fixed(Convention {
            epsilon: -1,
            lambda: 1,
        }),
        ..HomotopyOptions::default()
    };
    let out = run_homotopy(&wrong).unwrap();
    suite.record(&["homotopy", "--max-s", "3", "--convention=-1,1"], &out);
    let residual = json(&out)["levels"][1]["residual_terms"]
        .as_array()
        .map_or(0, Vec::len);
    c.ensure(
        !out.passed && residual > 0,
        "wrong sign convention telescoped",
    );
}

fn counting_facts(suite: &mut Suite, c: &mut Check) {
    let out = run_relations(&RelationsOptions {
        max_n: 3,
        ..Default::default()
    })
    .unwrap();
    suite.record(&["relations", "--max-n", "3"], &out);
    let counts = json(&out)["counts"].clone();
    for n in 0..=3usize {
        let homotopy: usize = (0..=n).map(|k| factorial(k + 1)).sum();
        c.ensure(
            counts[n]["subdivision_maps"] == factorial(n + 1),
            format!("subdivision count at n = {n}"),
        );
        c.ensure(
            counts[n]["homotopy_maps"] == homotopy,
            format!("homotopy count at n = {n}"),
        );
    }
    c.ensure(
        counts[2]["subdivision_maps"] == 6,
        "6 subdivision maps at n = 2",
    );
    c.ensure(
        counts[3]["subdivision_maps"] == 24,
        "24 subdivision maps at n = 3",
    );
    c.ensure(counts[2]["homotopy_maps"] == 9, "9 homotopy maps at n = 2");
}

fn degree_bounds(suite: &mut Suite, c: &mut Check) {
    for n in 0..=3usize {
        for bound in [n as u32 + 1, n as u32 + 2] {
            let opts = DegreesOptions {
                n,
                degree_bound: bound,
                m: 2,
                seed: 7,
                inject_t_degree: false,
            };
            let out = run_degrees(&opts).unwrap();
            let (ns, bs) = (n.to_string(), bound.to_string());
            suite.record(
                &[
                    "degrees",
                    "--n",
                    &ns,
                    "--degree-bound",
                    &bs,
                    "--m",
                    "2",
                    "--seed",
                    "7",
                ],
                &out,
            );
            let r = json(&out);
            c.ensure(
                out.passed && r["report"]["violations"] == 0,
                format!("violations at n = {n}, N = {bound}"),
            );
            let entries = r["report"]["entries"].as_array().unwrap();
            let expected: usize =
                factorial(n + 1) + (0..=n).map(|k| factorial(k + 1)).sum::<usize>();
            c.ensure(entries.len() == expected, format!("entry count at n = {n}"));
            for e in entries {
                let t = &e["chart_t_degree"];
                c.ensure(
                    *t == 1 || (n == 0 && *t == "-inf"),
                    format!("T-degree {t} at n = {n}"),
                );
                c.ensure(
                    e["chart_x_degree"]
                        .as_u64()
                        .is_none_or(|d| d <= bound as u64),
                    "X-degree above N",
                );
                if e["kind"] == "subdivision" {
                    c.ensure(
                        e["upper_triangular"] == true,
                        "subdivision chart not upper triangular",
                    );
                } else {
                    c.ensure(e["unit_column_ok"] == true, "homotopy unit column");
                    c.ensure(e["identity_block_ok"] == true, "homotopy identity block");
                }
            }
        }
    }
    let injected = DegreesOptions {
        n: 2,
        degree_bound: 3,
        m: 2,
        seed: 7,
        inject_t_degree: true,
    };
    let out = run_degrees(&injected).unwrap();
    suite.record(
        &[
            "degrees",
            "--n",
            "2",
            "--degree-bound",
            "3",
            "--m",
            "2",
            "--seed",
            "7",
            "--inject-t-degree",
        ],
        &out,
    );
    c.ensure(!out.passed, "injected T-degree not flagged");
}

fn shell_homology(suite: &mut Suite, c: &mut Check) {
    for n in 0..=6usize {
        let out = run_shell(n).unwrap();
        let ns = n.to_string();
        suite.record(&["shell", "--n", &ns], &out);
        let r = json(&out);
        c.ensure(
            out.passed && r["chain_map"] == true && r["d_squared_zero"] == true,
            format!("shell at n = {n}"),
        );
        let ranks: Vec<i64> = r["ranks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_i64().unwrap())
            .collect();
        let expected: Vec<i64> = (0..=n).map(|s| binomial(n + 1, s + 1)).collect();
        c.ensure(ranks == expected, format!("ranks at n = {n}"));
        let h = r["shell_homology"].as_array().unwrap();
        c.ensure(
            h[0] == serde_json::json!({"rank": 1, "torsion": []}),
            format!("H_0 at n = {n}"),
        );
        for s in 1..n {
            c.ensure(
                h[s] == serde_json::json!({"rank": 0, "torsion": []}),
                format!("H_{s} at n = {n}"),
            );
        }
        // Euler characteristic of the chains equals that of the homology.
        let chi_chains: i64 = ranks
            .iter()
            .enumerate()
            .map(|(s, r)| if s % 2 == 0 { *r } else { -r })
            .sum();
        let chi_homology: i64 = h
            .iter()
            .enumerate()
            .map(|(s, g)| g["rank"].as_i64().unwrap() * if s % 2 == 0 { 1 } else { -1 })
            .sum();
        c.ensure(
            chi_chains == chi_homology,
            format!("Euler characteristic at n = {n}"),
        );
    }
}

fn vanishing(suite: &mut Suite, c: &mut Check) {
    // 9 candidates c_0 + c_1 X over F_3; bound 9 · 3^{-2} = 1.
    for (file, expected) in [
        ("vanishing_parabola.json", 0),
        ("vanishing_diagonal.json", 1),
    ] {
        let path = instance(file);
        let out = run_census(&path, None).unwrap();
        suite.record(&["census", "--config", path.to_str().unwrap()], &out);
        let r = &json(&out)["result"];
        c.ensure(out.passed, format!("{file}: assertions"));
        c.ensure(
            r["candidates"] == 9 && r["bound"] == 1,
            format!("{file}: candidates/bound"),
        );
        c.ensure(
            r["count"] == expected,
            format!("{file}: count {} != {expected}", r["count"]),
        );
        c.ensure(r["within_bound"] == true, format!("{file}: bound exceeded"));
    }
}

/// Bad centers of `V = {t_0 = t_1}` found by brute force over `c = c0 + c1 X`:
/// σ = id pulls back to `1 - 2 t_1 + 2 t_1 c`, σ = (01) to `2 t_1 c - 1`; a
/// center is bad when some `t_1` makes the equation vanish for every `X`.
fn brute_force_bad(q: u64) -> (u64, u64) {
    let (mut bad_id, mut joint) = (0, 0);
    for c0 in 0..q {
        for c1 in 0..q {
            let c = |x: u64| (c0 + c1 * x) % q;
            let whole_line =
                |f: &dyn Fn(u64, u64) -> u64| (0..q).any(|t| (0..q).all(|x| f(t, x) == 0));
            let id = whole_line(&|t, x| (1 + 2 * (q - 1) * t + 2 * t * c(x)) % q);
            let swap = whole_line(&|t, x| (2 * t * c(x) + q - 1) % q);
            bad_id += id as u64;
            joint += (id || swap) as u64;
        }
    }
    (bad_id, joint)
}

fn bad_center_census(suite: &mut Suite, c: &mut Check) {
    let mut previous = f64::INFINITY;
    for q in [5u64, 7, 11] {
        let start = Instant::now();
        let path = instance(&format!("diagonal_q{q}.json"));
        let out = run_census(&path, None).unwrap();
        suite.record(&["census", "--config", path.to_str().unwrap()], &out);
        let r = &json(&out)["result"];
        let (bad_id, joint) = brute_force_bad(q);
        let total = q * q;
        c.ensure(
            bad_id == q - 1 && joint == q,
            format!("q = {q}: oracle disagrees with the closed form"),
        );
        c.ensure(out.passed, format!("q = {q}: config assertions"));
        c.ensure(
            r["centers_checked"] == total,
            format!("q = {q}: exhaustive"),
        );
        c.ensure(
            r["per_sigma"][0]["bad_fraction"] == format!("{bad_id}/{total}"),
            format!("q = {q}: σ = id"),
        );
        c.ensure(
            r["joint_bad_fraction"] == format!("{joint}/{total}"),
            format!("q = {q}: joint"),
        );
        c.ensure(
            r["joint_unstable"] == 0,
            format!("q = {q}: unstable estimates"),
        );
        let fraction = bad_id as f64 / total as f64;
        c.ensure(
            fraction <= previous && fraction <= 1.0 / q as f64,
            format!("q = {q}: not monotone"),
        );
        previous = fraction;
        c.ensure(
            start.elapsed() < Duration::from_secs(60),
            format!("q = {q}: over a minute"),
        );
    }
}

fn dimension_oracle(suite: &mut Suite, c: &mut Check) {
    let path = instance("dimension_oracle.json");
    let out = run_census(&path, None).unwrap();
    suite.record(&["census", "--config", path.to_str().unwrap()], &out);
    let r = json(&out);
    let entries = r["result"].as_array().unwrap();
    c.ensure(entries.len() >= 20, "fewer than 20 instances");
    for e in entries {
        let name = e["name"].as_str().unwrap_or("?");
        c.ensure(e["estimate"]["stable"] == true, format!("{name}: unstable"));
        c.ensure(
            e["estimate"]["estimate"] == e["expected"],
            format!("{name}: misclassified"),
        );
        c.ensure(
            e["variety"]["p"].as_u64() >= Some(5),
            format!("{name}: q < 5"),
        );
        c.ensure(
            e["estimate"]["counts"].as_array().map(Vec::len) == Some(3),
            format!("{name}: E != 3"),
        );
    }
    c.ensure(out.passed, "oracle assertions");
}

fn determinism(suite: &mut Suite, c: &mut Check) {
    let bin = env!("CARGO_BIN_EXE_subdivide");
    let dir = tempfile::tempdir().unwrap();
    for (i, rec) in suite.recorded.iter().enumerate() {
        let out = dir.path().join(format!("{i}.json"));
        let status = Command::new(bin)
            .args(&rec.args)
            .arg("--out")
            .arg(&out)
            .stderr(Stdio::null())
            .status()
            .unwrap();
        let expected_code = if serde_json::from_str::<Value>(&rec.json).unwrap()["passed"] == true {
            0
        } else {
            1
        };
        c.ensure(
            status.code() == Some(expected_code),
            format!("{:?}: exit {:?}", rec.args, status.code()),
        );
        let bytes = std::fs::read_to_string(&out).unwrap_or_default();
        c.ensure(bytes == rec.json, format!("{:?}: reports differ", rec.args));
    }
    c.ensure(suite.recorded.len() >= 20, "too few recorded runs");
}

fn main() {
    let mut suite = Suite {
        recorded: Vec::new(),
        results: Vec::new(),
    };
    let minute = Duration::from_secs(60);
    suite.criterion(1, "relation suite", Some(2 * minute), relation_suite);
    suite.criterion(2, "telescoping", Some(5 * minute), telescoping);
    suite.criterion(3, "counting facts", None, counting_facts);
    suite.criterion(4, "degree and shape bounds", None, degree_bounds);
    suite.criterion(5, "shell homology", Some(minute), shell_homology);
    suite.criterion(6, "vanishing census", None, vanishing);
    suite.criterion(7, "bad-center census", Some(3 * minute), bad_center_census);
    suite.criterion(8, "dimension-estimator oracle", None, dimension_oracle);
    suite.criterion(9, "determinism", None, determinism);
    let passed = suite.results.iter().filter(|&&ok| ok).count();
    println!(
        "acceptance: {passed}/{} criteria passed",
        suite.results.len()
    );
    if passed != suite.results.len() {
        std::process::exit(1);
    }
}
