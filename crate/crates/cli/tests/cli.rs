use std::collections::BTreeSet;
use std::process::Command as Process;

use clap::{CommandFactory, Parser};
use fermat_cli::{run, Command, RunConfig};
use fermat_core::arith::primes_up_to;
use fermat_core::densities::survey_count;

fn config(args: &[&str]) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("fermatq").chain(args.iter().copied())).unwrap()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&config(args), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn csv(args: &[&str]) -> String {
    let (code, out, err) = exec(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn wieferich_base_two_at_1093() {
    assert_eq!(csv(&["quotient", "--a", "2", "--p", "1093"]), "p,a,q,zero\n1093,2,0,true\n");
}

#[test]
fn single_solution_at_29() {
    assert_eq!(csv(&["solutions", "--p", "29"]), "p,z,d,lambda\n29,14,28,0\n");
}

#[test]
fn threshold_prime_for_base_two() {
    let out = csv(&["p0", "--a", "2", "--c", "1"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "79");
}

#[test]
fn quotient_accepts_primes_beyond_u64() {
    let p = "340282366920938463463374607431768211507";
    let out = csv(&["quotient", "--a", "2", "--p", p]);
    assert!(out.lines().nth(1).unwrap().starts_with(p));
}

#[test]
fn json_document_shape() {
    let (code, out, _) = exec(&["table-small", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["command"], "table-small");
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert_eq!(v["rows"][0], serde_json::json!({"a": 3, "p": 11}));
    assert!(v["runtime_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(exec(&["quotient", "--a", "2", "--p", "1001"]).0, 2, "composite p");
    assert_eq!(exec(&["quotient", "--a", "14", "--p", "7"]).0, 2, "p | a");
    assert_eq!(exec(&["quotient", "--a", "2"]).0, 2, "missing --p");
    assert_eq!(exec(&["prime", "--lo", "9", "--hi", "3"]).0, 2, "lo > hi");
    assert_eq!(exec(&["prime", "--lo", "3", "--hi", "9", "--threads", "0"]).0, 2, "no threads");
    assert_eq!(exec(&["coverage", "--p", "1000000007"]).0, 3, "sieve limit");
    assert_eq!(exec(&["s-partial", "--x", "4294967296"]).0, 3, "sieve limit");
}

#[test]
fn binary_reports_parse_errors_with_usage() {
    let bin = env!("CARGO_BIN_EXE_fermatq");
    let bad = Process::new(bin).args(["quotient", "--a", "two"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
    let unknown = Process::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let ok = Process::new(bin).args(["quotient", "--a", "2", "--p", "3511"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "p,a,q,zero\n3511,2,0,true\n");
}

/// Every library operation of the experiment modules.
const OPERATIONS: &[&str] = &[
    // arith
    "is_prime",
    "next_prime",
    "prime_range",
    "pow_mod",
    "factorize",
    "euler_phi",
    "moebius",
    "divisors",
    "multiplicative_order",
    "phi_squared_sum",
    // cyclotomic
    "phi_m_eval",
    "reduce",
    "factor_congruence_check",
    "pairwise_coprime_check",
    "wieferich_equivalence_check",
    // fermat
    "fermat_quotient",
    "quotient_variants",
    "lift_to_solution",
    "solutions_in_range",
    "solutions_mod_p2",
    "crt_solutions",
    "orders_of_powers",
    "theta_offsets",
    "first_solution_search",
    "average_solution_count",
    "first_zeros_table",
    // stats
    "classify_primes",
    "value_coverage",
    "lambda_multiplicity",
    "multiplicity_survey",
    "equidistribution_nt",
    "sigma_moment",
    "binomial_tail",
    "tail_upper_bound_check",
    "ratio_encadre",
    "epsilon_exponent",
    // densities
    "c_p",
    "c_p_bruteforce",
    "p_m_product",
    "local_solution_table",
    "dp_product",
    "crt_exact_count",
    "survey_nonzero",
    "upsilon",
    "eta",
    "eta_minus_upsilon",
    "s_partial",
    "series_sums",
    "p0_solver",
];

#[test]
fn every_operation_has_exactly_one_subcommand() {
    for op in OPERATIONS {
        let owners: Vec<&str> = Command::ALL
            .iter()
            .filter(|c| c.operations().contains(op))
            .map(|c| c.name())
            .collect();
        assert_eq!(owners.len(), 1, "{op} is reached from {owners:?}");
    }
    for c in Command::ALL {
        for op in c.operations() {
            assert!(OPERATIONS.contains(op), "{} lists unknown operation {op}", c.name());
        }
    }
}

#[test]
fn dispatch_table_matches_the_parser() {
    let parsed: BTreeSet<String> = RunConfig::command()
        .get_subcommands()
        .map(|s| s.get_name().to_string())
        .collect();
    let table: BTreeSet<String> = Command::ALL.iter().map(|c| c.name().to_string()).collect();
    assert_eq!(parsed, table);
    for name in [
        "quotient",
        "variants",
        "first-zero",
        "solutions",
        "lift",
        "crt",
        "orders-of-powers",
        "theta",
        "classify",
        "coverage",
        "lambda-stats",
        "nt-equidist",
        "moments",
        "binom-tail",
        "ratio",
        "epsilon",
        "cp",
        "pm-product",
        "local-table",
        "dp-product",
        "crt-count",
        "survey",
        "upsilon-eta",
        "s-partial",
        "series",
        "p0",
        "avg-count",
        "table-small",
    ] {
        assert!(table.contains(name), "missing subcommand {name}");
    }
}

/// A small, fast invocation of every subcommand.
const SMOKE: &[&[&str]] = &[
    &["prime", "--n", "1092"],
    &["prime", "--lo", "10", "--hi", "30"],
    &["pow-mod", "--a", "2", "--n", "1092", "--m", "1194649"],
    &["factor", "--n", "1092"],
    &["order", "--a", "2", "--p", "1093"],
    &["phi-sq", "--p", "101"],
    &["phi-sq", "--p", "340282366920938463463374607431768211507"],
    &["cyclotomic", "--m", "12", "--a", "3"],
    &["factor-congruence", "--m", "15", "--a", "7"],
    &["coprime", "--a", "7", "--m", "30"],
    &["wieferich", "--a", "2", "--p", "1093"],
    &["quotient", "--a", "3", "--p", "11"],
    &["variants", "--a", "3", "--p", "11"],
    &["first-zero", "--a", "2", "--hi", "5000"],
    &["solutions", "--p", "10007"],
    &["zeros-p2", "--p", "7"],
    &["lift", "--a", "5", "--v", "3", "--p", "29"],
    &["crt", "--p", "5,7"],
    &["crt", "--lo", "5", "--hi", "7"],
    &["orders-of-powers", "--a", "2", "--p", "1093"],
    &["theta", "--a", "2", "--p", "31"],
    &["classify", "--lo", "100", "--hi", "2000"],
    &["coverage", "--p", "1009"],
    &["lambda-stats", "--p", "101", "--v", "0,1,2"],
    &["lambda-stats", "--lo", "100", "--hi", "600", "--v", "0,5"],
    &["lambda-stats", "--lo", "100", "--hi", "600", "--seed", "3", "--n", "4"],
    &["nt-equidist", "--bound", "2000", "--t", "3"],
    &["moments", "--p", "101", "--n", "3"],
    &["binom-tail", "--p", "101"],
    &["ratio", "--p", "100003"],
    &["epsilon", "--p", "101"],
    &["cp", "--m", "3", "--p", "7"],
    &["pm-product", "--m", "3", "--n", "1000"],
    &["local-table", "--p", "7"],
    &["dp-product", "--x", "10000"],
    &["crt-count", "--x", "5"],
    &["survey", "--y", "200", "--x", "1000"],
    &["upsilon-eta", "--p", "10007", "--c", "1"],
    &["s-partial", "--x", "10"],
    &["series", "--a", "2", "--bound", "1000"],
    &["p0", "--a", "3", "--c", "1"],
    &["avg-count", "--lo", "2", "--hi", "20", "--bound", "1000"],
    &["table-small"],
];

#[test]
fn every_subcommand_runs() {
    let mut seen = BTreeSet::new();
    for args in SMOKE {
        let out = csv(args);
        assert!(out.lines().count() >= 1, "{args:?} printed no header");
        seen.insert(args[0]);
    }
    for c in Command::ALL {
        assert!(seen.contains(c.name()), "no smoke run for {}", c.name());
    }
}

#[test]
fn smoke_values() {
    assert_eq!(csv(&["crt-count", "--x", "5"]).lines().nth(1).unwrap().split(',').nth(1), Some("441"));
    assert_eq!(csv(&["zeros-p2", "--p", "7"]).lines().count(), 7);
    assert_eq!(csv(&["crt", "--p", "5,7"]).lines().count(), 25);
    let lift = csv(&["lift", "--a", "5", "--v", "0", "--p", "29"]);
    let z: u64 = lift.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert_eq!(csv(&["quotient", "--a", &z.to_string(), "--p", "29"]).lines().nth(1).unwrap(), format!("29,{z},0,true"));
}

fn rows_only(json: &str) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v["rows"].clone()
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let cases: &[&[&str]] = &[
        &["classify", "--lo", "100", "--hi", "4000"],
        &["survey", "--y", "1500", "--x", "3000"],
        &["lambda-stats", "--lo", "50", "--hi", "500", "--seed", "7"],
        &["first-zero", "--a", "2", "--hi", "5000"],
        &["dp-product", "--x", "200000"],
        &["s-partial", "--x", "1000000"],
        &["pm-product", "--m", "5", "--n", "100000"],
        &["series", "--a", "2", "--bound", "100000"],
        &["local-table", "--p", "101"],
        &["avg-count", "--lo", "2", "--hi", "60", "--bound", "3000"],
    ];
    for args in cases {
        let run_with = |threads: &str, format: &str| {
            let mut a = args.to_vec();
            a.extend(["--threads", threads, "--format", format]);
            let (code, out, err) = exec(&a);
            assert_eq!(code, 0, "{a:?}: {err}");
            out
        };
        let reference = run_with("1", "csv");
        let json = rows_only(&run_with("1", "json"));
        for threads in ["2", "4"] {
            assert_eq!(run_with(threads, "csv"), reference, "{args:?} with {threads} threads");
            assert_eq!(rows_only(&run_with(threads, "json")), json, "{args:?} with {threads} threads");
        }
        assert_eq!(run_with("1", "csv"), reference, "{args:?} rerun");
    }
}

#[test]
fn survey_resumes_from_a_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("survey.json");
    let path_s = path.to_str().unwrap();
    let args = ["survey", "--y", "2000", "--x", "5000", "--checkpoint", path_s];

    let fresh = csv(&args);
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["done"], true);
    assert_eq!(saved["cursor"], 2001);

    // A finished checkpoint replays its result without rescanning.
    let (code, replay, progress) = exec(&args);
    assert_eq!((code, replay.as_str(), progress.as_str()), (0, fresh.as_str(), ""));

    // A half-way cursor, as left by an interrupted run.
    let partial = survey_count(2, 1024, &primes_up_to(5000));
    let cp = serde_json::json!({
        "subcommand": "survey",
        "params": {"y": 2000, "x": 5000},
        "cursor": 1025,
        "state": {"count": partial},
        "done": false,
    });
    std::fs::write(&path, cp.to_string()).unwrap();
    let (code, resumed, progress) = exec(&args);
    assert_eq!(code, 0);
    assert_eq!(resumed, fresh);
    assert!(!progress.contains("through 1024 "), "resumed run rescanned: {progress}");

    // The checkpoint belongs to this scan only.
    let other = ["survey", "--y", "3000", "--x", "5000", "--checkpoint", path_s];
    assert_eq!(exec(&other).0, 2);
}

#[test]
fn first_zero_resumes_from_a_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fz.json");
    let path_s = path.to_str().unwrap();
    let args = ["first-zero", "--a", "2", "--lo", "1100", "--hi", "100000", "--checkpoint", path_s];
    let out = csv(&args);
    assert_eq!(out.lines().nth(1), Some("2,1100,100000,3511"));
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["done"], true);
    assert_eq!(saved["state"]["found"], 3511);
    assert_eq!(csv(&args), out);

    let none = csv(&["first-zero", "--a", "2", "--lo", "3600", "--hi", "100000"]);
    assert_eq!(none.lines().nth(1), Some("2,3600,100000,"));
}
