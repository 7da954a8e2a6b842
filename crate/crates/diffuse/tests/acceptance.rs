//! Acceptance suite: runs every named check at its pinned seed and
//! tolerance, printing one pass/fail line per criterion condition.
//!
//! `cargo test --test acceptance` (or `diffuse experiment --check all`).

use diffuse::experiments::checks::{run_check, CheckReport};

fn assert_check(name: &str) {
    let report: CheckReport = run_check(name).expect("check must run to completion");
    println!("== {}", report.title);
    for line in &report.lines {
        let mark = if line.passed { "PASS" } else { "FAIL" };
        if line.detail.is_empty() {
            println!("[{mark}] {}", line.label);
        } else {
            println!("[{mark}] {}: {}", line.label, line.detail);
        }
    }
    assert!(
        report.passed(),
        "{} failed:\n{}",
        report.title,
        report
            .lines
            .iter()
            .filter(|l| !l.passed)
            .map(|l| format!("  {}: {}", l.label, l.detail))
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn criterion_01_analytic_consistency() {
    assert_check("analytic-consistency");
}

#[test]
fn criterion_02_inverse_ode() {
    assert_check("inverse-ode");
}

#[test]
fn criterion_03_complete_major() {
    assert_check("complete-major");
}

#[test]
fn criterion_04_regular_major() {
    assert_check("regular-major");
}

#[test]
fn criterion_05_cross_simulator() {
    assert_check("cross-simulator");
}

#[test]
fn criterion_06_fluid_limit() {
    assert_check("fluid-limit");
}

#[test]
fn criterion_07_meanfield_gap() {
    assert_check("meanfield-gap");
}

#[test]
fn criterion_08_asymmetry() {
    assert_check("asymmetry");
}

#[test]
fn criterion_09_cycle() {
    assert_check("cycle");
}

#[test]
fn criterion_10_early_adoption() {
    assert_check("early-adoption");
}

#[test]
fn criterion_11_tree_likeness() {
    assert_check("tree-likeness");
}

#[test]
fn criterion_12_figure3() {
    assert_check("figure3");
}

#[test]
fn criterion_13_innovators() {
    assert_check("innovators");
}
