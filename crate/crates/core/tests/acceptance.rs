use std::process::ExitCode;

use e6lax::cli::config::{Overrides, RunConfig};
use e6lax::cli::{selftest_report, Group, Report};

const CRITERIA: [(u32, &str, Group); 9] = [
    (1, "weight structure", Group::Weight),
    (2, "orthogonal polynomials", Group::Ops),
    (3, "spectral matrix", Group::Spectral),
    (4, "index recurrences", Group::Index),
    (5, "deformation matrix", Group::Deform),
    (6, "compatibility", Group::Compat),
    (7, "dynamics", Group::Dynamics),
    (8, "Sakai correspondence", Group::Sakai),
    (9, "Yamada correspondence", Group::Yamada),
];

fn criterion(report: &Report, group: Group) -> (bool, String) {
    let checks: Vec<_> = report.checks.iter().filter(|c| c.group == group.name()).collect();
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    if checks.is_empty() {
        return (false, "no checks ran".into());
    }
    if failed.is_empty() {
        (true, format!("checks run: {}", checks.len()))
    } else {
        (false, format!("failed: {}", failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::load(None, &Overrides::default()).expect("default config is valid");
    let first = selftest_report(&cfg).expect("suite runs");
    let mut all = true;
    for (k, name, group) in CRITERIA {
        let (pass, detail) = criterion(&first, group);
        all &= pass;
        println!("{} criterion {k:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }

    let again = RunConfig::load(None, &Overrides::default()).expect("default config is valid");
    let second = selftest_report(&again).expect("suite runs");
    let same = first.to_json().as_bytes() == second.to_json().as_bytes();
    all &= same;
    println!(
        "{} criterion 10 determinism: {}",
        if same { "PASS" } else { "FAIL" },
        if same { "two selftest reports are byte-identical" } else { "reports differ" }
    );

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
