//! Runs the built-in verification suites and prints one line per check.

use cmgrass::algebra::Mode;
use cmgrass::verify::{run, RunConfig, Suite};

fn main() {
    let suites =
        Suite::parse_list(&std::env::args().nth(1).unwrap_or_else(|| "all".into())).unwrap();
    let cfg = RunConfig::new(Mode::Exact, 1e-8, 8, 7, suites).unwrap();
    let report = run(&cfg);
    for line in report.lines() {
        println!("{line}");
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
