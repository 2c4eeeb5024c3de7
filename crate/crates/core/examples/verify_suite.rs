//! The full self-check suite, as run by `canal verify --builtin`.

use canal::verify::{verify_builtin, VerifyConfig};

fn main() {
    let report = verify_builtin(&VerifyConfig::default());
    print!("{}", report.render_text());
    std::process::exit(if report.passed() { 0 } else { 5 });
}
