//! Runs the whole check suite at q = 0.8 and prints the text report.

use askey_wilson::askey_wilson::AWParams;
use askey_wilson::suite::{run_verify, Format, SuiteConfig};

fn main() -> askey_wilson::Result<()> {
    let cfg = SuiteConfig {
        params: AWParams::new(0.8, 0.7, -0.6, 0.5, 0.9)?,
        format: Format::Text,
        ..SuiteConfig::default()
    };
    let report = run_verify(&cfg)?;
    print!("{}", report.render(cfg.format)?);
    std::process::exit(if report.pass { 0 } else { 1 });
}
