//! Vanishing-curvature verdicts for the reference surfaces.

use canal::classify::ClassifyConfig;
use canal::prelude::*;
use canal::spec::{builtin, BUILTIN_NAMES};

fn main() -> Result<()> {
    let cfg = ClassifyConfig::default();
    println!("{:<14} {:<22} {:>5} {:>8} {:>8} {:>11}", "surface", "family", "flat", "minimal", "II-flat", "II-minimal");
    for name in BUILTIN_NAMES {
        let m = builtin(name).expect("listed").build()?;
        let r = classify(&m, &cfg);
        println!(
            "{:<14} {:<22} {:>5} {:>8} {:>8} {:>11}",
            name,
            format!("{:?}", r.family),
            r.flat.symbol(),
            r.minimal.symbol(),
            r.ii_flat.symbol(),
            r.ii_minimal.symbol()
        );
    }
    Ok(())
}
