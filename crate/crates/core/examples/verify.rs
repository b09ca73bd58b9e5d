//! Runs every identity suite on a genus-two curve and prints the report lines.

use loopsoliton::relations::{run_suite, Suite, SuiteConfig};
use loopsoliton::HyperellipticCurve;

fn main() -> loopsoliton::Result<()> {
    let curve = HyperellipticCurve::from_real(&[0.0, 4.0, 0.0, -5.0, 0.0, 1.0])?;
    let cfg = SuiteConfig::new(curve, 7);
    for rep in run_suite(Suite::All, &cfg)? {
        println!("{}", rep.line());
        for (k, v) in &rep.metadata {
            println!("    {k} = {v}");
        }
    }
    Ok(())
}
