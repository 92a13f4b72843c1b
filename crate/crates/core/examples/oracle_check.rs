use gqfi::fock::{oracle_suite, OracleConfig};

fn main() {
    let t = std::time::Instant::now();
    let report = oracle_suite(&OracleConfig::default());
    for c in &report {
        println!(
            "{:<15} {:<55} g={:?} f={:?} diff={:?} pass={} err={:?}",
            c.quantity, c.recipe, c.gaussian_value, c.fock_value, c.abs_diff, c.passed, c.error
        );
    }
    println!("{} checks in {:?}", report.len(), t.elapsed());
}
