//! Writes a small version of the coherent-state figure into a temporary directory.

use gqfi::cli::{write_figure, FigureOptions};
use gqfi::metrology::QfiConfig;
use gqfi::montecarlo::SamplerConfig;

fn main() -> gqfi::Result<()> {
    let out_dir = std::env::temp_dir().join("gqfi-figure-3");
    let opts = FigureOptions {
        id: 3,
        seed: 1,
        count: 400,
        out_dir: out_dir.clone(),
        n_max: 5.0,
        n_steps: 20,
        qfi: QfiConfig::default(),
        sampler: SamplerConfig::default(),
    };
    for path in write_figure(&opts)? {
        println!("{}", path.display());
    }
    println!("render with: cd {} && gnuplot plot.gp", out_dir.display());
    Ok(())
}
