//! Data and plot scripts for the scatter figures.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::output::{write_sweep_csv, write_xy_csv};
use crate::error::{Error, Result};
use crate::metrology::{bound, BoundCurve, QfiConfig};
use crate::montecarlo::{run_sweep_with, state_seed, SamplerConfig, SweepRecord};
use crate::states::StateClass;

pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 2..=8;
/// Mode-A energies of the four-panel figures.
pub const PANEL_ENERGIES: [f64; 4] = [3.0, 5.0, 10.0, 100.0];
const CURVE_POINTS: usize = 201;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FigureOptions {
    pub id: u8,
    pub seed: u64,
    pub count: usize,
    pub out_dir: PathBuf,
    /// Largest `n_A` on energy-axis figures.
    pub n_max: f64,
    /// Number of `n_A` grid points on energy-axis figures.
    pub n_steps: usize,
    pub qfi: QfiConfig,
    pub sampler: SamplerConfig,
}

enum Layout {
    /// `avg_qfi` against `n_A` for one class with bound overlays.
    Energy(StateClass, &'static [BoundCurve]),
    /// `avg_qfi` against coherence for single-mode classes, one panel per energy.
    Coherence,
    /// Energy scatter plus `avg_qfi` against `E_N` panels.
    Entangled,
}

const SINGLE_CURVES: &[BoundCurve] = &[
    BoundCurve::UpperSingle,
    BoundCurve::LowerSingle,
    BoundCurve::CoherentMax,
];
const TWO_MODE_CURVES: &[BoundCurve] = &[
    BoundCurve::UpperSingle,
    BoundCurve::LowerSingle,
    BoundCurve::CoherentMax,
    BoundCurve::SeparableMax,
];

fn layout(id: u8) -> Result<Layout> {
    Ok(match id {
        2 => Layout::Energy(StateClass::SingleGeneral, SINGLE_CURVES),
        3 => Layout::Energy(StateClass::SingleCoherent, SINGLE_CURVES),
        4 => Layout::Coherence,
        5 => Layout::Energy(StateClass::TwoModeGeneral, TWO_MODE_CURVES),
        6 => Layout::Energy(StateClass::SeparableStandard, TWO_MODE_CURVES),
        7 => Layout::Energy(StateClass::Discordant, TWO_MODE_CURVES),
        8 => Layout::Entangled,
        _ => return Err(Error::Config(format!("unknown figure id {id}; expected 2..=8"))),
    })
}

impl FigureOptions {
    fn validate(&self) -> Result<()> {
        layout(self.id)?;
        if self.count == 0 {
            return Err(Error::Config("count must be >= 1".into()));
        }
        if !(self.n_max > 0.0 && self.n_max.is_finite()) || self.n_steps == 0 {
            return Err(Error::Config("n_max must be positive and n_steps >= 1".into()));
        }
        self.qfi.validate()?;
        self.sampler.validate()
    }
}

/// `count` states spread over an even `n_A` grid.
fn energy_sweep(class: StateClass, opts: &FigureOptions) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::with_capacity(opts.count);
    for k in 0..opts.n_steps {
        let share = opts.count / opts.n_steps + usize::from(k < opts.count % opts.n_steps);
        if share == 0 {
            continue;
        }
        let n_a = opts.n_max * (k + 1) as f64 / opts.n_steps as f64;
        out.extend(run_sweep_with(
            class,
            n_a,
            share,
            state_seed(opts.seed, k),
            &opts.qfi,
            &opts.sampler,
        )?);
    }
    Ok(out)
}

fn curve_rows(curve: BoundCurve, x_max: f64, n_a: Option<f64>) -> Result<Vec<(f64, f64)>> {
    (0..CURVE_POINTS)
        .map(|k| {
            let x = x_max * k as f64 / (CURVE_POINTS - 1) as f64;
            let y = match n_a {
                Some(n) => bound(curve, n, Some(x))?,
                None => bound(curve, x, None)?,
            };
            Ok((x, y))
        })
        .collect()
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn sweep(&mut self, name: &str, records: &[SweepRecord]) -> Result<()> {
        let path = self.dir.join(name);
        write_sweep_csv(BufWriter::new(File::create(&path)?), records, 0)?;
        self.files.push(path);
        Ok(())
    }

    fn curve(&mut self, name: &str, header: [&str; 2], rows: &[(f64, f64)]) -> Result<()> {
        let path = self.dir.join(name);
        write_xy_csv(BufWriter::new(File::create(&path)?), header, rows)?;
        self.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, body)?;
        self.files.push(path);
        Ok(())
    }
}

fn energy_block(
    w: &mut Writer,
    script: &mut String,
    class: StateClass,
    curves: &[BoundCurve],
    opts: &FigureOptions,
) -> Result<()> {
    let scatter = format!("scatter_{}.csv", class.name());
    w.sweep(&scatter, &energy_sweep(class, opts)?)?;
    let mut plots = vec![format!(
        "'{scatter}' using 3:4 every ::1 with dots title '{}'",
        class.name()
    )];
    for &curve in curves {
        let name = format!("bound_{}.csv", curve.name());
        w.curve(&name, ["n_a", "value"], &curve_rows(curve, opts.n_max, None)?)?;
        plots.push(format!(
            "'{name}' using 1:2 every ::1 with lines title '{}'",
            curve.name()
        ));
    }
    let _ = writeln!(script, "set xlabel 'n_A'\nset ylabel 'average QFI'");
    let _ = writeln!(script, "plot {}", plots.join(", \\\n     "));
    Ok(())
}

fn panel_seed(seed: u64, panel: usize, slot: usize) -> u64 {
    state_seed(state_seed(seed, 1_000 + panel), slot)
}

/// Writes the figure's CSVs, a gnuplot script and returns every file written.
pub fn write_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    opts.validate()?;
    fs::create_dir_all(&opts.out_dir)?;
    let mut w = Writer {
        dir: &opts.out_dir,
        files: Vec::new(),
    };
    let mut script = String::new();
    let _ = writeln!(script, "set datafile separator ','");
    let _ = writeln!(script, "set terminal pngcairo size 1200,900");
    let _ = writeln!(script, "set output 'figure-{}.png'", opts.id);

    match layout(opts.id)? {
        Layout::Energy(class, curves) => energy_block(&mut w, &mut script, class, curves, opts)?,
        Layout::Coherence => {
            let _ = writeln!(script, "set multiplot layout 2,2");
            let classes = [StateClass::SingleGeneral, StateClass::SingleCoherent];
            for (p, &n_a) in PANEL_ENERGIES.iter().enumerate() {
                let mut plots = Vec::new();
                for (j, &class) in classes.iter().enumerate() {
                    let recs = run_sweep_with(
                        class,
                        n_a,
                        opts.count,
                        panel_seed(opts.seed, p, j),
                        &opts.qfi,
                        &opts.sampler,
                    )?;
                    let name = format!("panel_n{n_a}_{}.csv", class.name());
                    w.sweep(&name, &recs)?;
                    plots.push(format!(
                        "'{name}' using 5:4 every ::1 with dots title '{}'",
                        class.name()
                    ));
                }
                let _ = writeln!(
                    script,
                    "set title 'n_A = {n_a}'\nset xlabel 'coherence (bits)'\nset ylabel 'average QFI'"
                );
                let _ = writeln!(script, "plot {}", plots.join(", \\\n     "));
            }
            let _ = writeln!(script, "unset multiplot");
        }
        Layout::Entangled => {
            let _ = writeln!(script, "set multiplot layout 3,2");
            energy_block(
                &mut w,
                &mut script,
                StateClass::EntangledStandard,
                TWO_MODE_CURVES,
                opts,
            )?;
            for (p, &n_a) in PANEL_ENERGIES.iter().enumerate() {
                let class = StateClass::EntangledStandard;
                let recs = run_sweep_with(
                    class,
                    n_a,
                    opts.count,
                    panel_seed(opts.seed, p, 0),
                    &opts.qfi,
                    &opts.sampler,
                )?;
                let name = format!("panel_n{n_a}_{}.csv", class.name());
                w.sweep(&name, &recs)?;
                let e_max = 2.0 * n_a.sqrt().asinh();
                let curve = BoundCurve::EntangledVsNegativity;
                let curve_name = format!("panel_n{n_a}_{}.csv", curve.name());
                w.curve(
                    &curve_name,
                    ["log_negativity", "value"],
                    &curve_rows(curve, e_max, Some(n_a))?,
                )?;
                let _ = writeln!(
                    script,
                    "set title 'n_A = {n_a}'\nset xlabel 'E_N'\nset ylabel 'average QFI'"
                );
                let _ = writeln!(
                    script,
                    "plot '{name}' using 6:4 every ::1 with dots title '{}', \\\n     '{curve_name}' using 1:2 every ::1 with lines title '{}'",
                    class.name(),
                    curve.name()
                );
            }
            let _ = writeln!(script, "unset multiplot");
        }
    }
    w.text("plot.gp", &script)?;
    Ok(w.files)
}
