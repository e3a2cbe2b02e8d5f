//! Writes the figure data sets through the library API.
//!
//! cargo run --release --example figures -- out/

use std::path::PathBuf;

use coupled_wigner::experiments::{run_fig1, run_fig3, run_fig3_inset, Experiment, ExperimentConfig};

fn main() -> coupled_wigner::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;

    for (k, l) in [(1, 0), (2, 1)] {
        let cfg = ExperimentConfig { experiment: Experiment::Fig1, k, l, ..Default::default() };
        let path = dir.join(format!("fig1_{k}{l}.csv"));
        std::fs::write(&path, run_fig1(&cfg)?.to_csv())?;
        println!("wrote {}", path.display());
    }

    let cfg = ExperimentConfig { experiment: Experiment::Fig3, ..Default::default() };
    for (name, run) in [("fig3.csv", run_fig3(&cfg)?), ("fig3_inset.csv", run_fig3_inset(&cfg)?)] {
        std::fs::write(dir.join(name), run.table.to_csv())?;
        print!("wrote {}\n{}", dir.join(name).display(), run.summary_text());
    }
    Ok(())
}
