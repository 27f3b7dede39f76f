//! Data behind the two figures: the alternating datum and the time-1 envelope.
//!
//!     cargo run --example figures -- [out_dir]

use std::fs::File;
use std::path::PathBuf;

use discrete_hardy::hardy::{
    figure1_data, figure1_max_deviation, figure2_data, figure2_verdict, write_fig1_csv,
    write_fig2_csv,
};

fn main() -> discrete_hardy::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let h = 0.05;

    let rows = figure1_data(h, 50)?;
    write_fig1_csv(&rows, File::create(dir.join("fig1.csv"))?)?;
    println!("fig1: max deviation {:.6e}", figure1_max_deviation(&rows, h));

    let rows = figure2_data(h, 200, 250)?;
    write_fig2_csv(&rows, File::create(dir.join("fig2.csv"))?)?;
    let (holds, fails) = figure2_verdict(h, 200, 250)?;
    println!("fig2: beta=5 holds {holds}, beta=4.9 fails somewhere {fails}");
    println!("written to {}", dir.display());
    Ok(())
}
