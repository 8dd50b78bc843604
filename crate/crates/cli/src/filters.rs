use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Subcommand;
use linewatch::filterbank::{
    build_bank, directional_block_forward, export_block_weights, frequency_response,
    highpass_prototype, import_block_weights, lowpass_prototype, prototype_response_at,
    Direction, DirectionalBlockParams, Kernel2D,
};
use linewatch::imaging::{load_raster, save_raster};
use linewatch::Exec;

use crate::common::{create_dir, data_err, io_err, usage, write_json, CliResult, Globals, EXIT_OK};

#[derive(Subcommand)]
pub enum FiltersCmd {
    /// Write the 8-direction highpass and lowpass banks as JSON.
    Build,
    /// Magnitude responses of the prototypes and every bank kernel as CSV.
    Respond {
        /// Frequency samples per axis.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Run the directional block on an image and save the 3-channel result.
    Apply {
        #[arg(long)]
        image: PathBuf,
        /// Weight file from `filters export` (defaults to the built-in bank).
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Export the directional block weights.
    Export,
}

pub fn run(cmd: FiltersCmd, g: &Globals, _exec: Exec) -> CliResult<u8> {
    match cmd {
        FiltersCmd::Build => {
            let out = g.out_or("filters");
            create_dir(&out)?;
            let named = |k: &[Kernel2D]| -> BTreeMap<String, Kernel2D> {
                Direction::ALL
                    .iter()
                    .zip(k)
                    .map(|(d, k)| (format!("{}:{}", d.index(), d.label()), k.clone()))
                    .collect()
            };
            let hp = build_bank(&highpass_prototype());
            let lp = build_bank(&lowpass_prototype());
            write_json(&out.join("highpass_bank.json"), &named(hp.kernels()))?;
            write_json(&out.join("lowpass_bank.json"), &named(lp.kernels()))?;
            println!("wrote 2 banks of 8 kernels -> {}", out.display());
        }
        FiltersCmd::Respond { grid } => {
            if grid < 16 {
                return usage("--grid must be at least 16");
            }
            let out = g.out_or("responses");
            create_dir(&out)?;
            let path = out.join("prototypes.csv");
            let mut w = csv::Writer::from_path(&path).map_err(|e| data_err(e))?;
            w.write_record(["omega", "highpass", "lowpass"]).map_err(|e| data_err(e))?;
            let (hp, lp) = (highpass_prototype(), lowpass_prototype());
            for k in 0..=grid {
                let omega = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
                w.write_record([
                    omega.to_string(),
                    prototype_response_at(&hp, omega).to_string(),
                    prototype_response_at(&lp, omega).to_string(),
                ])
                .map_err(|e| data_err(e))?;
            }
            w.flush().map_err(|e| io_err(&path, e))?;
            for (name, bank) in [("hp", build_bank(&hp)), ("lp", build_bank(&lp))] {
                for d in Direction::ALL {
                    let resp = frequency_response(bank.kernel(d), grid)?;
                    let path = out.join(format!("{name}_dir{}.csv", d.index()));
                    let mut w = csv::Writer::from_path(&path).map_err(|e| data_err(e))?;
                    for y in 0..grid {
                        w.write_record((0..grid).map(|x| resp.get(x, y).to_string()))
                            .map_err(|e| data_err(e))?;
                    }
                    w.flush().map_err(|e| io_err(&path, e))?;
                }
            }
            println!("wrote prototype and 16 kernel responses ({grid}x{grid}) -> {}", out.display());
        }
        FiltersCmd::Apply { image, weights } => {
            let params = match &weights {
                Some(p) => import_block_weights(p)?,
                None => DirectionalBlockParams::default(),
            };
            let img = load_raster(&image)?;
            let out = g.out_or("directional.png");
            let result = directional_block_forward(&img, &params)?;
            save_raster(&out, &result)?;
            println!("{} -> {}", image.display(), out.display());
        }
        FiltersCmd::Export => {
            let out = g.out_or("directional_block.json");
            export_block_weights(&DirectionalBlockParams::default(), &out)?;
            println!("weights -> {}", out.display());
        }
    }
    Ok(EXIT_OK)
}
