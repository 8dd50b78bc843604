use std::path::PathBuf;

use clap::Subcommand;
use linewatch::dataset::{
    parse_annotations, polygon_to_obb, split_dataset, tile_image, write_obb_labels, write_tiles,
    TileLabel, TilePolicy, TileRecord,
};
use linewatch::imaging::load_raster;
use linewatch::Exec;
use log::{info, warn};

use crate::common::{create_dir, data_err, io_err, usage, write_json, CliResult, Globals, EXIT_OK};

#[derive(Subcommand)]
pub enum DatasetCmd {
    /// Convert COCO-style polygons to full-frame OBB label files.
    Convert {
        /// COCO-style annotation JSON.
        #[arg(long)]
        annotations: PathBuf,
    },
    /// Cut frames into square tiles with per-tile OBB labels.
    Tile {
        #[arg(long)]
        annotations: PathBuf,
        /// Directory holding the frames named in the annotation file.
        #[arg(long)]
        images: PathBuf,
        /// Tile edge in pixels (defaults to the config's tile_size).
        #[arg(long)]
        tile_size: Option<usize>,
        /// Keep tiles without any label.
        #[arg(long)]
        keep_empty: bool,
    },
    /// Split tiles train/val/test by parent frame.
    Split {
        /// `tiles.json` written by `dataset tile`.
        #[arg(long)]
        tiles: PathBuf,
        /// Train:val:test ratios.
        #[arg(long, default_value = "8:1:1")]
        ratios: String,
    },
}

pub fn run(cmd: DatasetCmd, g: &Globals, exec: Exec) -> CliResult<u8> {
    let mut cfg = g.run_config()?;
    match cmd {
        DatasetCmd::Convert { annotations } => {
            let out = g.out_or("dataset");
            let labels_dir = out.join("labels");
            create_dir(&labels_dir)?;
            let images = parse_annotations(&annotations)?;
            let mut degenerate = 0;
            for img in &images {
                let mut labels = Vec::with_capacity(img.instances.len());
                for inst in &img.instances {
                    let obb = polygon_to_obb(&inst.polygon)?;
                    if obb.area() == 0.0 {
                        degenerate += 1;
                        warn!("{}: degenerate instance (zero-area box)", img.image_path.display());
                    }
                    labels.push(TileLabel { class_id: 0, obb });
                }
                let stem = img.image_path.file_stem().unwrap_or_default().to_string_lossy();
                write_obb_labels(&labels, (img.width, img.height), &labels_dir.join(format!("{stem}.txt")))?;
            }
            write_json(&out.join("annotations.json"), &images)?;
            let instances: usize = images.iter().map(|i| i.instances.len()).sum();
            println!(
                "{} images, {instances} cable instances ({degenerate} degenerate) -> {}",
                images.len(),
                out.display()
            );
            cfg.save(&out.join("run_config.toml"))?;
        }
        DatasetCmd::Tile {
            annotations,
            images,
            tile_size,
            keep_empty,
        } => {
            if let Some(t) = tile_size {
                cfg.tile_size = t;
            }
            if cfg.tile_size == 0 {
                return usage("--tile-size must be positive");
            }
            let out = g.out_or("tiles");
            create_dir(&out)?;
            let frames = parse_annotations(&annotations)?;
            let policy = TilePolicy { keep_empty };
            let per_frame: Vec<CliResult<Option<Vec<TileRecord>>>> = exec.map(&frames, |frame| {
                let path = images.join(&frame.image_path);
                if !path.is_file() {
                    warn!("{}: image missing, skipped", path.display());
                    return Ok(None);
                }
                let raster = load_raster(&path)?;
                if (raster.width(), raster.height()) != (frame.width, frame.height) {
                    return Err(data_err(format!(
                        "{}: annotated as {}x{} but image is {}x{}",
                        path.display(),
                        frame.width,
                        frame.height,
                        raster.width(),
                        raster.height()
                    )));
                }
                let tiles = tile_image(frame, cfg.tile_size, policy)?;
                write_tiles(&raster, &tiles, &out)?;
                Ok(Some(tiles))
            });
            let mut all = Vec::new();
            let mut missing = 0;
            for r in per_frame {
                match r? {
                    Some(t) => all.extend(t),
                    None => missing += 1,
                }
            }
            write_json(&out.join("tiles.json"), &all)?;
            cfg.save(&out.join("run_config.toml"))?;
            info!("{missing} frames skipped");
            println!(
                "{} frames -> {} tiles ({missing} frames missing) -> {}",
                frames.len() - missing,
                all.len(),
                out.display()
            );
        }
        DatasetCmd::Split { tiles, ratios } => {
            let r = parse_ratios(&ratios)?;
            let text = std::fs::read_to_string(&tiles).map_err(|e| io_err(&tiles, e))?;
            let records: Vec<TileRecord> = serde_json::from_str(&text)
                .map_err(|e| data_err(format!("{}: {e}", tiles.display())))?;
            let split = split_dataset(&records, r, cfg.seed)?;
            let out = g.out_or("split");
            create_dir(&out)?;
            write_json(&out.join("split.json"), &split.manifest(cfg.seed, r))?;
            cfg.save(&out.join("run_config.toml"))?;
            println!(
                "train {} / val {} / test {} tiles (seed {}) -> {}",
                split.train.len(),
                split.val.len(),
                split.test.len(),
                cfg.seed,
                out.display()
            );
        }
    }
    Ok(EXIT_OK)
}

fn parse_ratios(s: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<f64> = s
        .split([':', ','])
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .or_else(|_| usage(format!("--ratios expects three numbers like 8:1:1, got {s:?}")))?;
    match parts.as_slice() {
        [a, b, c] if parts.iter().all(|v| v.is_finite() && *v >= 0.0) && a + b + c > 0.0 => {
            Ok([*a, *b, *c])
        }
        _ => usage(format!("--ratios expects three non-negative numbers, got {s:?}")),
    }
}
