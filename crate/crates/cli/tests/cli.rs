use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use linewatch::dataset::{write_label_lines, write_obb_labels, LabelLine, TileLabel};
use linewatch::imaging::save_raster;
use linewatch::obbgeom::OrientedBox;
use linewatch::synth;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linewatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn linewatch")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Three paired-fixture frames; frame_1 is the encroached one.
fn fixture(root: &Path) -> (PathBuf, PathBuf) {
    let (imgs, lbls) = (root.join("images"), root.join("labels"));
    fs::create_dir_all(&imgs).unwrap();
    fs::create_dir_all(&lbls).unwrap();
    for (k, enc) in [(0u64, false), (1, true), (2, false)] {
        let f = synth::paired(k, enc);
        save_raster(&imgs.join(format!("frame_{k}.png")), &f.image).unwrap();
        write_obb_labels(
            &[TileLabel { class_id: 0, obb: f.line }],
            (f.image.width(), f.image.height()),
            &lbls.join(format!("frame_{k}.txt")),
        )
        .unwrap();
    }
    (imgs, lbls)
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["--bogus"])), 64);
    assert_eq!(code(&run(&["eval", "sweep", "--nope"])), 64);
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["pipeline", "run"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn pipeline_alerts_only_encroached_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (imgs, lbls) = fixture(dir.path());
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "threshold = 0.1\n").unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = run(&[
            "pipeline", "run", "--images", s(&imgs), "--labels", s(&lbls),
            "--config", s(&cfg), "--out", s(out), "--threads", threads,
        ]);
        assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let alerts = fs::read_to_string(a.join("alerts.jsonl")).unwrap();
    assert_eq!(alerts.lines().count(), 1);
    let rec: serde_json::Value = serde_json::from_str(alerts.lines().next().unwrap()).unwrap();
    assert_eq!(rec["image"], "frame_1.png");
    assert_eq!(fs::read_to_string(a.join("reports.jsonl")).unwrap().lines().count(), 3);
    for f in ["reports.jsonl", "alerts.jsonl", "summary.csv", "run_config.toml"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }

    // rerun from the written config alone
    let c = dir.path().join("c");
    let o = run(&["pipeline", "run", "--config", s(&a.join("run_config.toml")), "--out", s(&c)]);
    assert_eq!(code(&o), 2);
    assert_eq!(fs::read(a.join("reports.jsonl")).unwrap(), fs::read(c.join("reports.jsonl")).unwrap());
}

#[test]
fn pipeline_clean_and_empty() {
    let dir = tempfile::tempdir().unwrap();
    let (imgs, lbls) = fixture(dir.path());
    let out = dir.path().join("o");
    let o = run(&["pipeline", "run", "--images", s(&imgs), "--labels", s(&lbls), "--threshold", "5", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let empty = dir.path().join("empty");
    fs::create_dir_all(&empty).unwrap();
    let o = run(&["pipeline", "run", "--images", s(&empty), "--labels", s(&empty), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(out.join("reports.jsonl")).unwrap(), "");
}

#[test]
fn data_errors_exit_65() {
    let dir = tempfile::tempdir().unwrap();
    let (imgs, lbls) = fixture(dir.path());
    fs::write(lbls.join("frame_0.txt"), "0 garbage\n").unwrap();
    let o = run(&["pipeline", "run", "--images", s(&imgs), "--labels", s(&lbls), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&o), 65);
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&run(&["eval", "roc", "--scores", s(&missing)])), 65);
    let bad_cfg = dir.path().join("bad.toml");
    fs::write(&bad_cfg, "beta = 1.0\n").unwrap();
    let o = run(&["vegmetric", "analyze", "--images", s(&imgs), "--labels", s(&lbls), "--config", s(&bad_cfg)]);
    assert_eq!(code(&o), 64);
}

#[test]
fn vegmetric_analyze_exits_zero_with_alerts() {
    let dir = tempfile::tempdir().unwrap();
    let (imgs, lbls) = fixture(dir.path());
    let out = dir.path().join("v");
    let o = run(&["vegmetric", "analyze", "--images", s(&imgs), "--labels", s(&lbls), "--threshold", "0.1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(2).unwrap().contains(",true,"));
}

#[test]
fn eval_sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("s.csv");
    let labels = dir.path().join("l.csv");
    fs::write(&scores, "id,score\na,0.9\nb,0.8\nc,0.7\nd,0.4\ne,0.3\nf,0.1\n").unwrap();
    // shuffled rows, joined by id
    fs::write(&labels, "id,label\nf,0\nd,1\na,1\nc,0\nb,1\ne,0\n").unwrap();
    let out = dir.path().join("e");
    let o = run(&["eval", "sweep", "--scores", s(&scores), "--labels", s(&labels), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102);
    let row = csv.lines().find(|l| l.starts_with("0.5,")).unwrap();
    let f: Vec<f64> = row.split(',').take(4).map(|v| v.parse().unwrap()).collect();
    assert!((f[1] - 2.0 / 3.0).abs() < 1e-12 && (f[3] - 2.0 / 3.0).abs() < 1e-12);
    assert!(fs::read_to_string(out.join("curves.svg")).unwrap().starts_with("<svg"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("sweep_summary.json")).unwrap()).unwrap();
    assert!((summary["auc"].as_f64().unwrap() - 8.0 / 9.0).abs() < 1e-12);
}

#[test]
fn eval_severity_and_ap() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    let body: String = std::iter::once("metric\n".to_string())
        .chain((1..=100).map(|v| format!("{v}\n")))
        .collect();
    fs::write(&m, body).unwrap();
    let out = dir.path().join("sev");
    assert_eq!(code(&run(&["eval", "severity", "--metrics", s(&m), "--out", s(&out)])), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("severity.json")).unwrap()).unwrap();
    let cuts: Vec<f64> = v["table"]["cut_points"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((cuts[0] - 50.5).abs() < 1e-9 && (cuts[1] - 75.25).abs() < 1e-9 && (cuts[2] - 90.1).abs() < 1e-9);

    let (pred, gt) = (dir.path().join("pred"), dir.path().join("gt"));
    fs::create_dir_all(&pred).unwrap();
    fs::create_dir_all(&gt).unwrap();
    let g = OrientedBox::new(320.0, 320.0, 200.0, 10.0, 0.2);
    write_obb_labels(&[TileLabel { class_id: 0, obb: g }], (640, 640), &gt.join("t.txt")).unwrap();
    let far = OrientedBox::new(100.0, 100.0, 50.0, 10.0, 0.0);
    write_label_lines(
        &[
            LabelLine { label: TileLabel { class_id: 0, obb: far }, score: Some(0.9) },
            LabelLine { label: TileLabel { class_id: 0, obb: g }, score: Some(0.6) },
        ],
        (640, 640),
        &pred.join("t.txt"),
    )
    .unwrap();
    let out = dir.path().join("ap");
    let o = run(&["eval", "ap", "--pred", s(&pred), "--gt", s(&gt), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("ap.json")).unwrap()).unwrap();
    assert!((v["ap50"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn filters_commands() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    assert_eq!(code(&run(&["filters", "export", "--out", s(&w)])), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(v["layers"].as_array().unwrap().len(), 3);

    let bank = dir.path().join("bank");
    assert_eq!(code(&run(&["filters", "build", "--out", s(&bank)])), 0);
    assert!(bank.join("highpass_bank.json").exists());

    let resp = dir.path().join("resp");
    assert_eq!(code(&run(&["filters", "respond", "--grid", "32", "--out", s(&resp)])), 0);
    assert_eq!(fs::read_to_string(resp.join("hp_dir0.csv")).unwrap().lines().count(), 32);

    let img = dir.path().join("line.png");
    save_raster(&img, &synth::line_image(64, 32.0, 32.0, 45.0, 1.0, None)).unwrap();
    let out = dir.path().join("out.png");
    let o = run(&["filters", "apply", "--image", s(&img), "--weights", s(&w), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = linewatch::imaging::load_raster(&out).unwrap();
    assert_eq!((r.width(), r.height(), r.channels()), (64, 64, 3));
}

#[test]
fn dataset_convert_tile_split() {
    let dir = tempfile::tempdir().unwrap();
    let imgs = dir.path().join("frames");
    fs::create_dir_all(&imgs).unwrap();
    let mut images = Vec::new();
    let mut anns = Vec::new();
    for k in 0..10 {
        let img = linewatch::imaging::RasterImage::filled(1280, 720, &[90, 120, 90]).unwrap();
        save_raster(&imgs.join(format!("f{k}.png")), &img).unwrap();
        images.push(serde_json::json!({"id": k, "file_name": format!("f{k}.png"), "width": 1280, "height": 720}));
        let y = 100.0 + 50.0 * k as f64;
        anns.push(serde_json::json!({"image_id": k, "category_id": 1,
            "segmentation": [[10.0, y, 1200.0, y + 20.0, 1200.0, y + 26.0, 10.0, y + 6.0]]}));
        anns.push(serde_json::json!({"image_id": k, "category_id": 2,
            "segmentation": [[0, 0, 50, 0, 50, 50]]}));
    }
    let coco = dir.path().join("coco.json");
    let doc = serde_json::json!({"images": images, "annotations": anns,
        "categories": [{"id": 1, "name": "cable"}, {"id": 2, "name": "tower_wooden"}]});
    fs::write(&coco, doc.to_string()).unwrap();

    let conv = dir.path().join("conv");
    assert_eq!(code(&run(&["dataset", "convert", "--annotations", s(&coco), "--out", s(&conv)])), 0);
    let lbl = fs::read_to_string(conv.join("labels/f0.txt")).unwrap();
    assert_eq!(lbl.lines().count(), 1);

    let tiles = dir.path().join("tiles");
    let o = run(&["dataset", "tile", "--annotations", s(&coco), "--images", s(&imgs), "--out", s(&tiles)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(tiles.join("tiles.json")).unwrap()).unwrap();
    assert!(recs.len() >= 20);
    assert!(tiles.join("images/f0_0_0.png").exists());

    let sp = dir.path().join("split");
    let run_split = |seed: &str, out: &Path| {
        run(&["dataset", "split", "--tiles", s(&tiles.join("tiles.json")), "--seed", seed, "--out", s(out)])
    };
    assert_eq!(code(&run_split("4", &sp)), 0);
    let sp2 = dir.path().join("split2");
    assert_eq!(code(&run_split("4", &sp2)), 0);
    assert_eq!(fs::read(sp.join("split.json")).unwrap(), fs::read(sp2.join("split.json")).unwrap());
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(sp.join("split.json")).unwrap()).unwrap();
    let total: usize = ["train", "val", "test"].iter().map(|k| m[k].as_array().unwrap().len()).sum();
    assert_eq!(total, recs.len());
    assert_eq!(code(&run(&["dataset", "split", "--tiles", s(&tiles.join("tiles.json")), "--ratios", "8:1"])), 64);
}
