//! End-to-end tests driving the compiled binary through every subcommand.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use covhuseg::mask_io::{self, BinaryMask};
use covhuseg::metrics;
use covhuseg::perturb::{self, DegradeSpec, SynthSpec};
use tempfile::TempDir;

fn covhuseg_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covhuseg"))
}

fn run(args: &[&str]) -> Output {
    covhuseg_cmd().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

/// A non-convex L shape whose hull fill adds pixels.
fn l_shape(width: u32, height: u32) -> BinaryMask {
    let mut mask = BinaryMask::new(width, height);
    for y in 2..height - 2 {
        mask.set(2, y, true);
    }
    for x in 2..width - 2 {
        mask.set(x, height - 3, true);
    }
    mask
}

fn write_masks(dir: &Path, count: u32) -> Vec<String> {
    fs::create_dir_all(dir).unwrap();
    let mut names = Vec::new();
    for i in 0..count {
        let name = format!("mask_{i}.pgm");
        let mask = l_shape(12 + i, 12 + 2 * i);
        mask_io::save_mask(&mask, dir.join(&name)).unwrap();
        names.push(name);
    }
    names
}

#[test]
fn empty_input_dir_processes_zero_files() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    fs::create_dir_all(&in_dir).unwrap();
    let out = run_ok(&[
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&tmp.path().join("out")),
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("processed 0/0 files"), "stdout: {stdout}");
}

#[test]
fn process_writes_supersets_for_every_mask() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    let out_dir = tmp.path().join("out");
    let names = write_masks(&in_dir, 3);
    run_ok(&[
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&out_dir),
    ]);
    for name in &names {
        let original = mask_io::load_mask(in_dir.join(name)).unwrap();
        let processed = mask_io::load_mask(out_dir.join(name)).unwrap();
        assert!(original.is_subset_of(&processed), "{name} lost pixels");
        assert!(
            processed.count_foreground() > original.count_foreground(),
            "{name} is an L shape, its hull must add pixels"
        );
    }
}

#[test]
fn corrupt_input_fails_that_file_only() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    let out_dir = tmp.path().join("out");
    write_masks(&in_dir, 2);
    fs::write(in_dir.join("broken.png"), b"not an image at all").unwrap();
    let out = run(&[
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&out_dir),
    ]);
    assert_eq!(exit_code(&out), 1, "partial failure must exit 1");
    let written: Vec<_> = fs::read_dir(&out_dir).unwrap().collect();
    assert_eq!(written.len(), 2, "the two good masks are still processed");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("broken.png"),
        "stderr names the bad file: {stderr}"
    );
}

#[test]
fn job_count_does_not_change_outputs() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    let names = write_masks(&in_dir, 6);
    let serial = tmp.path().join("serial");
    let parallel = tmp.path().join("parallel");
    run_ok(&[
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&serial),
        "--jobs",
        "1",
    ]);
    run_ok(&[
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&parallel),
        "--jobs",
        "4",
    ]);
    for name in &names {
        let a = fs::read(serial.join(name)).unwrap();
        let b = fs::read(parallel.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between job counts");
    }
}

#[test]
fn flags_override_config_file_entries() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    write_masks(&in_dir, 1);
    let config = tmp.path().join("covhuseg.conf");
    fs::write(
        &config,
        "min-component-area=10000\n# everything is smaller than that\n",
    )
    .unwrap();

    let from_config = tmp.path().join("out_config");
    run_ok(&[
        "--config",
        path_str(&config),
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&from_config),
    ]);
    let emptied = mask_io::load_mask(from_config.join("mask_0.pgm")).unwrap();
    assert_eq!(
        emptied.count_foreground(),
        0,
        "config filter drops every component"
    );

    let from_flag = tmp.path().join("out_flag");
    run_ok(&[
        "--config",
        path_str(&config),
        "process",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&from_flag),
        "--min-component-area",
        "0",
    ]);
    let kept = mask_io::load_mask(from_flag.join("mask_0.pgm")).unwrap();
    assert!(
        kept.count_foreground() > 0,
        "explicit flag wins over the config file"
    );
}

fn build_split_fixture(root: &Path) {
    let mask = l_shape(8, 8);
    for group in ["normal", "DN"] {
        for subject in ["s1", "s2"] {
            let img = root.join(group).join(subject).join("img");
            let gt = root.join(group).join(subject).join("mask");
            fs::create_dir_all(&img).unwrap();
            fs::create_dir_all(&gt).unwrap();
            for patch in 0..4 {
                mask_io::save_mask(&mask, img.join(format!("p{patch}.pgm"))).unwrap();
                mask_io::save_mask(&mask, gt.join(format!("p{patch}.pgm"))).unwrap();
            }
        }
    }
}

#[test]
fn split_reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let root = tmp.path().join("data");
    build_split_fixture(&root);
    let first = tmp.path().join("a.csv");
    let second = tmp.path().join("b.csv");
    for out in [&first, &second] {
        run_ok(&[
            "split",
            "--root",
            path_str(&root),
            "--split",
            "A",
            "--seed",
            "42",
            "--out",
            path_str(out),
        ]);
    }
    let a = fs::read(&first).unwrap();
    let b = fs::read(&second).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "same seed, same manifest bytes");
}

#[test]
fn zero_std_noise_reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    write_masks(&in_dir, 3);
    let first = tmp.path().join("n1");
    let second = tmp.path().join("n2");
    for out in [&first, &second] {
        run_ok(&[
            "noise",
            "--in-dir",
            path_str(&in_dir),
            "--out-dir",
            path_str(out),
            "--std",
            "0",
            "--seed",
            "9",
        ]);
    }
    for i in 0..3 {
        let name = format!("mask_{i}.pgm");
        let a = fs::read(first.join(&name)).unwrap();
        let b = fs::read(second.join(&name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
        let reread = mask_io::load_mask(first.join(&name)).unwrap();
        assert_eq!(
            reread,
            l_shape(12 + i, 12 + 2 * i),
            "std=0 must not move any pixel"
        );
    }
}

#[test]
fn evaluate_perfect_predictions_reports_no_increase() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("masks");
    fs::create_dir_all(&dir).unwrap();
    // Convex ground truths evaluated against themselves: the pipeline is a
    // no-op, so both columns are 1.000 and the increase is exactly zero.
    for i in 0..3u32 {
        let mut mask = BinaryMask::new(10, 10);
        for y in 2..5 + i {
            for x in 2..5 + i {
                mask.set(x, y, true);
            }
        }
        mask_io::save_mask(&mask, dir.join(format!("m{i}.pgm"))).unwrap();
    }
    let report = tmp.path().join("report.csv");
    run_ok(&[
        "evaluate",
        "--pred-dir",
        path_str(&dir),
        "--gt-dir",
        path_str(&dir),
        "--report",
        path_str(&report),
    ]);
    let rows = metrics::read_report_csv(&report).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].mean_without, 1.0);
    assert_eq!(rows[0].mean_with, 1.0);
    assert_eq!(rows[0].increase, 0.0);
    assert_eq!(rows[0].increase_pct, 0.0);
}

#[test]
fn dimension_mismatch_flags_the_pair_and_scores_the_rest() {
    let tmp = TempDir::new().unwrap();
    let pred_dir = tmp.path().join("pred");
    let gt_dir = tmp.path().join("gt");
    fs::create_dir_all(&pred_dir).unwrap();
    fs::create_dir_all(&gt_dir).unwrap();
    for name in ["a.pgm", "b.pgm"] {
        mask_io::save_mask(&l_shape(10, 10), pred_dir.join(name)).unwrap();
        mask_io::save_mask(&l_shape(10, 10), gt_dir.join(name)).unwrap();
    }
    mask_io::save_mask(&l_shape(8, 8), pred_dir.join("bad.pgm")).unwrap();
    mask_io::save_mask(&l_shape(16, 16), gt_dir.join("bad.pgm")).unwrap();

    let report = tmp.path().join("report.csv");
    let out = run(&[
        "evaluate",
        "--pred-dir",
        path_str(&pred_dir),
        "--gt-dir",
        path_str(&gt_dir),
        "--report",
        path_str(&report),
    ]);
    assert_eq!(exit_code(&out), 1, "flagged pair means partial failure");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("bad"),
        "stderr names the mismatched pair: {stderr}"
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("evaluated 2 pairs, 1 skipped"),
        "stdout: {stdout}"
    );
    assert!(report.exists(), "good pairs still produce a report");
}

#[test]
fn unpaired_files_are_reported() {
    let tmp = TempDir::new().unwrap();
    let pred_dir = tmp.path().join("pred");
    let gt_dir = tmp.path().join("gt");
    fs::create_dir_all(&pred_dir).unwrap();
    fs::create_dir_all(&gt_dir).unwrap();
    for name in ["a.pgm", "only_pred.pgm"] {
        mask_io::save_mask(&l_shape(10, 10), pred_dir.join(name)).unwrap();
    }
    for name in ["a.pgm", "only_gt.pgm"] {
        mask_io::save_mask(&l_shape(10, 10), gt_dir.join(name)).unwrap();
    }
    let out = run(&[
        "evaluate",
        "--pred-dir",
        path_str(&pred_dir),
        "--gt-dir",
        path_str(&gt_dir),
        "--report",
        path_str(&tmp.path().join("report.csv")),
    ]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("only_pred"), "stderr: {stderr}");
    assert!(stderr.contains("only_gt"), "stderr: {stderr}");
}

#[test]
fn synth_then_evaluate_matches_the_library_experiment() {
    let tmp = TempDir::new().unwrap();
    let synth_dir = tmp.path().join("synth");
    run_ok(&[
        "synth",
        "--out-dir",
        path_str(&synth_dir),
        "--trials",
        "20",
        "--seed",
        "7",
        "--degrade-seed",
        "11",
        "--hole-count",
        "2",
        "--hole-radius-range",
        "1..2",
    ]);
    let report = tmp.path().join("report.csv");
    run_ok(&[
        "evaluate",
        "--pred-dir",
        path_str(&synth_dir.join("pred")),
        "--gt-dir",
        path_str(&synth_dir.join("gt")),
        "--report",
        path_str(&report),
        "--model-tag",
        "synthetic",
    ]);

    let synth_spec = SynthSpec {
        seed: 7,
        ..SynthSpec::default()
    };
    let deg_spec = DegradeSpec {
        hole_count: 2,
        hole_radius_range: (1, 2),
        seed: 11,
        ..DegradeSpec::default()
    };
    let expected = perturb::improvement_experiment(
        &synth_spec,
        &deg_spec,
        20,
        &covhuseg::PipelineConfig::default(),
    )
    .unwrap();
    let expected_csv = metrics::report_to_csv(std::slice::from_ref(&expected));
    let actual_csv = fs::read_to_string(&report).unwrap();
    assert_eq!(
        actual_csv, expected_csv,
        "command route and library route disagree"
    );
    assert!(
        expected.increase > 0.0,
        "holes must cost the raw predictions something"
    );
}

#[test]
fn noise_changes_pixels_deterministically_per_seed() {
    let tmp = TempDir::new().unwrap();
    let in_dir = tmp.path().join("in");
    write_masks(&in_dir, 2);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run_ok(&[
        "noise",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&a),
        "--seed",
        "1",
    ]);
    run_ok(&[
        "noise",
        "--in-dir",
        path_str(&in_dir),
        "--out-dir",
        path_str(&b),
        "--seed",
        "2",
    ]);
    let bytes_a = fs::read(a.join("mask_0.pgm")).unwrap();
    let bytes_b = fs::read(b.join("mask_0.pgm")).unwrap();
    assert_ne!(bytes_a, bytes_b, "different seeds produce different noise");
    let original = fs::read(in_dir.join("mask_0.pgm")).unwrap();
    assert_ne!(bytes_a, original, "default std visibly perturbs the image");
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = run(&["evaluate", "--pred-dir", "/nowhere"]);
    assert_eq!(
        exit_code(&out),
        2,
        "missing required ground-truth source is a usage error"
    );
    let out = run(&["frobnicate"]);
    assert_eq!(exit_code(&out), 2, "unknown subcommand is a usage error");
}
