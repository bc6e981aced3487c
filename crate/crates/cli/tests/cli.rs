use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn locsamp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locsamp")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path) {
    let text = "graph.n = 60\ngraph.radius = 0.3\nk = 4\nkernel = 1; 1,1\ntrials = 10\nm.grid = 8, 16, 40\n\
                distributions = uniform, optimal, reordered-optimal\nout.dir = out\n";
    fs::write(dir.join("run.conf"), text).unwrap();
}

fn assert_ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sample_then_reconstruct_recovers_signal() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path());
    assert_ok(&locsamp(tmp.path(), &["-c", "run.conf", "sample", "--m", "30", "--distribution", "optimal"]));
    let out = locsamp(
        tmp.path(),
        &[
            "-c",
            "run.conf",
            "reconstruct",
            "--plan",
            "out/plan.csv",
            "--decoder",
            "bandlimited-ls",
            "--truth",
            "out/signal.csv",
        ],
    );
    assert_ok(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let err: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("relative error "))
        .expect("relative error reported")
        .parse()
        .unwrap();
    assert!(err < 1e-8, "relative error {err}");
    let recon = fs::read_to_string(tmp.path().join("out/reconstruction.csv")).unwrap();
    assert_eq!(recon.lines().next(), Some("vertex,value"));
    assert_eq!(recon.lines().count(), 61);
}

#[test]
fn curves_and_distributions_are_written() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path());
    for cmd in ["gen-graph", "dist", "fm-curve", "error-curve"] {
        assert_ok(&locsamp(tmp.path(), &["-c", "run.conf", cmd]));
    }
    let out = tmp.path().join("out");
    for name in [
        "graph.txt",
        "coords.txt",
        "dist_1_uniform.csv",
        "dist_1_1_reordered-optimal.csv",
        "fm_curve.csv",
        "error_curve.csv",
    ] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let fm = fs::read_to_string(out.join("fm_curve.csv")).unwrap();
    assert_eq!(fm.lines().next(), Some("kernel,distribution,m,f_m,trials,std_error,failures"));
    // 2 kernels x 3 distributions x 3 grid points
    assert_eq!(fm.lines().count(), 1 + 18);
}

#[test]
fn invalid_config_fails_with_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.conf"), "k = 3\ndelta = oops\n").unwrap();
    let out = locsamp(tmp.path(), &["-c", "bad.conf", "gen-graph"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.conf") && stderr.contains('2'), "stderr: {stderr}");
}

#[test]
fn image_without_path_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = locsamp(tmp.path(), &["image"]);
    assert!(!out.status.success());
}
