use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mft(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mftransfer"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("spawn mftransfer")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = mft(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mesh_gen_info_and_derive() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(d, &["mesh", "gen", "--nx", "49", "--ny", "49", "--bounds", "-1,1,-1,1", "-o", "a.mesh"]);
    assert!(out.contains("2500 nodes, 4802 elements"), "{out}");
    assert!(d.join("a.mesh.config").exists());

    ok(d, &["mesh", "gen", "--nx", "1", "-o", "quad.mesh"]);
    let info = ok(d, &["mesh", "info", "--in", s(&d.join("quad.mesh"))]);
    assert!(info.starts_with("4 nodes, 2 elements"), "{info}");

    let out = ok(d, &["mesh", "derive", "--in", s(&d.join("quad.mesh")), "-o", "b.mesh"]);
    assert!(out.contains("6 nodes"), "{out}");

    let out = ok(d, &["mesh", "gen", "--nx", "99", "--bounds", "0,1", "-o", "line.mesh"]);
    assert!(out.contains("100 nodes, 99 elements"), "{out}");

    let out = ok(d, &["mesh", "gen", "--density", "moving_gauss", "--target", "300", "-o", "g.mesh"]);
    assert!(out.contains("300 nodes"), "{out}");
}

#[test]
fn echo_reproduces_the_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--seed", "4", "mesh", "gen", "--density", "osc2d", "--target", "120", "-o", "g.mesh"]);
    let echo = fs::read_to_string(d.join("g.mesh.config")).unwrap();
    assert!(echo.starts_with("# mftransfer mesh gen\n"));
    assert!(echo.contains("seed=4\n") && echo.contains("target=120\n"));

    let again = d.join("again");
    let cfg = d.join("g.mesh.config");
    let out = mft(&again, &["mesh", "gen", "--config", s(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(d.join("g.mesh")).unwrap(), fs::read(again.join("g.mesh")).unwrap());

    ok(&again, &["mesh", "gen", "--config", s(&cfg), "--target", "90", "-o", "h.mesh"]);
    let echo = fs::read_to_string(again.join("h.mesh.config")).unwrap();
    assert!(echo.contains("target=90\n") && echo.contains("seed=4\n"), "{echo}");
}

#[test]
fn fit_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["mesh", "gen", "--nx", "20", "-o", "a.mesh"]);
    let data = d.join("osc.csv");
    ok(d, &["dataset", "sample", "--mesh", s(&d.join("a.mesh")), "--field", "osc2d", "-o", s(&data)]);

    let before = fs::read(&data).unwrap();
    let fit = ok(d, &["fit", "elm", "--data", s(&data), "--arch", "2,32,200,1", "--range", "2", "-o", "elm.surrogate"]);
    let residual: f64 = fit
        .split("residual ")
        .nth(1)
        .and_then(|t| t.split(',').next())
        .unwrap()
        .parse()
        .unwrap();

    let out = ok(d, &[
        "eval", "--model", s(&d.join("elm.surrogate")), "--targets", s(&data), "--truth", "osc2d", "-o", "p.csv",
    ]);
    assert!(out.contains("441 predictions, mae "), "{out}");
    assert_eq!(fs::read(&data).unwrap(), before);
    let pred = fs::read_to_string(d.join("p.csv")).unwrap();
    let truth = fs::read_to_string(&data).unwrap();
    let ss: f64 = pred
        .lines()
        .zip(truth.lines())
        .skip(1)
        .map(|(p, t)| {
            let p: f64 = p.rsplit(',').next().unwrap().parse().unwrap();
            let t: f64 = t.rsplit(',').next().unwrap().parse().unwrap();
            (p - t).powi(2)
        })
        .sum();
    assert!((ss.sqrt() - residual).abs() <= 1e-5 * residual, "{} vs {residual}", ss.sqrt());

    fs::write(d.join("empty.csv"), "x,y\n").unwrap();
    let out = ok(d, &["eval", "--model", s(&d.join("elm.surrogate")), "--targets", s(&d.join("empty.csv")), "-o", "e.csv"]);
    assert!(out.contains("0 predictions"));
    assert_eq!(fs::read_to_string(d.join("e.csv")).unwrap(), "x,y,value\n");

    fs::write(d.join("line.csv"), "x\n0.5\n").unwrap();
    let out = mft(d, &["eval", "--model", s(&d.join("elm.surrogate")), "--targets", s(&d.join("line.csv"))]);
    assert_eq!(code(&out), 2);

    let out = ok(d, &["fit", "rbf-elm", "--data", s(&data), "--nc", "100", "--eps", "5", "-o", "rbf.surrogate"]);
    assert!(out.contains("rbf_elm model"), "{out}");
    ok(d, &["fit", "mlp", "--data", s(&data), "--arch", "2,8,1", "--iters", "20", "--history", "h.csv", "-o", "m.surrogate"]);
    assert_eq!(fs::read_to_string(d.join("h.csv")).unwrap().lines().count(), 21);
    ok(d, &["fit", "mlp", "--data", s(&data), "--init", s(&d.join("m.surrogate")), "--iters", "5", "-o", "m2.surrogate"]);
}

#[test]
fn enrichment_and_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["mesh", "gen", "--nx", "4", "-o", "a.mesh"]);
    let mesh = d.join("a.mesh");
    ok(d, &["dataset", "sample", "--mesh", s(&mesh), "--field", "paraboloid2d", "-o", "n.csv"]);
    let out = ok(d, &["dataset", "enrich", "--mesh", s(&mesh), "--data", s(&d.join("n.csv")), "--points", "3", "-o", "e.csv"]);
    assert!(out.contains(&format!("{} samples", 25 + 3 * 32)), "{out}");

    ok(d, &["baseline", "sample", "--mesh", s(&mesh), "--field", "paraboloid2d", "-o", "v.field"]);
    let out = ok(d, &["baseline", "eval", "--values", s(&d.join("v.field")), "--targets", s(&mesh), "--truth", "paraboloid2d"]);
    assert!(out.contains("mae 0.000000e0"), "{out}");
}

#[test]
fn transfer_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["transfer", "--field", "sine1d", "--iters", "3", "--methods", "pl,rbf-elm", "--nc", "50", "--eps", "20"];
    ok(d, &[&args[..], &["-o", "r1.csv"]].concat());
    ok(d, &[&args[..], &["-o", "r2.csv"]].concat());
    let r1 = fs::read(d.join("r1.csv")).unwrap();
    assert_eq!(r1, fs::read(d.join("r2.csv")).unwrap());
    assert_eq!(String::from_utf8(r1).unwrap().lines().count(), 1 + 2 * 6);
    assert!(d.join("r1.csv.run").exists());

    ok(d, &["mesh", "gen", "--nx", "6", "-o", "a.mesh"]);
    let a = d.join("a.mesh");
    ok(d, &["transfer", "--mesh-a", s(&a), "--mesh-b", s(&a), "--field", "osc2d", "--iters", "1", "--methods", "pl", "-o", "z.csv"]);
    let z = fs::read_to_string(d.join("z.csv")).unwrap();
    for row in z.lines().skip(1) {
        let errs: Vec<f64> = row.rsplit(',').take(2).map(|v| v.parse().unwrap()).collect();
        assert_eq!(errs, [0.0, 0.0], "{row}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let missing = d.join("nope.csv");
    let out = mft(d, &["fit", "rbf-elm", "--data", s(&missing), "--nc", "300", "--eps", "60"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));

    assert_eq!(code(&mft(d, &["mesh", "gen", "--bogus"])), 2);
    assert_eq!(code(&mft(d, &["mesh", "gen", "--nx", "0"])), 2);
    assert_eq!(code(&mft(d, &["transfer", "--field", "sine1d", "--methods", "magic"])), 2);

    ok(d, &["mesh", "gen", "--nx", "5", "-o", "a.mesh"]);
    ok(d, &["dataset", "sample", "--mesh", s(&d.join("a.mesh")), "--field", "osc2d", "-o", "o.csv"]);
    let out = mft(d, &["fit", "mlp", "--data", s(&d.join("o.csv")), "--arch", "2,4,1", "--lr", "1e300", "--iters", "50"]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
    assert!(!d.join("model.surrogate").exists());
}
