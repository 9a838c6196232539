use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use snell_fagnano::geometry::{Point2, Triangle};

fn sf(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn run(command: &str, job: &str) -> (i32, Value) {
    let out = sf(&[command], Some(job));
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

fn point(v: &Value) -> Point2 {
    Point2::new(v["x"].as_f64().unwrap(), v["y"].as_f64().unwrap())
}

fn corpus(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", rel].iter().collect();
    p.display().to_string()
}

#[test]
fn point_equilateral_is_centroid() {
    let (code, doc) = run("point", r#"{"triangle":{"sides":[1,1,1]}}"#);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "interior");
    let f = point(&doc["outputs"]["point"]["cartesian"]);
    let g = Triangle::from_sides(1.0, 1.0, 1.0).unwrap().centroid();
    assert!(f.dist(g) < 1e-12);
}

#[test]
fn point_obtuse_is_degenerate_with_fallback() {
    let (code, doc) = run("point", r#"{"triangle":{"sides":[7,4,4]}}"#);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "degenerate");
    let fb = &doc["outputs"]["fallback"];
    assert!(fb["weighted_choice"].is_string());
    assert!(fb["brute_force"]["flatness"].as_f64().unwrap() < 1e-3);
}

#[test]
fn point_456_is_orthocenter() {
    let (code, doc) = run("point", r#"{"triangle":{"sides":[4,5,6]}}"#);
    assert_eq!(code, 0);
    let v = &doc["outputs"]["triangle"]["vertices"];
    let [a, b, c] = [point(&v[0]), point(&v[1]), point(&v[2])];
    // altitude intersection oracle
    let ha = c - b;
    let hb = a - c;
    let h = snell_fagnano::geometry::line_intersection(a, a + ha.perp(), b, b + hb.perp()).unwrap();
    let f = point(&doc["outputs"]["point"]["cartesian"]);
    assert!(f.dist(h) < 1e-10 * 6.0);
}

#[test]
fn no_tilde_triangle_exits_three() {
    let out = sf(&["point"], Some(r#"{"triangle":{"sides":[1,1,1]},"weights":[1,1,5]}"#));
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("λC·c < λA·a + λB·b fails"), "{err}");
}

#[test]
fn invalid_jobs_exit_two() {
    for job in [
        "not json",
        r#"{"triangle":{"sides":[1,1,3]}}"#,
        r#"{"triangle":{"sides":[1,1,1]},"weights":[1,0,1]}"#,
        r#"{"weights":[1,1,1]}"#,
        r#"{"triangle":{"vertices":[[0,0],[1,1],[2,2]]}}"#,
        r#"{"triangle":{"sides":[1,1,1]},"bogus":1}"#,
    ] {
        let (code, doc) = run("point", job);
        assert_eq!(code, 2, "{job}");
        assert_eq!(doc["status"], "error");
    }
}

#[test]
fn convert_examples() {
    let (code, doc) = run("convert", r#"{"triangle":{"sides":[4,5,6]},"coords":{"kind":"tripolar","values":[1,1,1]}}"#);
    assert_eq!(code, 0);
    let cands = doc["outputs"]["candidates"].as_array().unwrap();
    assert_eq!(cands.len(), 1);
    let tp: Vec<f64> = cands[0]["tripolar"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((tp[0] - tp[1]).abs() < 1e-9 && (tp[1] - tp[2]).abs() < 1e-9);

    let (code, doc) = run("convert", r#"{"triangle":{"sides":[4,5,6]},"coords":{"kind":"trilinear","values":[1,1,1]}}"#);
    assert_eq!(code, 0);
    let bc: Vec<f64> = doc["outputs"]["candidates"][0]["barycentric_normalized"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (x, s) in bc.iter().zip([4.0, 5.0, 6.0]) {
        assert!((x - s / 15.0).abs() < 1e-12);
    }
}

#[test]
fn unrealizable_tripolar_exits_three() {
    // oracle scan: no point of a wide grid comes close to the ratios 1 : 1 : 10
    let tri = Triangle::from_sides(1.0, 1.0, 1.0).unwrap();
    let mut best = f64::INFINITY;
    for i in -200..=200 {
        for j in -200..=200 {
            let p = Point2::new(i as f64 * 0.05, j as f64 * 0.05);
            let d = tri.vertices().map(|v| p.dist(v));
            let s = d[0] + d[1] + d[2];
            let dev = (d[0] / s - 1.0 / 12.0).abs() + (d[1] / s - 1.0 / 12.0).abs() + (d[2] / s - 10.0 / 12.0).abs();
            best = best.min(dev);
        }
    }
    assert!(best > 0.1);
    let (code, doc) = run("convert", r#"{"triangle":{"sides":[1,1,1]},"coords":{"kind":"tripolar","values":[1,1,10]}}"#);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "nonexistence");
}

#[test]
fn simulate_examples() {
    let (code, doc) = run("simulate", &std::fs::read_to_string(corpus("simulate/orbit.json")).unwrap());
    assert_eq!(code, 0);
    assert_eq!(doc["outputs"]["periodic"], true);

    // classical Fagnano: mirror billiard from an orthic vertex
    let tri = Triangle::from_sides(4.0, 5.0, 6.0).unwrap();
    let [a, b, c] = tri.vertices();
    let ha = snell_fagnano::geometry::foot_of_perpendicular(a, b, c).unwrap();
    let hb = snell_fagnano::geometry::foot_of_perpendicular(b, c, a).unwrap();
    let t = snell_fagnano::geometry::line_param(ha, b, c);
    let job = format!(
        r#"{{"triangle":{{"sides":[4,5,6]}},"kappa":[1,1,1],"start":{{"side":"a","param":{t:e},"toward":[{:e},{:e}]}},"steps":3}}"#,
        hb.x, hb.y
    );
    let (code, doc) = run("simulate", &job);
    assert_eq!(code, 0);
    assert_eq!(doc["outputs"]["periodic"], true);

    let (code, doc) = run("simulate", &std::fs::read_to_string(corpus("simulate/random_start.json")).unwrap());
    assert_eq!(code, 0);
    assert_eq!(doc["outputs"]["trajectory"].as_array().unwrap().len(), 51);
    assert_eq!(doc["outputs"]["periodic"], false);
}

#[test]
fn simulate_failure_exits_four_with_step() {
    let (code, doc) = run(
        "simulate",
        r#"{"triangle":{"sides":[1,1,1]},"kappa":[0.1,10,1],"start":{"side":"c","param":0.5,"direction":[1,0.3]},"steps":20}"#,
    );
    assert_eq!(code, 4);
    assert!(doc["error"]["message"].as_str().unwrap().contains("step"));
}

#[test]
fn minimize_compares_with_construction() {
    let (code, doc) = run("minimize", &std::fs::read_to_string(corpus("minimize/weighted.json")).unwrap());
    assert_eq!(code, 0);
    let gap = doc["outputs"]["comparison"]["relative_gap"].as_f64().unwrap();
    assert!(gap.abs() < 1e-6);
}

#[test]
fn river_solution() {
    let (code, doc) = run("river", &std::fs::read_to_string(corpus("river/weighted.json")).unwrap());
    assert_eq!(code, 0);
    assert!(doc["outputs"]["solution"]["snell_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn render_layers_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.svg");
    let p2 = dir.path().join("b.svg");
    let job = corpus("render/main_construction.json");
    for p in [&p1, &p2] {
        let out = sf(&["render", "--input", &job, "--svg", p.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(0));
    }
    let s1 = std::fs::read(&p1).unwrap();
    assert_eq!(s1, std::fs::read(&p2).unwrap());
    let svg = String::from_utf8(s1).unwrap();
    let layer = |id: &str| svg.split(&format!(r#"<g id="{id}""#)).nth(1).unwrap().split("</g>").next().unwrap().to_string();
    assert_eq!(layer("erected").matches("<polygon").count(), 3);
    assert_eq!(layer("cevians").matches("<line").count(), 3);
    assert!(svg.contains("stroke-dasharray"));
    // two common points of the weight circles
    assert_eq!(layer("apollonian").matches(r#"r="4""#).count(), 2);
}

#[test]
fn render_uniform_weights_draws_orthic_triangle() {
    let out = sf(&["render", "--input", &corpus("render/orthic.json")], None);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains(r#"<g id="orbit""#));
    // the orbit vertices are the altitude feet, drawn at their mapped positions
    let (code, doc) = run("point", r#"{"triangle":{"sides":[4,5,6]}}"#);
    assert_eq!(code, 0);
    let tri = Triangle::from_sides(4.0, 5.0, 6.0).unwrap();
    let feet = snell_fagnano::geometry::altitudes(&tri);
    let pts = doc["outputs"]["orbit"]["points"].as_array().unwrap();
    for (p, f) in pts.iter().zip(feet) {
        assert!(point(p).dist(f.foot) < 1e-10);
    }
}

#[test]
fn unwritable_svg_path_exits_five() {
    let out = sf(
        &["render", "--input", &corpus("render/orthic.json"), "--svg", "/nonexistent/dir/x.svg"],
        None,
    );
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn batch_preserves_order_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jobs.jsonl");
    let mut lines = Vec::new();
    for i in 0..20 {
        lines.push(format!(r#"{{"triangle":{{"sides":[4,5,{}]}}}}"#, 3.0 + 0.2 * i as f64));
    }
    lines.insert(7, r#"{"triangle":{"sides":[1,1,9]}}"#.into());
    std::fs::write(&path, lines.join("\n")).unwrap();
    let out = sf(&["point", "--batch", path.to_str().unwrap(), "--jobs", "3"], None);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let docs: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(docs.len(), 21);
    assert_eq!(docs[7]["status"], "error");
    for (i, d) in docs.iter().enumerate().filter(|(i, _)| *i != 7) {
        let k = if i < 7 { i } else { i - 1 };
        let c = d["job"]["triangle"]["sides"][2].as_f64().unwrap();
        assert!((c - (3.0 + 0.2 * k as f64)).abs() < 1e-12);
    }
}

#[test]
fn tolerance_flag_and_config_are_echoed() {
    let out = sf(&["point", "--tol", "1e-7"], Some(r#"{"triangle":{"sides":[4,5,6]}}"#));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["tolerances"]["residual"].as_f64(), Some(1e-7));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tol.json");
    std::fs::write(&cfg, r#"{"concurrency": 1e-6}"#).unwrap();
    let out = sf(&["point", "--config", cfg.to_str().unwrap()], Some(r#"{"triangle":{"sides":[4,5,6]}}"#));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["tolerances"]["concurrency"].as_f64(), Some(1e-6));
    assert_eq!(doc["tolerances"]["residual"].as_f64(), Some(1e-10));

    let out = sf(&["point", "--config", "/nonexistent.json"], Some("{}"));
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (cmd, file) in [("point", "point/weighted_scalene.json"), ("convert", "convert/tripolar_two_points.json")] {
        let a = sf(&[cmd, "--input", &corpus(file)], None);
        let b = sf(&[cmd, "--input", &corpus(file)], None);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}
