use std::process::{Command, Output};

const EX4_FN: &str = "piece(-1 <= t < 0: [t, t+1]); piece(t == 0: [1,2]); piece(t >= 1: [t, t^2+1])";

fn tscalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tscalc"))
        .args(args)
        .env_remove("TSCALC_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn ex4_args(json: bool) -> Vec<&'static str> {
    let mut a = vec![
        "integrate", "--kind", "ir", "--scale", "interval(-1,0) u geom(3,1,3)", "--fn", EX4_FN, "--from", "-1", "--to", "3",
    ];
    if json {
        a.push("--json");
    }
    a
}

#[test]
fn mixed_scale_integral() {
    let out = tscalc(&ex4_args(true));
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["value"]["lo"].as_f64().unwrap() - 2.5).abs() < 1e-8);
    assert!((v["value"]["hi"].as_f64().unwrap() - 6.5).abs() < 1e-8);
    assert_eq!(v["method"], "quadrature");
    assert!(stdout(&tscalc(&ex4_args(false))).starts_with("value = [2.5, 6.5]"));
}

#[test]
fn json_is_byte_identical_and_ordered() {
    let a = tscalc(&ex4_args(true));
    let b = tscalc(&ex4_args(true));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let keys: Vec<usize> = ["\"value\"", "\"method\"", "\"error_estimate\"", "\"cells\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{text}");
    assert!(text.contains("\"lo\":2.5000000000000000e0"), "{text}");
}

#[test]
fn minkowski_check_holds() {
    let out = tscalc(&[
        "check", "--name", "minkowski", "--p", "2", "--scale", "interval(0,1) u points(2)", "--f", "[s,2*s]", "--g",
        "[s,exp(s)]", "--h", "s", "--from", "0", "--to", "2", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let e = std::f64::consts::E;
    assert_eq!(v["holds"], true);
    assert_eq!(v["relation"], "leq");
    assert_eq!(v["margin_lo"].as_f64().unwrap(), 0.0);
    let want = (5.0 * e * e + 32.0 * e - 11.0).sqrt() / 2.0;
    assert!((v["lhs"]["hi"].as_f64().unwrap() - want).abs() < 1e-8);
    let text = stdout(&out);
    let order = ["name", "lhs", "rhs", "relation", "margin_lo", "margin_hi", "holds"].map(|k| text.find(&format!("\"{k}\"")).unwrap());
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn violated_inequality_exits_one() {
    // concave f with the shape check skipped
    let out = tscalc(&[
        "check", "--name", "jensen", "--assume-shape", "--scale", "interval(0,1)", "--f", "[5 - t^2, 6 - t^2]", "--g",
        "t", "--h", "1",
    ]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("jensen: violated"));
}

#[test]
fn exit_codes() {
    let reversed = tscalc(&["integrate", "--kind", "ir", "--scale", "interval(0,1)", "--fn", "[t, t]", "--from", "1", "--to", "0"]);
    assert_eq!(code(&reversed), 3);

    let parse = tscalc(&["integrate", "--scale", "interval(0,1)", "--fn", "[t, t"]);
    assert_eq!(code(&parse), 2);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("1:6: expected `]` (at `end of input`)"));

    let overlap = tscalc(&["integrate", "--scale", "interval(0,1) u interval(0.5, 2)", "--fn", "[t, t]"]);
    assert_eq!(code(&overlap), 2);

    let coverage = tscalc(&["integrate", "--scale", "interval(0,1)", "--fn", "piece(t < 0.5: [t, t])"]);
    assert_eq!(code(&coverage), 2, "{}", String::from_utf8_lossy(&coverage.stderr));

    let not_continuous = tscalc(&["integrate", "--kind", "ir", "--scale", "interval(0,1)", "--fn", "dirichlet([-1,0],[1,2])"]);
    assert_eq!(code(&not_continuous), 3);

    let sign = tscalc(&[
        "check", "--name", "holder", "--p", "2", "--scale", "interval(0,1)", "--f", "[-1, 0]", "--g", "[t, t]",
    ]);
    assert_eq!(code(&sign), 3);

    let diverge = tscalc(&["integrate", "--kind", "ir", "--tol", "1e-10", "--scale", "interval(0,1)", "--fn", "[sin(10000000*t), 2]"]);
    assert_eq!(code(&diverge), 4, "{}", String::from_utf8_lossy(&diverge.stderr));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tscalc"))
        .args(["integrate", "--scale", "interval(0,1)", "--fn", "[t, t]"])
        .env("TSCALC_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_tscalc"))
        .args(["integrate", "--scale", "interval(0,1)", "--fn", "[t, t]", "--tol", "1e-6"])
        .env("TSCALC_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&flag_wins), 0);
}

#[test]
fn point_query() {
    let out = tscalc(&["point", "--scale", "interval(-1,0) u points(1,3)", "--at", "0", "--fn", EX4_FN, "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["sigma"].as_f64(), Some(1.0));
    assert_eq!(v["mu"].as_f64(), Some(1.0));
    assert_eq!(v["right"], "scattered");
    assert_eq!(v["left"], "dense");
    assert_eq!(v["value"]["hi"].as_f64(), Some(2.0));
    let missing = tscalc(&["point", "--scale", "interval(-1,0) u points(1,3)", "--at", "2"]);
    assert_eq!(code(&missing), 3);
}

#[test]
fn discrete_exact_integral() {
    let out = tscalc(&[
        "integrate", "--scale", "points(0, 1/3, 1/2, 1)", "--fn",
        "piece(t == 0: [-1, 0]); piece(t == 1/3: [-1/3, 1/3]); piece(t == 1/2: [-1/2, 1/2]); piece(t == 1: [1, 2])", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["method"], "exact-discrete");
    assert!((v["value"]["lo"].as_f64().unwrap() + 23.0 / 36.0).abs() < 1e-12);
    assert_eq!(v["error_estimate"].as_f64(), Some(0.0));
}
