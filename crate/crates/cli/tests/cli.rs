use std::io::Write;
use std::process::{Command, Output};

fn gaussfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussfit"))
        .args(args)
        .output()
        .expect("failed to launch gaussfit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file
}

fn simulate_noiseless() -> tempfile::NamedTempFile {
    let out = gaussfit(&[
        "simulate",
        "--amplitude",
        "3",
        "--mean",
        "-4",
        "--sigma",
        "1.5",
        "--n",
        "80",
        "--width-ratio",
        "8",
        "--noise-sd",
        "0",
        "--seed",
        "7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    write_temp(&stdout(&out))
}

#[test]
fn simulate_then_fit_recovers_noiseless_parameters() {
    let data = simulate_noiseless();
    let out = gaussfit(&[
        "fit",
        "--input",
        data.path().to_str().unwrap(),
        "--algorithm",
        "caruana",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algorithm,A,mu,sigma,iterations_used,points_used,dropped_nonpositive"
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[0], "caruana");
    let a: f64 = fields[1].parse().unwrap();
    let mu: f64 = fields[2].parse().unwrap();
    let sigma: f64 = fields[3].parse().unwrap();
    assert!((a - 3.0).abs() < 1e-9 * 3.0);
    assert!((mu + 4.0).abs() < 1e-9 * 4.0);
    assert!((sigma - 1.5).abs() < 1e-9 * 1.5);
    assert_eq!(fields[5], "80");
    assert!(lines.next().is_none());
}

#[test]
fn fit_json_output_has_named_fields() {
    let data = simulate_noiseless();
    let out = gaussfit(&[
        "fit",
        "--input",
        data.path().to_str().unwrap(),
        "--algorithm",
        "guo-iter",
        "--max-iters",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for key in [
        "\"algorithm\": \"guo-iter\"",
        "\"A\"",
        "\"mu\"",
        "\"sigma\"",
        "\"iterations_used\"",
    ] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate",
        "--amplitude",
        "1",
        "--mean",
        "10",
        "--sigma",
        "2",
        "--n",
        "30",
        "--width-ratio",
        "12",
        "--noise-sd",
        "0.1",
        "--seed",
        "42",
    ];
    let first = stdout(&gaussfit(&args));
    let second = stdout(&gaussfit(&args));
    assert_eq!(first, second);
    assert_eq!(first.lines().count(), 31);
}

#[test]
fn complexity_reports_guo_minus_fas_delta() {
    for n in [10_u64, 200, 1000] {
        let out = gaussfit(&["complexity", "--n", &n.to_string()]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        let delta = text
            .lines()
            .find(|l| l.starts_with("guo-minus-fas,"))
            .expect("delta row");
        let expected = format!("guo-minus-fas,{},{}", 6, n + 5);
        assert_eq!(delta, expected);
    }
}

#[test]
fn complexity_with_costed_transcendentals_keeps_delta() {
    let out = gaussfit(&[
        "complexity",
        "--n",
        "100",
        "--a-ln",
        "4",
        "--m-ln",
        "5",
        "--a-exp",
        "6",
        "--m-exp",
        "7",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("guo-minus-fas,6,105"));
}

#[test]
fn sweep_emits_one_row_per_axis_value() {
    let out = gaussfit(&[
        "sweep",
        "--axis",
        "w",
        "--values",
        "6,12,16",
        "--trials",
        "50",
        "--seed",
        "3",
        "--algorithms",
        "guo,fas",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[0],
        "axis_value,guo_mean_are_pct,guo_worst_are_pct,fas_mean_are_pct,fas_worst_are_pct,\
         theoretical_worst_pct,guo_failures,fas_failures"
    );
    for (line, w) in lines[1..].iter().zip([6.0, 12.0, 16.0]) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[0].parse::<f64>().unwrap(), w);
    }
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let base = [
        "sweep", "--axis", "snr", "--values", "5,25", "--trials", "64", "--seed", "11",
    ];
    let one = gaussfit(&[&base[..], &["--threads", "1"]].concat());
    let four = gaussfit(&[&base[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(gaussfit(&["fit"]).status.code(), Some(1));
    assert_eq!(
        gaussfit(&["sweep", "--axis", "bogus", "--values", "1"])
            .status
            .code(),
        Some(1)
    );
    let out = gaussfit(&[
        "sweep", "--axis", "snr", "--values", "5,1", "--trials", "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[InvalidInput]"));
}

#[test]
fn help_exits_with_zero() {
    let out = gaussfit(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sweep"));
}

#[test]
fn data_errors_exit_with_two() {
    let unsorted = write_temp("x,y\n1,1\n0,2\n3,1\n");
    let out = gaussfit(&[
        "fit",
        "--input",
        unsorted.path().to_str().unwrap(),
        "--algorithm",
        "guo",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[NonIncreasingX]"));

    let garbage = write_temp("x,y\n0,1\n1,abc\n2,1\n");
    let out = gaussfit(&[
        "fit",
        "--input",
        garbage.path().to_str().unwrap(),
        "--algorithm",
        "guo",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[ParseError]"));

    let out = gaussfit(&[
        "fit",
        "--input",
        "/nonexistent/data.csv",
        "--algorithm",
        "guo",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[IoError]"));
}

#[test]
fn fit_failures_exit_with_three() {
    let flat = write_temp("x,y\n0,1\n1,1\n2,1\n3,1\n");
    let out = gaussfit(&[
        "fit",
        "--input",
        flat.path().to_str().unwrap(),
        "--algorithm",
        "caruana",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[InvalidCurvature]"));
}
