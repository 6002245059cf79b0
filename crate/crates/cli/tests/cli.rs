use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autocell")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn compile_to(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(format!("{name}.ca"));
    let dfao = fixture(&format!("{name}.dfao"));
    let mut args = vec!["compile", dfao.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

/// Rows of a digit grid keyed by their label.
fn by_label(grid: &str) -> Vec<(i64, String)> {
    let mut lines = grid.lines();
    let header: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    let first: i64 = header[2].parse().unwrap();
    lines.enumerate().map(|(i, l)| (first + i as i64, l.to_string())).collect()
}

#[test]
fn compile_check_passes_for_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["thue_morse", "rudin_shapiro", "baum_sweet"] {
        let dfao = fixture(&format!("{name}.dfao"));
        let o = run(&["compile", dfao.to_str().unwrap(), "--check", "1024", "--out", dir.path().join("x").to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("check passed for 1024 terms"));
    }
}

#[test]
fn verify_reports_first_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let tm = compile_to(dir.path(), "thue_morse", &[]);
    let ok = run(&["verify", tm.to_str().unwrap(), fixture("thue_morse.dfao").to_str().unwrap(), "--rows", "512"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("column: PASS for 512 terms"));
    assert!(stdout(&ok).contains("zero column: PASS"));
    let bad = run(&["verify", tm.to_str().unwrap(), fixture("rudin_shapiro.dfao").to_str().unwrap(), "--rows", "512"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("FAIL at index 1"), "{}", stdout(&bad));
}

#[test]
fn malformed_inputs_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dfao");
    std::fs::write(&bad, "base 2\nfield 2 1\nstate a output 0\ninitial a\n").unwrap();
    let o = run(&["compile", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error:"));
    let o = run(&["simulate", dir.path().join("missing.ca").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let tm = compile_to(dir.path(), "thue_morse", &[]);
    let o = run(&["simulate", tm.to_str().unwrap(), "--window", "5:1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn wrapped_spec_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["thue_morse", "rudin_shapiro"] {
        let ca = compile_to(dir.path(), name, &[]);
        let wrapped = dir.path().join(format!("{name}.wca"));
        assert_eq!(code(&run(&["wrap", ca.to_str().unwrap(), "--out", wrapped.to_str().unwrap()])), 0);
        let dfao = fixture(&format!("{name}.dfao"));
        let o = run(&["verify", wrapped.to_str().unwrap(), dfao.to_str().unwrap(), "--rows", "256"]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
}

#[test]
fn simulate_memory_rows_shows_the_initial_rows() {
    let dir = tempfile::tempdir().unwrap();
    let tm = compile_to(dir.path(), "thue_morse", &[]);
    let o = run(&["simulate", tm.to_str().unwrap(), "--rows", "12", "--window", "-4:1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# rows -2 .. 9 columns -4 .. 1");
    // R_-2 = 0, R_-1 = R_0 = x^-2, R_1 = 1, R_2 = x^-2 + 1 + x
    assert_eq!(&lines[1..6], &["000000", "001000", "001000", "000010", "001011"]);
    assert_eq!(lines.len(), 13);
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let rs = compile_to(dir.path(), "rudin_shapiro", &[]);
    let a = run(&["render", rs.to_str().unwrap(), "--rows", "64"]);
    let b = run(&["render", rs.to_str().unwrap(), "--rows", "64"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("P2\n"));
    assert!(text.contains("\n129 64\n255\n"), "{}", &text[..120]);
}

#[test]
fn invert_then_guess() {
    let dir = tempfile::tempdir().unwrap();
    let rs = compile_to(dir.path(), "rudin_shapiro", &["--invertible"]);
    let back = dir.path().join("back.ca");
    let o = run(&["invert", rs.to_str().unwrap(), "--steps", "40", "--out", back.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&back).unwrap().contains("memory 20"));
    let fwd = by_label(&stdout(&run(&["simulate", back.to_str().unwrap(), "--rows", "80", "--window", "-30:10"])));
    let orig = by_label(&stdout(&run(&["simulate", rs.to_str().unwrap(), "--rows", "60", "--window", "-30:10"])));
    assert_eq!(fwd[0].0, -39);
    let mut shared = 0;
    // rows before label 1 are seeded data, not outputs of the rule
    for (label, row) in orig.iter().filter(|(l, _)| *l >= 1) {
        if let Some((_, r)) = fwd.iter().find(|(l, _)| l == label) {
            assert_eq!(r, row, "row {label}");
            shared += 1;
        }
    }
    assert!(shared >= 35);
    let guess = run(&["guess", rs.to_str().unwrap(), "--rows", "4096", "--horizon", "1024"]);
    assert_eq!(code(&guess), 0);
    assert!(stdout(&guess).contains("digits lsd"));
}

fn stored_hash(file: &str) -> String {
    let table = std::fs::read_to_string(fixture("figures.sha256")).unwrap();
    table.lines().find(|l| l.ends_with(&format!("  {file}"))).unwrap().split_whitespace().next().unwrap().into()
}

fn sha(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

#[test]
fn thue_morse_block_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let tm = compile_to(dir.path(), "thue_morse", &[]);
    let o = run(&["simulate", tm.to_str().unwrap(), "--rows", "16", "--window", "-7:12"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("thue_morse_block.txt")).unwrap());
    // column -2 is the sixth character
    let col: String = stdout(&o).lines().skip(1).map(|l| &l[5..6]).collect();
    assert_eq!(col, "0110100110010110");
}

#[test]
fn cli_figures_match_stored_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let tm = compile_to(dir.path(), "thue_morse", &[]);
    assert_eq!(sha(&run(&["render", tm.to_str().unwrap()]).stdout), stored_hash("figure1.pgm"));
    let bs = compile_to(dir.path(), "baum_sweet", &[]);
    assert_eq!(sha(&run(&["simulate", bs.to_str().unwrap(), "--rows", "192"]).stdout), stored_hash("figure4.grid"));
    let rs = compile_to(dir.path(), "rudin_shapiro", &["--invertible"]);
    let back = dir.path().join("back.ca");
    assert_eq!(code(&run(&["invert", rs.to_str().unwrap(), "--steps", "216", "--out", back.to_str().unwrap()])), 0);
    let o = run(&["render", back.to_str().unwrap()]);
    assert!(stdout(&o).contains("# rows -215 .. 40"));
    assert_eq!(sha(&o.stdout), stored_hash("figure3.pgm"));
}

#[test]
fn memory_six_spec_wraps_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let eq = fixture("thue_morse_alt.eq");
    let tm = compile_to(dir.path(), "thue_morse", &["--equation", eq.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&tm).unwrap().contains("memory 6"));
    let wrapped = dir.path().join("tm6.wca");
    assert_eq!(code(&run(&["wrap", tm.to_str().unwrap(), "--out", wrapped.to_str().unwrap()])), 0);
    assert!(std::fs::read_to_string(&wrapped).unwrap().contains("wrapped 6"));
    let o = run(&["verify", wrapped.to_str().unwrap(), fixture("thue_morse.dfao").to_str().unwrap(), "--rows", "256"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn guessed_automaton_verifies_against_its_spec() {
    let dir = tempfile::tempdir().unwrap();
    let bs = compile_to(dir.path(), "baum_sweet", &[]);
    let guessed = dir.path().join("bs.dfao");
    let o = run(&["guess", bs.to_str().unwrap(), "--out", guessed.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("heuristic"));
    let o = run(&["verify", bs.to_str().unwrap(), guessed.to_str().unwrap(), "--rows", "1024"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn normalize_prints_the_chain() {
    let o = run(&["normalize", fixture("rudin_shapiro.dfao").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("stripped  x + (1+t^3)*x^2 + (t^6+t^8+t^10+t^12)*x^4 = 0  (r* = 3)"), "{text}");
    assert!(text.contains("r = 4  d = 15  m = 2  memory = 20"));
    assert!(text.contains("consumed  0 0 0 1 0"));
    assert!(text.contains("embeddable false"));
}
