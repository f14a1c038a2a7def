use std::fs;
use std::path::PathBuf;

use softconv::workspace::parse_workspace;
use softconv_cli::{run_command, run_text, EXIT_FAILS, EXIT_HOLDS, EXIT_USAGE};

fn shipped(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("workspaces").join(name);
    fs::read_to_string(path).unwrap()
}

fn run(file: &str, args: &str) -> (i32, String) {
    let text = shipped(file);
    run_text(Some(&text), std::iter::once("softconv").chain(args.split_whitespace()))
}

#[test]
fn sierpinski_golden() {
    let cases = [
        ("check-topology -t T", EXIT_HOLDS, "VALID 3 open sets on 2 soft points\n"),
        ("converges -t T -w W -x b@s --mode ideal --ideal fin", EXIT_HOLDS, "CONVERGES\n"),
        ("converges -t T -w W -x a@s --mode soft", EXIT_FAILS, "DOES NOT CONVERGE\n"),
        ("converges -t T -w W -x a@s --mode istar --ideal Iev", EXIT_FAILS, "DOES NOT CONVERGE\n"),
        ("converges -t T -w W -x b@s --mode stat", EXIT_HOLDS, "CONVERGES\n"),
        ("gamma -t T -w W --ideal gens(mod(2:0))", EXIT_HOLDS, "b@s\n"),
        ("gamma -t T -w W", EXIT_HOLDS, "a@s\nb@s\n"),
        ("lambda -t T -w W --ideal Iev", EXIT_HOLDS, "b@s\n"),
        ("limits -t T -w V", EXIT_HOLDS, "a@s\nb@s\n"),
        ("closure -t T -s A", EXIT_HOLDS, "{s: a b}\n"),
        ("closure -t T -s B", EXIT_HOLDS, "{s: b}\n"),
        ("neighborhood -t T -s A -x a@s", EXIT_HOLDS, "NEIGHBORHOOD\n"),
        ("neighborhood -t T -s B -x b@s", EXIT_FAILS, "NOT A NEIGHBORHOOD\n"),
        ("dense -t T -s A", EXIT_HOLDS, "DENSE\n"),
        ("dense -t T -s B", EXIT_FAILS, "NOT DENSE\n"),
        ("separation -t T", EXIT_FAILS, "T1 no\nHausdorff no\ndiscrete no\n"),
    ];
    for (args, code, out) in cases {
        assert_eq!(run("sierpinski.ws", args), (code, out.to_string()), "{args}");
    }
}

#[test]
fn standalone_commands() {
    let none = |args: &str| run_command(None, std::iter::once("softconv").chain(args.split_whitespace()));
    assert_eq!(none("enumerate --points 0"), (EXIT_HOLDS, "1\n".into()));
    assert_eq!(none("enumerate --points 3"), (EXIT_HOLDS, "29\n".into()));
    assert_eq!(none("enumerate --points 9").0, EXIT_USAGE);
    let (code, cert) = none("search --property non-unique-ideal-limit --max-points 2 --max-period 1");
    assert_eq!(code, EXIT_HOLDS);
    assert!(parse_workspace(&cert).is_ok(), "{cert}");
    assert_eq!(none("search --property ideal-not-soft --max-points 1").0, EXIT_FAILS);
    assert_eq!(none("selftest --trials 200").0, EXIT_HOLDS);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        "converges -t T -w W -x b@s",
        "converges -t T -w W -x b@s --mode fast",
        "converges -t Q -w W -x b@s --mode soft",
        "converges -t T -w W -x c@s --mode soft",
        "gamma -t T -w W --ideal gens(",
        "closure -t T -s Nope",
        "frobnicate",
    ] {
        assert_eq!(run("sierpinski.ws", args).0, EXIT_USAGE, "{args}");
    }
    let none = run_command(None, ["softconv", "closure", "-t", "T", "-s", "A"]);
    assert_eq!(none.0, EXIT_USAGE);
    assert_eq!(run_command(None, ["softconv", "--help"]).0, EXIT_HOLDS);
}

#[test]
fn invalid_topology_is_reported() {
    let text = "universe a b\nparams s\nsoftset G { s: a }\nspace G\ntopology T = { G }\n";
    let (code, out) = run_text(Some(text), ["softconv", "check-topology", "-t", "T"]);
    assert_eq!(code, EXIT_FAILS);
    assert!(out.starts_with("INVALID line 5"), "{out}");
    assert!(out.contains("axiom (i)"), "{out}");
    let (code, out) = run_text(Some(text), ["softconv", "closure", "-t", "T", "-s", "G"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("line 5"), "{out}");
    let bad = "universe a\nparams s\nsoftset G { s: b }\n";
    assert_eq!(run_text(Some(bad), ["softconv", "check-topology", "-t", "T"]).0, EXIT_USAGE);
}

#[test]
fn shipped_files_round_trip() {
    for name in ["university.ws", "sierpinski.ws"] {
        let ws = parse_workspace(&shipped(name)).unwrap();
        let text = ws.to_text(&[]);
        assert_eq!(parse_workspace(&text).unwrap(), ws, "{name}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = run("university.ws", "gamma -t T -w W --ideal Ev");
    assert_eq!(a, run("university.ws", "gamma -t T -w W --ideal Ev"));
    assert_eq!(a.1.lines().count(), 7);
}
