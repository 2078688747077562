// Copyright 2026 The quadlimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

mod common;

use std::fs;
use std::path::Path;

use common::fixture;
use quadlimit::cli::run;
use quadlimit::{delimit, load_scenario, ResultDocument};

fn quadlimit(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quadlimit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn delimit_writes_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let svg = dir.path().join("out.svg");
    let scenario = fixture("sixteen.txt");
    let (code, out, _) = quadlimit(&["delimit", path(&scenario), "--out", path(&json), "--svg", path(&svg)]);
    assert_eq!(code, 0);
    assert_eq!(out, "constituencies: 16\n");
    let doc = ResultDocument::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    let direct = delimit(&load_scenario(&fs::read_to_string(&scenario).unwrap()).unwrap());
    assert_eq!(doc, ResultDocument::from_result(&direct));
    let svg = fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<path id=\"c").count(), 16);

    // Repeat runs are byte-identical.
    let json2 = dir.path().join("again.json");
    quadlimit(&["delimit", path(&scenario), "--out", path(&json2)]);
    assert_eq!(fs::read(&json).unwrap(), fs::read(&json2).unwrap());
}

#[test]
fn locate_and_render_read_results() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let scenario = fixture("sixteen.txt");
    quadlimit(&["delimit", path(&scenario), "--out", path(&json)]);

    assert_eq!(quadlimit(&["locate", path(&json), "--point", "0,0"]), (0, "c1 1600\n".into(), String::new()));
    assert_eq!(quadlimit(&["locate", path(&json), "--point", "15,15"]).1, "c16 1600\n");
    let (code, _, err) = quadlimit(&["locate", path(&json), "--point", "16,0"]);
    assert_eq!(code, 3);
    assert!(err.contains("outside"));

    let svg = dir.path().join("r.svg");
    let (code, out, _) = quadlimit(&["render", path(&json), path(&scenario), "--out", path(&svg)]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(fs::read_to_string(&svg).unwrap().matches("<circle").count(), 256);
    let (code, out, _) = quadlimit(&["render", path(&json)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<?xml") && !out.contains("<circle"));

    let single = dir.path().join("single.json");
    quadlimit(&["delimit", path(&scenario), "--threshold", "1000000", "--out", path(&single)]);
    assert_eq!(quadlimit(&["locate", path(&single), "--point", "9,3"]).1, "c1 25600\n");
}

#[test]
fn apportion_prints_table() {
    let pops = "A=2560,B=3315,C=995,D=5012";
    let (code, out, _) = quadlimit(&["apportion", "--method", "jefferson", "--seats", "20", "--pops", pops]);
    assert_eq!(code, 0);
    assert_eq!(out, "A  4\nB  6\nC  1\nD  9\n");
    let (_, out, _) = quadlimit(&["apportion", "--method", "webster", "--seats", "20", "--pops", pops]);
    assert_eq!(out, "A  4\nB  6\nC  2\nD  8\n");

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pops.txt");
    fs::write(&file, "# label population\nA 2560\nB 3315\nC 995\nD 5012\n").unwrap();
    let (_, out, _) = quadlimit(&["apportion", "--method", "huntington-hill", "--seats", "20", "--pops", path(&file)]);
    assert_eq!(out, "A  4\nB  6\nC  2\nD  8\n");

    let (code, _, err) = quadlimit(&["apportion", "--method", "huntington-hill", "--seats", "3", "--pops", pops]);
    assert_eq!(code, 3);
    assert!(err.contains("at least one seat per state"));
}

#[test]
fn compare_lines_up_methods() {
    let (code, out, _) = quadlimit(&["compare", path(&fixture("four_states.txt")), "--seats", "20"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows[0], ["state", "population", "hamilton", "jefferson", "webster", "huntington-hill", "quadtree"]);
    assert_eq!(rows[1][..6], ["A", "2560", "4", "4", "4", "4"]);
    assert_eq!(rows[2][..6], ["B", "3315", "6", "6", "6", "6"]);
    assert_eq!(rows[3][..6], ["C", "995", "2", "1", "2", "2"]);
    assert_eq!(rows[4][..6], ["D", "5012", "8", "9", "8", "8"]);

    let s = load_scenario(&fs::read_to_string(fixture("four_states.txt")).unwrap()).unwrap();
    let per_state = delimit(&s).per_state();
    for row in &rows[1..] {
        assert_eq!(row[6], per_state[row[0]].len().to_string());
    }

    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.txt");
    fs::write(&one, "2 1 1 10\n3 4\nSTATES\nX X\n").unwrap();
    let (code, out, _) = quadlimit(&["compare", path(&one), "--seats", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let (code, _, err) = quadlimit(&["compare", path(&fixture("sixteen.txt")), "--seats", "5"]);
    assert_eq!(code, 3);
    assert!(err.contains("STATES"));
}

#[test]
fn stats_reports_tree_shape() {
    let (code, out, _) = quadlimit(&["stats", path(&fixture("sixteen.txt"))]);
    assert_eq!(code, 0);
    assert_eq!(out, "nodes: 21\nleaves: 16\nmaxDepth: 2\nconstituencies: 16\n");
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    };
    let out = dir.path().join("o.json");
    let o = path(&out);
    let good = fixture("sixteen.txt");
    let missing = dir.path().join("nope.txt");
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["delimit".into(), path(&good).into(), "--out".into(), o.into()], 0),
        (vec!["delimit".into(), path(&missing).into(), "--out".into(), o.into()], 4),
        (
            vec![
                "delimit".into(),
                path(&good).into(),
                "--out".into(),
                path(&dir.path().join("no/such/dir.json")).into(),
            ],
            4,
        ),
        (vec!["delimit".into(), path(&good).into(), "--out".into(), o.into(), "--threshold".into(), "0".into()], 2),
        (vec!["delimit".into(), path(&good).into(), "--out".into(), o.into(), "--param".into(), "x".into()], 2),
        (vec!["delimit".into(), path(&good).into()], 2),
        (vec!["delimit".into(), path(&write("hdr.txt", "2 2 1\n1 1\n1 1\n")).into(), "--out".into(), o.into()], 3),
        (vec!["delimit".into(), path(&write("nan.txt", "2 2 1 5\n1 q\n1 1\n")).into(), "--out".into(), o.into()], 3),
        (vec!["delimit".into(), path(&write("short.txt", "2 2 1 5\n1 1\n")).into(), "--out".into(), o.into()], 3),
        (vec!["delimit".into(), path(&write("zero.txt", "2 2 0 5\n1 1\n1 1\n")).into(), "--out".into(), o.into()], 3),
        (
            vec![
                "delimit".into(),
                path(&write("split.txt", "3 1 1 5\n1 1 1\nSTATES\nA B A\n")).into(),
                "--out".into(),
                o.into(),
            ],
            3,
        ),
        (vec!["locate".into(), path(&write("bad.json", "{\"count\": 2}")).into(), "--point".into(), "0,0".into()], 3),
        (vec!["locate".into(), path(&missing).into(), "--point".into(), "0,0".into()], 4),
        (vec!["locate".into(), o.into(), "--point".into(), "0".into()], 2),
        (vec!["render".into(), path(&write("junk.json", "[]")).into()], 3),
        (
            vec![
                "apportion".into(),
                "--method".into(),
                "borda".into(),
                "--seats".into(),
                "5".into(),
                "--pops".into(),
                "A=1".into(),
            ],
            2,
        ),
        (
            vec![
                "apportion".into(),
                "--method".into(),
                "webster".into(),
                "--seats".into(),
                "0".into(),
                "--pops".into(),
                "A=1".into(),
            ],
            2,
        ),
        (
            vec![
                "apportion".into(),
                "--method".into(),
                "webster".into(),
                "--seats".into(),
                "5".into(),
                "--pops".into(),
                "A=x".into(),
            ],
            2,
        ),
        (
            vec![
                "apportion".into(),
                "--method".into(),
                "webster".into(),
                "--seats".into(),
                "5".into(),
                "--pops".into(),
                "A=0".into(),
            ],
            3,
        ),
        (
            vec![
                "apportion".into(),
                "--method".into(),
                "webster".into(),
                "--seats".into(),
                "5".into(),
                "--pops".into(),
                path(&missing).into(),
            ],
            4,
        ),
        (vec!["frobnicate".into()], 2),
        (vec![], 2),
        (vec!["--help".into()], 0),
        (vec!["--version".into()], 0),
    ];
    for (args, expected) in cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = quadlimit(&argv);
        assert_eq!(code, expected, "{argv:?}: {err}");
        if expected != 0 {
            assert!(!err.is_empty(), "{argv:?} printed no diagnostic");
        }
    }
}

#[test]
fn render_rejects_mismatched_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    quadlimit(&["delimit", path(&fixture("sixteen.txt")), "--out", path(&json)]);
    let (code, _, err) = quadlimit(&["render", path(&json), path(&fixture("four_states.txt"))]);
    assert_eq!(code, 3);
    assert!(err.contains("16x16"));
}
