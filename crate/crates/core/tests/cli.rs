use std::path::PathBuf;
use std::process::{Command, Output};

fn inca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inca")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("inca-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        Dir(p)
    }

    fn file(&self, name: &str, content: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, content).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_str().unwrap().to_owned()
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn grammar_round_trip_through_cli() {
    let d = Dir::new("grammar");
    let text = stdout(&inca(&["gen", "text", "mutated-repeat", "--n", "400", "--seed", "3"]));
    let tf = d.file("t.txt", &text);
    let g = stdout(&inca(&["gen", "grammar", &tf, "--scheme", "random-merge"]));
    let gf = d.file("t.g", &g);
    assert_eq!(stdout(&inca(&["rlslp", "expand", &gf])), text);
    assert!(stdout(&inca(&["rlslp", "check", &gf])).starts_with("ok "));
    let bf = d.file("b.g", &stdout(&inca(&["rlslp", "balance", &gf])));
    assert!(stdout(&inca(&["rlslp", "check", &bf])).contains("locally_balanced=true"));
    let csv = stdout(&inca(&["access", "grammar", &gf, "--all"]));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "q,char,pred_k,descent_steps");
    assert_eq!(rows.len(), 401);
    for (q, row) in rows[1..].iter().enumerate() {
        assert_eq!(row.split(',').nth(1).unwrap().as_bytes()[0], text.as_bytes()[q]);
    }
    assert_eq!(stdout(&inca(&["rlslp", "access", &gf, "--pos", "7"])).trim(), &text[6..7]);
}

#[test]
fn parse_contract_and_access() {
    let d = Dir::new("parse");
    let text = stdout(&inca(&["gen", "text", "fibonacci", "--n", "300"]));
    let tf = d.file("t.txt", &text);
    let pf = d.file("t.p", &stdout(&inca(&["gen", "parse", &tf, "--scheme", "random-bidirectional"])));
    assert_eq!(stdout(&inca(&["parse", "decode", &pf])), text);
    let out = d.path("c.p");
    let rep = stdout(&inca(&["parse", "contract", &pf, &out, "--alpha", "4", "--report"]));
    assert!(rep.contains("size_out="));
    assert_eq!(stdout(&inca(&["parse", "decode", &out])), text);
    let csv = stdout(&inca(&["parse", "access", &out, "--alpha", "4", "--arity", "4", "--all"]));
    assert_eq!(csv.lines().count(), 301);
    assert!(stdout(&inca(&["parse", "stats", &out])).contains("n=300"));
}

#[test]
fn block_tree_and_bench() {
    let d = Dir::new("bt");
    let tf = d.file("t.txt", "abracadabraabracadabraabracadabra");
    assert!(stdout(&inca(&["bt", "stats", &tf])).starts_with("n=33 "));
    assert_eq!(stdout(&inca(&["bt", "access", &tf, "--pos", "4"])).trim(), "a");
    let csv = stdout(&inca(&["bench", "blocktree", &tf]));
    assert!(csv.starts_with("structure,q,symbol,ell_q,h_q,pred_k,trie_edges,descent_steps,wall_nanos"));
    assert_eq!(csv.lines().count(), 34);
    let prof = stdout(&inca(&["profile", &tf]));
    assert_eq!(prof.lines().nth(1), Some("1,22"));
}

#[test]
fn pred_bench_rows() {
    let d = Dir::new("pred");
    let kf = d.file("k.txt", "3\n10\n40\n");
    let csv = stdout(&inca(&["pred", "bench", &kf, "--word-size", "7"]));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "q,pred,delta,k,fat_steps");
    assert_eq!(rows.len(), 42);
    assert!(rows[12].starts_with("12,10,2,"));
}

#[test]
fn exit_codes() {
    let d = Dir::new("exit");
    assert_eq!(inca(&["parse", "decode", &d.path("missing")]).status.code(), Some(2));
    let bad = d.file("bad.p", "E ab\nC 9 2\n");
    assert_eq!(inca(&["parse", "decode", &bad]).status.code(), Some(1));
    let g = d.file("g", "T 1 97\nS 1\n");
    assert_eq!(inca(&["rlslp", "access", &g, "--pos", "2"]).status.code(), Some(1));
    assert!(!inca(&["rlslp"]).status.success());
}
