use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use congruent_core::numth::{is_squarefree, Integer};
use congruent_core::solver::{solve, SearchConfig, SolutionCertificate, SolveError};
use congruent_core::tunnell::{congruent_candidates, tunnell_test, TunnellVerdict};
use num_traits::Signed;
use rayon::prelude::*;

use crate::record::CertificateRecord;
use crate::{Command, Common, Range, EXIT_INVALID, EXIT_NOT_CONGRUENT, EXIT_SOLVED, EXIT_UNSOLVED};

pub fn dispatch(cmd: Command) -> u8 {
    match cmd {
        Command::Solve { n, common } => cmd_solve(&n, &common),
        Command::Batch { range, common } => cmd_batch(&range, &common),
        Command::Tunnell { range, .. } => cmd_tunnell(&range),
        Command::Verify { file, .. } => cmd_verify(&file),
    }
}

fn invalid(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INVALID
}

fn open_cache(path: &Path) -> io::Result<File> {
    OpenOptions::new().create(true).append(true).open(path)
}

/// Records already in a cache file, keyed by `n`. A missing file is empty.
pub fn load_cache(path: &Path) -> Result<BTreeMap<Integer, CertificateRecord>, String> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(format!("{}: {e}", path.display())),
    };
    let mut out = BTreeMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| format!("{}: {e}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = CertificateRecord::parse_line(&line).map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        let n = rec.n_value().map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        out.insert(n, rec);
    }
    Ok(out)
}

fn print_summary(input: &Integer, cert: &SolutionCertificate, elapsed_ms: u64) {
    let f = cert.scale();
    if f == Integer::from(1) {
        println!("n = {input}");
    } else {
        println!("n = {input} = {} * {f}^2", cert.n);
    }
    println!("method: {}", cert.method);
    let t = cert.scaled_triangle();
    println!("triangle: a = {}, b = {}, h = {}", t.a(), t.b(), t.h());
    let (x, y) = cert.point.coords().expect("affine point");
    println!("point on Y^2 = X^3 - {}^2 X: X = {x}, Y = {y}", cert.n);
    let ws: Vec<String> = cert.witnesses.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    println!("witnesses: {}", ws.join(", "));
    println!("height: {:.6}", cert.height);
    println!("elapsed: {elapsed_ms} ms");
}

pub fn cmd_solve(n: &str, common: &Common) -> u8 {
    let n: Integer = match n.trim().parse() {
        Ok(n) => n,
        Err(_) => return invalid(format!("not an integer: {n:?}")),
    };
    if !n.is_positive() {
        return invalid(format!("{n} must be at least 1"));
    }
    let cfg = match common.config() {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let mut cache = match common.cache.as_deref().map(open_cache).transpose() {
        Ok(c) => c,
        Err(e) => return invalid(format!("cache: {e}")),
    };
    let start = Instant::now();
    match solve(&n, &cfg) {
        Ok(cert) => {
            let ms = start.elapsed().as_millis() as u64;
            let rec = CertificateRecord::from_certificate(&cert, ms);
            if let Some(file) = cache.as_mut() {
                if let Err(e) = writeln!(file, "{}", rec.to_line()) {
                    return invalid(format!("cache: {e}"));
                }
            }
            if common.json {
                println!("{}", rec.to_line());
            } else {
                print_summary(&n, &cert, ms);
            }
            EXIT_SOLVED
        }
        Err(SolveError::NotCongruentByTunnell(s)) => {
            println!("{n} is not congruent (Tunnell's criterion fails for {s})");
            EXIT_NOT_CONGRUENT
        }
        Err(SolveError::Unsolved(s)) => {
            println!("{n}: no triangle found within the limits (squarefree part {s})");
            EXIT_UNSOLVED
        }
        Err(e) => invalid(e),
    }
}

fn check_range(r: &Range) -> Result<(), String> {
    if r.from < 1 || r.from > r.to {
        return Err(format!("bad range [{}, {}]", r.from, r.to));
    }
    Ok(())
}

pub fn cmd_tunnell(range: &Range) -> u8 {
    if let Err(e) = check_range(range) {
        return invalid(e);
    }
    let verdicts: Result<Vec<(u64, TunnellVerdict)>, String> = (range.from..=range.to)
        .into_par_iter()
        .filter(|&v| is_squarefree(&Integer::from(v)))
        .map(|v| tunnell_test(&Integer::from(v)).map(|t| (v, t)).map_err(|e| e.to_string()))
        .collect();
    let verdicts = match verdicts {
        Ok(v) => v,
        Err(e) => return invalid(e),
    };
    let mut out = io::stdout().lock();
    let mut candidates = 0usize;
    for (v, t) in &verdicts {
        let label = match t {
            TunnellVerdict::CongruentCandidateBsd => {
                candidates += 1;
                "candidate"
            }
            TunnellVerdict::NotCongruent => "not congruent",
        };
        let _ = writeln!(out, "{v} {label}");
    }
    let _ = writeln!(out, "{candidates} candidates");
    EXIT_SOLVED
}

enum Outcome {
    Cached(CertificateRecord),
    Solved(CertificateRecord),
    NotCongruent,
    Unsolved,
    Failed(String),
}

fn solve_one(n: &Integer, cfg: &SearchConfig) -> Outcome {
    let start = Instant::now();
    match solve(n, cfg) {
        Ok(cert) => Outcome::Solved(CertificateRecord::from_certificate(&cert, start.elapsed().as_millis() as u64)),
        Err(SolveError::NotCongruentByTunnell(_)) => Outcome::NotCongruent,
        Err(SolveError::Unsolved(_)) => Outcome::Unsolved,
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

pub fn cmd_batch(range: &Range, common: &Common) -> u8 {
    if let Err(e) = check_range(range) {
        return invalid(e);
    }
    let mut cfg = match common.config() {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    // Parallelism is across n; each solve runs single-threaded.
    cfg.workers = 1;
    let targets: Vec<Integer> = if cfg.tunnell_screen {
        match congruent_candidates(range.from, range.to) {
            Ok(c) => c,
            Err(e) => return invalid(e),
        }
    } else {
        (range.from..=range.to).map(Integer::from).filter(is_squarefree).collect()
    };
    let mut cached = match common.cache.as_deref().map(load_cache).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => return invalid(e),
    };
    let mut cache = match common.cache.as_deref().map(open_cache).transpose() {
        Ok(c) => c,
        Err(e) => return invalid(format!("cache: {e}")),
    };

    let mut pending: HashMap<usize, Outcome> = HashMap::new();
    let mut work = Vec::new();
    for (i, n) in targets.iter().enumerate() {
        match cached.remove(n) {
            Some(rec) => {
                pending.insert(i, Outcome::Cached(rec));
            }
            None => work.push((i, n.clone())),
        }
    }

    let (tx, rx) = mpsc::channel::<(usize, Outcome)>();
    let mut stdout = io::stdout().lock();
    let (mut solved, mut from_cache, mut unsolved, mut write_error) = (0usize, 0usize, Vec::new(), None);
    std::thread::scope(|scope| {
        let cfg = &cfg;
        scope.spawn(move || {
            work.into_par_iter().for_each_with(tx, |tx, (i, n)| {
                let _ = tx.send((i, solve_one(&n, cfg)));
            });
        });
        // The single writer: emits in ascending n as soon as a prefix is done.
        let mut next = 0;
        let mut incoming = rx.iter();
        while next < targets.len() {
            let Some(outcome) = pending.remove(&next) else {
                match incoming.next() {
                    Some((i, o)) => {
                        pending.insert(i, o);
                        continue;
                    }
                    None => break,
                }
            };
            let n = &targets[next];
            next += 1;
            match outcome {
                Outcome::Cached(rec) => {
                    solved += 1;
                    from_cache += 1;
                    if common.json {
                        let _ = writeln!(stdout, "{}", rec.to_line());
                    } else {
                        let _ = writeln!(stdout, "{n}: cached ({})", rec.method);
                    }
                }
                Outcome::Solved(rec) => {
                    solved += 1;
                    if let Some(file) = cache.as_mut() {
                        if let Err(e) = writeln!(file, "{}", rec.to_line()) {
                            write_error.get_or_insert(e);
                        }
                    }
                    if common.json {
                        let _ = writeln!(stdout, "{}", rec.to_line());
                    } else {
                        let _ = writeln!(stdout, "{n}: {} ({} ms)", rec.method, rec.elapsed_ms);
                    }
                }
                Outcome::NotCongruent => {
                    if !common.json {
                        let _ = writeln!(stdout, "{n}: not congruent");
                    }
                }
                Outcome::Unsolved => {
                    unsolved.push(n.clone());
                    if !common.json {
                        let _ = writeln!(stdout, "{n}: unsolved");
                    }
                }
                Outcome::Failed(e) => {
                    unsolved.push(n.clone());
                    if !common.json {
                        let _ = writeln!(stdout, "{n}: error: {e}");
                    }
                }
            }
        }
    });
    if let Some(e) = write_error {
        return invalid(format!("cache: {e}"));
    }
    let summary = format!("{solved}/{} solved ({from_cache} from cache)", targets.len());
    let list = unsolved.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ");
    if common.json {
        eprintln!("{summary}");
        if !unsolved.is_empty() {
            eprintln!("unsolved: {list}");
        }
    } else {
        let _ = writeln!(stdout, "{summary}");
        if !unsolved.is_empty() {
            let _ = writeln!(stdout, "unsolved: {list}");
        }
    }
    if unsolved.is_empty() {
        EXIT_SOLVED
    } else {
        EXIT_UNSOLVED
    }
}

pub fn cmd_verify(path: &Path) -> u8 {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) => return invalid(format!("{}: {e}", path.display())),
    };
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = match line {
            Ok(l) => l,
            Err(e) => return invalid(format!("{}: {e}", path.display())),
        };
        if line.trim().is_empty() {
            continue;
        }
        match CertificateRecord::parse_line(&line).and_then(|r| r.to_certificate().map(|c| (r, c))) {
            Ok((r, c)) => records.push((i + 1, r, c)),
            Err(e) => return invalid(format!("{}:{}: {e}", path.display(), i + 1)),
        }
    }
    let mut failed = 0usize;
    for (line, rec, cert) in &records {
        let ok = cert.verify();
        if !ok {
            failed += 1;
        }
        println!("line {line}: n = {} ({}): {}", rec.n, rec.method, if ok { "ok" } else { "FAIL" });
    }
    println!("{}/{} records verified", records.len() - failed, records.len());
    if failed == 0 {
        EXIT_SOLVED
    } else {
        EXIT_UNSOLVED
    }
}
