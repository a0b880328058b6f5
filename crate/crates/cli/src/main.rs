//! Command-line front end: counting, reporting, run dumps, verification
//! against the brute-force oracles, and benchmarking.
//!
//! stdout carries only machine-readable output (JSON or plain value lines);
//! diagnostics go to stderr. Exit codes: 0 success, 1 verification mismatch,
//! 2 I/O or format errors, 3 k out of range.

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use serde_json::json;
use squares_core::{
    analyze, oracle, Analysis, Error, PackedText, TauConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "squares", about = "distinct squares in bit-packed strings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Auto,
    Raw,
    Packed,
}

#[derive(Args)]
struct InputArgs {
    /// Input file (raw bytes or PKSQ packed format).
    input: PathBuf,
    /// Input format; auto sniffs the PKSQ magic.
    #[arg(long, value_enum, default_value = "auto")]
    format: Format,
    /// Alphabet size override for raw inputs (default: max byte + 1).
    #[arg(long)]
    sigma: Option<u32>,
    /// tau for the run machinery (default derived from n and sigma).
    #[arg(long)]
    tau: Option<usize>,
    /// tau for the synchronizing set (default derived from n and sigma).
    #[arg(long)]
    tau_sync: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count distinct squares (and optionally t-th powers).
    Count {
        #[command(flatten)]
        input: InputArgs,
        /// Also count distinct t-th powers for this exponent (t >= 3).
        #[arg(long)]
        power: Option<u64>,
        /// Include the synchronizing set in the JSON output.
        #[arg(long)]
        dump_sync: bool,
        /// JSON output (default for count).
        #[arg(long)]
        json: bool,
    },
    /// Report k distinct squares as "start half_length".
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short)]
        k: u64,
        #[arg(long)]
        json: bool,
    },
    /// Dump the run representation (explicit runs, clusters, pyramids).
    Runs {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dump_sync: bool,
    },
    /// Run the pipeline against the brute-force oracles stage by stage.
    Verify {
        /// Optional input file; a random text is generated when absent.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        format: Format,
        #[arg(long)]
        sigma: Option<u32>,
        /// Length of the generated random text.
        #[arg(long, default_value = "10000")]
        n: usize,
        /// Seed for the generated text.
        #[arg(long, default_value = "1")]
        seed: u64,
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long)]
        tau_sync: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Time pipeline stages over generated inputs.
    Bench {
        /// Comma-separated sizes, e.g. 1000000,10000000.
        #[arg(long, default_value = "1000000")]
        sizes: String,
        #[arg(long, default_value = "2")]
        sigma: u32,
        #[arg(long, default_value = "1")]
        seed: u64,
        /// CSV instead of an aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Pack a raw byte file into the PKSQ format.
    Pack {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        sigma: Option<u32>,
    },
    /// Unpack a PKSQ file into raw bytes (alphabet must fit a byte).
    Unpack { input: PathBuf, output: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &PathBuf, format: Format, sigma: Option<u32>) -> Result<PackedText, String> {
    let data = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let packed = match format {
        Format::Packed => true,
        Format::Raw => false,
        Format::Auto => data.len() >= 4 && &data[0..4] == PackedText::MAGIC,
    };
    if packed {
        PackedText::from_file_bytes(&data).map_err(|e| e.to_string())
    } else {
        let sigma = match sigma {
            Some(s) => {
                if let Some((i, &b)) = data.iter().enumerate().find(|(_, &b)| b as u32 >= s) {
                    return Err(Error::CharacterOutOfAlphabet {
                        position: i,
                        value: b as u32,
                        sigma: s,
                    }
                    .to_string());
                }
                s
            }
            None => data.iter().map(|&b| b as u32 + 1).max().unwrap_or(1),
        };
        PackedText::encode(&data, sigma).map_err(|e| e.to_string())
    }
}

fn config(p: &PackedText, tau: Option<usize>, tau_sync: Option<usize>) -> TauConfig {
    let base = TauConfig::for_text(p.len(), p.sigma());
    TauConfig::with(
        p.len(),
        p.sigma(),
        tau.unwrap_or(base.tau_runs),
        tau_sync.unwrap_or(base.tau_sync),
    )
}

fn sync_json(a: &Analysis) -> serde_json::Value {
    match &a.sync {
        Some(s) => json!({
            "tau": s.tau,
            "positions": s.positions,
            "ranks": s.rank,
        }),
        None => serde_json::Value::Null,
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Count {
            input,
            power,
            dump_sync,
            json: _,
        } => {
            let p = read_input(&input.input, input.format, input.sigma)?;
            let cfg = config(&p, input.tau, input.tau_sync);
            let a = analyze(&p, cfg).map_err(|e| e.to_string())?;
            let counts = a.counts().map_err(|e| e.to_string())?;
            let stats = a.repr.stats();
            let mut out = json!({
                "n": p.len(),
                "sigma": p.sigma(),
                "tau": { "runs": cfg.tau_runs, "sync": cfg.tau_sync },
                "distinct_squares": counts.total(),
                "breakdown": {
                    "np": counts.np,
                    "plain_p": counts.plain_p,
                    "special": counts.special,
                },
                "runs_stats": {
                    "explicit": stats.explicit,
                    "clusters": stats.clusters,
                    "cluster_size": stats.cluster_size,
                    "pyramids": stats.pyramids,
                    "denoted_regular_layers": stats.denoted_regular_layers,
                },
            });
            if let Some(t) = power {
                let c = a.count_powers(t).map_err(|e| e.to_string())?;
                out["power"] = json!({ "t": t, "count": c });
            }
            if dump_sync {
                out["sync"] = sync_json(&a);
            }
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { input, k, json } => {
            let p = read_input(&input.input, input.format, input.sigma)?;
            let cfg = config(&p, input.tau, input.tau_sync);
            let a = analyze(&p, cfg).map_err(|e| e.to_string())?;
            match a.report(k) {
                Ok(squares) => {
                    if json {
                        let items: Vec<_> =
                            squares.iter().map(|&(s, h)| json!([s, h])).collect();
                        println!("{}", json!({ "k": k, "squares": items }));
                    } else {
                        for (s, h) in squares {
                            println!("{s} {h}");
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::KTooLarge { total, .. }) => {
                    eprintln!("error: k={k} exceeds the number of distinct squares {total}");
                    println!("{}", json!({ "error": "k_too_large", "total": total }));
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Runs {
            input,
            json: _,
            dump_sync,
        } => {
            let p = read_input(&input.input, input.format, input.sigma)?;
            let cfg = config(&p, input.tau, input.tau_sync);
            let a = analyze(&p, cfg).map_err(|e| e.to_string())?;
            let run_json = |r: &squares_core::Run| json!([r.start, r.end, r.period]);
            let mut out = json!({
                "n": p.len(),
                "explicit_runs": a.repr.explicit_runs.iter().map(run_json).collect::<Vec<_>>(),
                "clusters": a.repr.clusters.iter().map(|c| json!({
                    "base_runs": c.base_runs.iter().map(run_json).collect::<Vec<_>>(),
                    "shifts": c.shifts,
                })).collect::<Vec<_>>(),
                "pyramids": a.repr.pyramids.iter().map(|py| json!({
                    "f": run_json(&py.f),
                    "fp": run_json(&py.fp),
                    "delta": py.delta,
                    "k_min": py.k_min,
                    "k_max": py.k_max,
                    "max_layer": run_json(&py.max_layer),
                })).collect::<Vec<_>>(),
            });
            if dump_sync {
                out["sync"] = sync_json(&a);
            }
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            input,
            format,
            sigma,
            n,
            seed,
            tau,
            tau_sync,
            json,
        } => {
            let p = match &input {
                Some(path) => read_input(path, format, sigma)?,
                None => {
                    let sigma = sigma.unwrap_or(2);
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    let raw: Vec<u8> =
                        (0..n).map(|_| rng.gen_range(0..sigma) as u8).collect();
                    PackedText::encode(&raw, sigma).map_err(|e| e.to_string())?
                }
            };
            let cfg = config(&p, tau, tau_sync);
            let report = verify(&p, cfg);
            let pass = report.iter().all(|(_, ok, _)| *ok);
            if json {
                let stages: Vec<_> = report
                    .iter()
                    .map(|(stage, ok, detail)| json!({
                        "stage": stage, "pass": ok, "detail": detail
                    }))
                    .collect();
                println!("{}", json!({ "pass": pass, "stages": stages }));
            } else {
                for (stage, ok, detail) in &report {
                    println!("{} {stage}: {detail}", if *ok { "PASS" } else { "FAIL" });
                }
                println!("{}", if pass { "PASS" } else { "FAIL" });
            }
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Bench {
            sizes,
            sigma,
            seed,
            csv,
        } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map(|v| v as usize)
                        .map_err(|e| format!("bad size {s:?}: {e}"))
                })
                .collect::<Result<_, _>>()?;
            bench(&sizes, sigma, seed, csv);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Pack {
            input,
            output,
            sigma,
        } => {
            let p = read_input(&input, Format::Raw, sigma)?;
            std::fs::write(&output, p.to_file_bytes())
                .map_err(|e| format!("{}: {e}", output.display()))?;
            eprintln!(
                "packed {} chars over sigma={} into {}",
                p.len(),
                p.sigma(),
                output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Unpack { input, output } => {
            let p = read_input(&input, Format::Packed, None)?;
            if p.sigma() > 256 {
                return Err(format!("sigma={} does not fit raw bytes", p.sigma()));
            }
            let bytes: Vec<u8> = p.decode().iter().map(|&c| c as u8).collect();
            std::fs::write(&output, bytes).map_err(|e| format!("{}: {e}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Stage-by-stage differential check; the first mismatching stage carries a
/// description of the divergence. `SQUARES_VERIFY_FAULT` injects an
/// off-by-one into the named stage for fault-injection testing.
fn verify(p: &PackedText, cfg: TauConfig) -> Vec<(&'static str, bool, String)> {
    let fault = std::env::var("SQUARES_VERIFY_FAULT").unwrap_or_default();
    let mut out = Vec::new();
    let raw: Vec<u8> = if p.sigma() <= 256 {
        p.decode().iter().map(|&c| c as u8).collect()
    } else {
        Vec::new()
    };
    let a = match analyze(p, cfg) {
        Ok(a) => a,
        Err(e) => {
            out.push(("pipeline", false, e.to_string()));
            return out;
        }
    };

    // runs stage
    if raw.len() <= oracle::RUNS_BASED_CAP && !raw.is_empty() {
        let oix = oracle::OracleIndex::new(&raw);
        let mut want = oracle::fast_runs(&raw, &oix);
        let mut got = a.repr.denoted_runs();
        got.sort_unstable();
        let dup = got.windows(2).any(|w| w[0] == w[1]);
        if fault == "runs" {
            want.pop();
        }
        want.sort_unstable();
        let ok = !dup && got == want;
        let detail = if ok {
            format!("{} runs, three parts disjoint", want.len())
        } else if dup {
            "duplicate run across representation parts".into()
        } else {
            first_diff(&got, &want)
        };
        out.push(("runs", ok, detail));
    }

    // synchronizing set stage (quadratic validator, small inputs only)
    if let Some(sync) = &a.sync {
        if raw.len() <= 2000 && !raw.is_empty() {
            let mut viol = oracle::validate_sync(&raw, sync.tau, &sync.positions);
            if fault == "sync" {
                viol.push("injected fault".into());
            }
            let ok = viol.is_empty();
            let detail = if ok {
                format!("{} positions valid", sync.positions.len())
            } else {
                viol[0].clone()
            };
            out.push(("sync", ok, detail));
        }
    }

    // pyramids stage: canonical representations vs direct enumeration
    if raw.len() <= 600 {
        let mut ok = true;
        let mut detail = format!("{} pyramids", a.repr.pyramids.len());
        'outer: for py in &a.repr.pyramids {
            let mut want = oracle::naive_pyramid(&raw, py.f, py.fp);
            if fault == "pyramids" && !want.is_empty() {
                want.pop();
            }
            let mut got: Vec<squares_core::Run> = py.reg_layers().collect();
            got.push(py.max_layer);
            got.sort_unstable();
            // the canonical representation may trim below the short-period
            // cutoff; compare against the oracle filtered the same way
            want.retain(|r| {
                r.period > cfg.short_period_max() || got.iter().any(|g| g == r)
            });
            if got != want {
                ok = false;
                detail = format!("pyramid {:?}/{:?}: {}", py.f, py.fp, first_diff(&got, &want));
                break 'outer;
            }
        }
        out.push(("pyramids", ok, detail));
    }

    // groups stage: members within a group share one root string
    {
        let mut ok = true;
        let mut detail = format!("{} groups", a.groups.len());
        'outer: for g in &a.groups {
            let m0 = &g.members[0];
            for m in &g.members[1..] {
                let equal = m.period() == m0.period()
                    && a.ix.lce(m.repr.root_pos, m0.repr.root_pos) >= m0.period();
                let equal = equal != (fault == "groups");
                if !equal {
                    ok = false;
                    detail = format!(
                        "group mixes roots at {} and {}",
                        m0.repr.root_pos, m.repr.root_pos
                    );
                    break 'outer;
                }
            }
        }
        out.push(("groups", ok, detail));
    }

    // counts stage
    match a.counts() {
        Ok(counts) => {
            let mut total = counts.total();
            if fault == "counts" {
                total += 1;
            }
            if !raw.is_empty() && raw.len() <= oracle::RUNS_BASED_CAP {
                let want = oracle::runs_based_distinct_squares(&raw).unwrap();
                let ok = total == want;
                out.push((
                    "counts",
                    ok,
                    format!("pipeline {total} vs oracle {want}"),
                ));
            }
            if raw.len() <= oracle::NAIVE_SQUARES_CAP && !raw.is_empty() {
                let want = oracle::classify_squares(&raw).unwrap();
                let ok = counts.np == want.np.len() as u64
                    && counts.plain_p == want.plain_p.len() as u64
                    && counts.special == want.special.len() as u64;
                out.push((
                    "breakdown",
                    ok,
                    format!(
                        "np {} / plain {} / special {} vs {} / {} / {}",
                        counts.np,
                        counts.plain_p,
                        counts.special,
                        want.np.len(),
                        want.plain_p.len(),
                        want.special.len()
                    ),
                ));
            }
            // reported squares are genuine and pairwise distinct
            let sample = counts.total().min(10_000);
            if sample > 0 {
                let rep = a.report(sample).unwrap();
                let mut ok = true;
                for &(s, h) in &rep {
                    if a.ix.lce(s, s + h) < h {
                        ok = false;
                    }
                }
                let mut by_len: Vec<(usize, usize)> = rep.iter().map(|&(s, h)| (h, s)).collect();
                by_len.sort_unstable_by_key(|&(h, s)| (h, a.ix.suffix_rank(s)));
                for w in by_len.windows(2) {
                    let ((h1, s1), (h2, s2)) = (w[0], w[1]);
                    if h1 == h2 && a.ix.lce(s1, s2) >= 2 * h1 {
                        ok = false;
                    }
                }
                out.push((
                    "report",
                    ok,
                    format!("{} reported squares distinct and verified", rep.len()),
                ));
            }
        }
        Err(e) => out.push(("counts", false, e.to_string())),
    }
    out
}

fn first_diff<T: std::fmt::Debug + PartialEq>(got: &[T], want: &[T]) -> String {
    for i in 0..got.len().max(want.len()) {
        match (got.get(i), want.get(i)) {
            (Some(g), Some(w)) if g == w => continue,
            (g, w) => return format!("first divergence at {i}: got {g:?}, want {w:?}"),
        }
    }
    "lengths differ".into()
}

fn bench(sizes: &[usize], sigma: u32, seed: u64, csv: bool) {
    if csv {
        println!("size,sigma,stage,seconds");
    } else {
        println!("{:>12} {:>6} {:<24} {:>10}", "size", "sigma", "stage", "seconds");
    }
    let emit = |size: usize, stage: &str, secs: f64| {
        if csv {
            println!("{size},{sigma},{stage},{secs:.6}");
        } else {
            println!("{size:>12} {sigma:>6} {stage:<24} {secs:>10.4}");
        }
    };
    for &size in sizes {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<u8> = (0..size).map(|_| rng.gen_range(0..sigma) as u8).collect();
        let p = PackedText::encode(&raw, sigma).unwrap();
        // a tau large enough to give the tabulation path work
        let cfg = TauConfig::with(size, sigma, 6, 1.max(TauConfig::for_text(size, sigma).tau_sync));

        let t = Instant::now();
        let clusters = squares_core::short_runs_tabulated(&p, &cfg);
        emit(size, "short_run_tabulation", t.elapsed().as_secs_f64());
        std::hint::black_box(&clusters);

        let t = Instant::now();
        let bytewise = bytewise_short_runs(&p, &cfg);
        emit(size, "short_run_bytewise", t.elapsed().as_secs_f64());
        std::hint::black_box(&bytewise);

        let t = Instant::now();
        let a = analyze(&p, TauConfig::for_text(size, sigma)).unwrap();
        let counts = a.counts().unwrap();
        emit(size, "full_pipeline", t.elapsed().as_secs_f64());
        eprintln!("  distinct squares: {}", counts.total());

        if size <= oracle::RUNS_BASED_CAP {
            let t = Instant::now();
            let want = oracle::runs_based_distinct_squares(&raw).unwrap();
            emit(size, "runs_based_oracle", t.elapsed().as_secs_f64());
            assert_eq!(counts.total(), want, "pipeline disagrees with the oracle");
        }
    }
}

/// The same short-run scan as the tabulation path, but decoding every block
/// and recomputing its runs byte by byte; the packed path's baseline.
fn bytewise_short_runs(p: &PackedText, cfg: &TauConfig) -> u64 {
    let tau = cfg.tau_runs;
    let pmax = tau / 3;
    if pmax == 0 || p.is_empty() {
        return 0;
    }
    let n = p.len();
    let h = (tau / 2).max(1);
    let bl = 7 * tau / 2;
    let mut chars: Vec<u32> = Vec::with_capacity(bl);
    let mut found = 0u64;
    let mut o = 0usize;
    while o < n + 2 {
        let end = (o + bl).min(n + 2);
        chars.clear();
        chars.extend((o..end).map(|t| p.at_signed(t as i64 - 1)));
        for r in squares_core::util::runs_in_window(&chars) {
            if r.start >= 1
                && r.start <= h
                && r.end + 2 <= chars.len()
                && r.period <= pmax
                && r.end - r.start + 1 < 3 * tau - 1
            {
                found += 1;
            }
        }
        o += h;
    }
    found
}
