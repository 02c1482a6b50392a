use std::process::ExitCode;

use beatty_core::analysis::{gap_report, instability_witness, order_matrix, GapReport};
use beatty_core::circle::{CirclePoint, OrientedInterval};
use beatty_core::logic::{eliminate, eval_sentence, parse, parse_sentence};
use beatty_core::pattern::{normalize_query, realizes_pattern, u_family, v_family, FamilyKind, PatternQuery, UVFamily};
use beatty_core::{BeattyContext, IrrationalSlope};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;
/// Largest `n` accepted by `beatty`, `sturmian` and `unstable`.
const MAX_LISTING: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "beatty", version, about = "Decide pattern and first-order questions about a Beatty set P_r")]
struct Cli {
    /// Slope r: golden, sqrt:d or quad:p,q,s,d for (p + q√d)/s.
    #[arg(long, global = true, default_value = "golden")]
    slope: IrrationalSlope,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Search bound for sentences outside the exact fragment.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(i64).range(0..=1_000_000_000))]
    bound: i64,
    /// Integer window lo:hi for gaps.
    #[arg(long, global = true, default_value = "-10000:10000", allow_hyphen_values = true, value_parser = parse_window)]
    window: (i64, i64),
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print b(1), …, b(n) where b(n) = ⌊n·r⌋.
    Beatty {
        #[arg(value_parser = clap::value_parser!(u64).range(0..=MAX_LISTING))]
        n: u64,
    },
    /// Print the characteristic word s_1 … s_len.
    Sturmian {
        #[arg(value_parser = clap::value_parser!(u64).range(0..=MAX_LISTING))]
        len: u64,
    },
    /// Print whether n ∈ P_r; exit 1 when it is not.
    Member {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Decide a pattern "a=..;k=..;I=.." (I 1-based) or a sentence; exit 1 on a false verdict.
    Decide { input: String },
    /// Eliminate ∃y from the pattern "k=..;I=.." (I 1-based) and print ψ(x1, …, xn).
    Eliminate { input: String },
    /// Gap report of the set defined by a formula in one free variable over --window.
    Gaps { formula: String },
    /// Smallest m with m, …, nm ∈ P_r and −m, …, −nm ∉ P_r, with the order table of ±jm.
    Unstable {
        #[arg(value_parser = clap::value_parser!(i64).range(1..=64))]
        n: i64,
    },
}

fn parse_window(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("expected lo:hi, got {text:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi || hi - lo > 10_000_000 {
        return Err(format!("window {lo}:{hi} must satisfy lo <= hi and hi - lo <= 10000000"));
    }
    Ok((lo, hi))
}

/// Text and JSON renderings plus the verdict-bearing exit status.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn list(text: &str, key: &str) -> Result<Vec<i64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("{key}: bad integer {x:?}: {e}"))).collect()
}

/// Parses `key=v1,v2;…` fields; every key in `keys` must appear exactly once.
fn fields(text: &str, keys: &[&str]) -> Result<Vec<Vec<i64>>, String> {
    let mut out: Vec<Option<Vec<i64>>> = vec![None; keys.len()];
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=values, got {part:?}"))?;
        let key = key.trim();
        let slot = keys.iter().position(|k| *k == key).ok_or_else(|| format!("unknown field {key:?}"))?;
        if out[slot].is_some() {
            return Err(format!("duplicate field {key:?}"));
        }
        out[slot] = Some(list(value, key)?);
    }
    keys.iter().zip(out).map(|(k, v)| v.ok_or_else(|| format!("missing field {k:?}"))).collect()
}

fn indices(one_based: &[i64], n: usize) -> Result<Vec<usize>, String> {
    one_based
        .iter()
        .map(|&i| {
            if i >= 1 && (i as u64) <= n as u64 {
                Ok(i as usize - 1)
            } else {
                Err(format!("index {i} in I is outside 1..={n}"))
            }
        })
        .collect()
}

fn point_json(ctx: &BeattyContext, p: &CirclePoint) -> Value {
    json!({
        "rot": p.rot().to_string(),
        "rat": p.rat().to_string(),
        "theta": ctx.circle().to_f64(p),
    })
}

fn interval_json(ctx: &BeattyContext, i: &OrientedInterval) -> Value {
    json!({
        "lo": point_json(ctx, &i.lo),
        "hi": point_json(ctx, &i.hi),
        "lo_closed": i.lo_closed,
        "hi_closed": i.hi_closed,
    })
}

fn family_json(ctx: &BeattyContext, index: usize, f: &UVFamily) -> Value {
    json!({
        "index": index + 1,
        "family": match f.kind { FamilyKind::U => "U", FamilyKind::V => "V" },
        "a": f.a,
        "k": f.k,
        "whole": f.whole,
        "slices": f.slices.iter().map(|s| interval_json(ctx, s)).collect::<Vec<_>>(),
    })
}

fn decide_pattern(ctx: &BeattyContext, input: &str) -> Result<Output, String> {
    let [a, k, i] = <[Vec<i64>; 3]>::try_from(fields(input, &["a", "k", "I"])?).expect("three fields");
    let q = PatternQuery::new(a, k.clone(), &indices(&i, k.len())?).map_err(|e| e.to_string())?;
    let d = realizes_pattern(ctx, &q);
    let norm = normalize_query(&q);
    let families: Vec<Value> = (0..norm.len())
        .filter(|&j| norm.k[j] != 0)
        .map(|j| {
            let k = norm.k[j] as u64;
            let f = if norm.in_set[j] { u_family(ctx, norm.a[j], k) } else { v_family(ctx, norm.a[j], k) };
            family_json(ctx, j, &f)
        })
        .collect();
    let mut text = format!("verdict: {}\n", d.realizable);
    if let Some(c) = d.witness {
        text += &format!("witness: {c}\n");
    }
    text += &format!("certificate: {}\n", d.certificate.name());
    Ok(Output {
        text,
        json: json!({
            "kind": "pattern",
            "a": q.a,
            "k": q.k,
            "I": q.indices().iter().map(|i| i + 1).collect::<Vec<_>>(),
            "verdict": d.realizable,
            "witness": d.witness,
            "certificate": d.certificate.name(),
            "families": families,
        }),
        ok: d.realizable,
    })
}

fn decide_sentence(ctx: &BeattyContext, input: &str, bound: i64) -> Result<Output, String> {
    let f = parse_sentence(input).map_err(|e| e.to_string())?;
    let v = eval_sentence(&f, ctx, bound).map_err(|e| e.to_string())?;
    let mut text = format!("verdict: {}\n", v.value);
    if let Some(c) = v.witness {
        text += &format!("witness: {c}\n");
    }
    text += &format!("exact: {}\n", !v.bounded);
    if v.bounded {
        text += &format!("search bound: {bound}\n");
    }
    Ok(Output {
        text,
        json: json!({
            "kind": "sentence",
            "formula": f.to_json(),
            "verdict": v.value,
            "witness": v.witness,
            "bounded": v.bounded,
            "bound": bound,
        }),
        ok: v.value,
    })
}

fn gaps_json(r: &GapReport) -> Value {
    json!({
        "window": [r.window.0, r.window.1],
        "points_found": r.points_found,
        "max_gap": r.max_gap,
        "leading_gap": r.leading_gap,
        "trailing_gap": r.trailing_gap,
        "gap_bound_estimate": r.gap_bound_estimate,
    })
}

fn run(cli: &Cli) -> Result<Output, String> {
    let ctx = BeattyContext::new(cli.slope.clone());
    let out = match &cli.command {
        Command::Beatty { n } => {
            let values: Vec<i64> = (1..=*n as i64).map(|i| ctx.b(i)).collect();
            let text = values.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            Output { text: text + "\n", json: json!({ "n": n, "values": values }), ok: true }
        }
        Command::Sturmian { len } => {
            let word: String = ctx.sturmian_prefix(*len as usize).iter().map(|&s| char::from(b'0' + s)).collect();
            Output { text: format!("{word}\n"), json: json!({ "len": len, "word": word }), ok: true }
        }
        Command::Member { n } => {
            let m = ctx.member_p(*n);
            Output { text: format!("{m}\n"), json: json!({ "n": n, "member": m }), ok: m }
        }
        Command::Decide { input } => {
            if input.trim_start().starts_with("a=") || input.trim_start().starts_with("a =") {
                decide_pattern(&ctx, input)?
            } else {
                decide_sentence(&ctx, input, cli.bound)?
            }
        }
        Command::Eliminate { input } => {
            let [k, i] = <[Vec<i64>; 2]>::try_from(fields(input, &["k", "I"])?).expect("two fields");
            let psi = eliminate(&k, &indices(&i, k.len())?, &ctx).map_err(|e| e.to_string())?;
            let text = psi.to_string();
            Output {
                text: format!("{text}\n"),
                json: json!({ "k": k, "I": i, "text": text, "ast": psi.to_json(), "size": psi.size() }),
                ok: true,
            }
        }
        Command::Gaps { formula } => {
            let f = parse(formula).map_err(|e| e.to_string())?;
            let (lo, hi) = cli.window;
            let r = gap_report(&f, lo, hi, &ctx).map_err(|e| e.to_string())?;
            let text = format!(
                "window: {lo}:{hi}\npoints: {}\nmax gap: {}\nleading gap: {}\ntrailing gap: {}\ngap bound estimate: {}\n",
                r.points_found, r.max_gap, r.leading_gap, r.trailing_gap, r.gap_bound_estimate
            );
            Output { text, json: json!({ "formula": f.to_json(), "report": gaps_json(&r) }), ok: true }
        }
        Command::Unstable { n } => {
            let m = instability_witness(*n, &ctx)
                .ok_or_else(|| format!("no witness for n = {n} within the search limit"))?;
            let table = order_matrix(*n, m, &ctx);
            let mut text = format!("witness: {m}\n");
            for row in &table {
                text += &row.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
                text.push('\n');
            }
            Output { text, json: json!({ "n": n, "witness": m, "order": table }), ok: true }
        }
    };
    Ok(out)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Beatty { .. } => "beatty",
        Command::Sturmian { .. } => "sturmian",
        Command::Member { .. } => "member",
        Command::Decide { .. } => "decide",
        Command::Eliminate { .. } => "eliminate",
        Command::Gaps { .. } => "gaps",
        Command::Unstable { .. } => "unstable",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut body = out.json;
                let obj = body.as_object_mut().expect("object payload");
                obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                obj.insert("command".into(), json!(command_name(&cli.command)));
                obj.insert("slope".into(), json!(cli.slope.to_string()));
                println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
