use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use howe_symbols::branching::{omega_minus, omega_plus, theta_set, theta_star};
use howe_symbols::cells::{arrangements, cell, parse_pairs, Arrangement};
use howe_symbols::correspondence::{correspondence, render_relation, run_suite, Bounds, Format, SUITES};
use howe_symbols::derivative::{derive_full_pair, verify_chain};
use howe_symbols::relations::{RelationKind, Sign, SpecialPair};
use howe_symbols::theta::ThetaMap;
use howe_symbols::{enumerate_special, Error, Family, Result, SpecialSymbol, Symbol};

#[derive(Parser)]
#[command(
    name = "howe",
    version,
    about = "Symbols, cells and the Howe correspondence for (Sp, O^±) dual pairs"
)]
struct Cli {
    /// Output format: md, csv or json.
    #[arg(long, global = true, default_value = "md")]
    format: String,
    /// Allow enumerations beyond the size cap.
    #[arg(long, global = true)]
    force: bool,
    /// Largest allowed n + n' without --force.
    #[arg(long, global = true, default_value_t = 24, env = "HOWE_RANK_CAP")]
    cap: u32,
    /// Worker threads for parallel suites (defaults to all cores).
    #[arg(long, global = true, env = "HOWE_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on a single symbol.
    #[command(subcommand)]
    Symbol(SymbolCommand),
    /// List the special symbols of a rank and defect.
    EnumerateSpecials {
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value_t = 1)]
        defect: i32,
    },
    /// Print a relation between two special symbols as a table.
    Relation {
        /// One of D, B+, B-, Bbar+, Bnat+, Bnat-.
        kind: RelationKind,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Run the derivative chain of a special pair.
    Derive {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// List arrangements, or the cell of an arrangement and subset.
    Cells {
        #[arg(long = "Z")]
        z: Symbol,
        /// Arrangement such as `(4;-)(2;3)(0;1)`.
        #[arg(long)]
        phi: Option<Arrangement>,
        /// Subset of pairs such as `(2;3)`, or `-`.
        #[arg(long, default_value = "-")]
        psi: String,
    },
    /// The map θ^ε of a special pair.
    Theta {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "+")]
        epsilon: Sign,
    },
    /// Branching sets Ω^± of a symbol, and Θ, Θ* against a partner.
    Branch {
        symbol: Symbol,
        /// Compute Θ and Θ* of SYMBOL over Ω^+ of this symbol.
        #[arg(long)]
        over: Option<Symbol>,
    },
    /// The correspondence B for (Sp_2n, O^ε_2n').
    Correspond {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        np: u32,
        #[arg(long, default_value = "+")]
        epsilon: Sign,
    },
    /// Run a verification suite.
    Verify {
        /// Suite name, or `list`.
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_rank: u32,
        /// Restrict to one sign.
        #[arg(long)]
        epsilon: Option<Sign>,
    },
}

#[derive(Subcommand)]
enum SymbolCommand {
    /// Rank, defect, bipartition and special data of a symbol.
    Info { symbol: Symbol },
}

#[derive(Args)]
struct PairArgs {
    /// Special symbol of defect 1.
    #[arg(long = "Z")]
    z: Symbol,
    /// Special symbol of defect 0.
    #[arg(long = "Zp")]
    zp: Symbol,
}

impl PairArgs {
    fn pair(&self) -> Result<SpecialPair> {
        SpecialPair::new(&self.z, &self.zp)
    }
}

struct Ctx {
    format: Format,
    force: bool,
    cap: u32,
}

impl Ctx {
    fn guard(&self, size: u32) -> Result<()> {
        if size > self.cap && !self.force {
            return Err(Error::Invalid(format!("size {size} exceeds the cap {}; pass --force", self.cap)));
        }
        Ok(())
    }
}

fn names<'a>(xs: impl IntoIterator<Item = &'a Symbol>) -> Vec<String> {
    xs.into_iter().map(|s| s.to_string()).collect()
}

fn list(out: &mut String, title: &str, xs: &[String]) {
    out.push_str(&format!("{title}:\n"));
    for x in xs {
        out.push_str(&format!("- {x}\n"));
    }
}

fn emit(ctx: &Ctx, v: Value, md: impl FnOnce() -> String) -> String {
    match ctx.format {
        Format::Json => format!("{v}\n"),
        _ => md(),
    }
}

fn symbol_info(ctx: &Ctx, s: &Symbol) -> String {
    let bp = s.bipartition();
    let special = SpecialSymbol::new(s).ok();
    let v = json!({
        "symbol": s.to_string(),
        "rank": s.rank(),
        "defect": s.defect(),
        "bipartition": [bp.star, bp.sub],
        "transpose": s.transpose().to_string(),
        "special": s.is_special(),
        "degree": special.as_ref().map(|z| z.degree()),
    });
    emit(ctx, v, || {
        let mut out = format!("symbol: {s}\nrank: {}\ndefect: {}\n", s.rank(), s.defect());
        out.push_str(&format!("bipartition: {:?} {:?}\ntranspose: {}\n", bp.star, bp.sub, s.transpose()));
        out.push_str(&format!("special: {}\n", s.is_special()));
        if let Some(z) = special {
            out.push_str(&format!("degree: {}\n", z.degree()));
        }
        out
    })
}

fn derive(ctx: &Ctx, p: SpecialPair) -> Result<String> {
    let chain = derive_full_pair(p)?;
    verify_chain(&chain)?;
    if ctx.format == Format::Json {
        let mut out = String::new();
        for (q, st) in chain.pairs.iter().zip(&chain.steps) {
            let v = json!({ "Z": q.z.to_string(), "Zp": q.zp.to_string(), "step": st });
            out.push_str(&format!("{v}\n"));
        }
        let t = chain.terminal();
        let rel = t.relation(RelationKind::BPlus)?;
        let v = json!({
            "terminal": { "Z": t.z.to_string(), "Zp": t.zp.to_string() },
            "regular": t.z.is_regular() && t.zp.is_regular(),
            "one_to_one": rel.is_one_to_one(),
        });
        out.push_str(&format!("{v}\n"));
        return Ok(out);
    }
    let mut out = String::new();
    for (i, (q, st)) in chain.pairs.iter().zip(&chain.steps).enumerate() {
        out.push_str(&format!(
            "step {}: Case {} on ({}, {}) gives ({}, {}), C² = {}\n",
            i + 1,
            st.scan.case,
            q.z,
            q.zp,
            st.z1.to_symbol(),
            st.zp1.to_symbol(),
            1u64 << st.c_exp
        ));
    }
    for q in &chain.pairs[1..] {
        out.push('\n');
        out.push_str(&render_relation(&q.relation(RelationKind::BPlus)?, ctx.format));
    }
    let t = chain.terminal();
    let rel = t.relation(RelationKind::BPlus)?;
    out.push_str(&format!(
        "\nterminal: regular {}, one-to-one {}\n",
        t.z.is_regular() && t.zp.is_regular(),
        rel.is_one_to_one()
    ));
    Ok(out)
}

fn cells(ctx: &Ctx, z: &Symbol, phi: Option<Arrangement>, psi: &str) -> Result<String> {
    let z = SpecialSymbol::new(z)?;
    let Some(phi) = phi else {
        let all: Vec<String> = arrangements(&z).iter().map(|a| a.to_string()).collect();
        return Ok(emit(ctx, json!({ "Z": z.to_string(), "arrangements": all }), || {
            let mut out = String::new();
            list(&mut out, &format!("arrangements of {z}"), &all);
            out
        }));
    };
    let psi = parse_pairs(psi)?;
    let c = cell(&z, &phi, &psi)?;
    let class = |m| -> Result<&'static str> {
        Ok(if z.defect() == 1 {
            "S"
        } else if z.in_family(m, Family::Plus)? {
            "S+"
        } else {
            "S-"
        })
    };
    let mut rows = Vec::new();
    for (&m, s) in c.masks.iter().zip(&c.members) {
        rows.push((s.to_string(), class(m)?));
    }
    let v = json!({
        "Z": z.to_string(),
        "phi": phi.to_string(),
        "psi": psi.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "members": rows.iter().map(|(s, k)| json!({ "symbol": s, "family": k })).collect::<Vec<_>>(),
    });
    Ok(match ctx.format {
        Format::Json => format!("{v}\n"),
        Format::Csv => {
            let mut out = String::from("symbol,family\n");
            for (s, k) in &rows {
                out.push_str(&format!("\"{s}\",{k}\n"));
            }
            out
        }
        Format::Markdown => {
            let mut out = String::from("| symbol | family |\n|---|---|\n");
            for (s, k) in &rows {
                out.push_str(&format!("| {s} | {k} |\n"));
            }
            out
        }
    })
}

fn theta(ctx: &Ctx, p: &SpecialPair, eps: Sign) -> Result<String> {
    let t = ThetaMap::new(p, eps)?;
    let (src, dst) = match t.direction {
        howe_symbols::theta::Direction::Up => (&p.z, &p.zp),
        howe_symbols::theta::Direction::Down => (&p.zp, &p.z),
    };
    let mut graph = Vec::new();
    for m in t.domain() {
        graph.push((src.lambda(m).to_string(), dst.lambda(t.apply_mask(m)?).to_string()));
    }
    let v = json!({
        "Z": p.z.to_string(),
        "Zp": p.zp.to_string(),
        "epsilon": eps,
        "direction": t.direction,
        "graph": graph,
    });
    Ok(emit(ctx, v, || {
        let mut out = format!("θ^{eps} {:?} from {src} to {dst}\n", t.direction);
        for (a, b) in &graph {
            out.push_str(&format!("{a} ↦ {b}\n"));
        }
        out
    }))
}

fn branch(ctx: &Ctx, s: &Symbol, over: Option<&Symbol>) -> Result<String> {
    let plus = names(&omega_plus(s)?.members);
    let minus = names(&omega_minus(s)?.members);
    let mut v = json!({ "symbol": s.to_string(), "omega_plus": plus, "omega_minus": minus });
    let mut th = None;
    if let Some(o) = over {
        let om = omega_plus(o)?.members;
        let a = names(&theta_set(s, &om)?);
        let b = names(&theta_star(s, &om)?);
        v["over"] = json!(o.to_string());
        v["theta"] = json!(a);
        v["theta_star"] = json!(b);
        th = Some((o.clone(), a, b));
    }
    Ok(emit(ctx, v, || {
        let mut out = String::new();
        list(&mut out, &format!("Ω^+ of {s}"), &plus);
        list(&mut out, &format!("Ω^- of {s}"), &minus);
        if let Some((o, a, b)) = th {
            list(&mut out, &format!("Θ over Ω^+ of {o}"), &a);
            list(&mut out, &format!("Θ* over Ω^+ of {o}"), &b);
        }
        out
    }))
}

fn correspond(ctx: &Ctx, n: u32, np: u32, eps: Sign) -> Result<String> {
    ctx.guard(n + np)?;
    let t = correspondence(n, np, eps)?;
    t.check()?;
    Ok(match ctx.format {
        Format::Json => {
            format!("{}\n", serde_json::to_string(&t).map_err(|e| Error::Invalid(e.to_string()))?)
        }
        _ => {
            let mut out = format!("B for (Sp_{}, O^{eps}_{}): {} pairs\n", 2 * n, 2 * np, t.len());
            for b in &t.blocks {
                out.push_str(&format!("\nZ = {}, Z' = {}\n", b.z, b.zp));
                out.push_str(&render_relation(b, ctx.format));
            }
            out
        }
    })
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let ctx = Ctx { format: cli.format.parse()?, force: cli.force, cap: cli.cap };
    let out = match cli.command {
        Command::Symbol(SymbolCommand::Info { symbol }) => symbol_info(&ctx, &symbol),
        Command::EnumerateSpecials { rank, defect } => {
            let all = names(&enumerate_special(rank, defect)?);
            emit(&ctx, json!(all), || all.join("\n") + "\n")
        }
        Command::Relation { kind, pair } => render_relation(&pair.pair()?.relation(kind)?, ctx.format),
        Command::Derive { pair } => derive(&ctx, pair.pair()?)?,
        Command::Cells { z, phi, psi } => cells(&ctx, &z, phi, &psi)?,
        Command::Theta { pair, epsilon } => theta(&ctx, &pair.pair()?, epsilon)?,
        Command::Branch { symbol, over } => branch(&ctx, &symbol, over.as_ref())?,
        Command::Correspond { n, np, epsilon } => correspond(&ctx, n, np, epsilon)?,
        Command::Verify { suite, max_rank, epsilon } => {
            if suite == "list" {
                let rows: Vec<String> = SUITES.iter().map(|(n, d)| format!("{n}: {d}")).collect();
                return Ok((rows.join("\n") + "\n", true));
            }
            ctx.guard(max_rank)?;
            let r = run_suite(&suite, Bounds { max_rank, eps: epsilon })?;
            return Ok((format!("{r}\n"), r.ok));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
