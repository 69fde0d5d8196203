//! `qbv`: command-line driver for the verifications and graph complex
//! computations in `qbv-core`.
//!
//! Exit codes: 0 success, 1 verification failure or unequal tables,
//! 2 usage error, 3 a differential that does not square to zero.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbv_core::feyn::{
    self, build_afeyn_qbv, build_feyn_bv, compare_cohomology_between, top_weight, verify_phi_auto,
    verify_phie_truncated, DimsTable, GraphComplex,
};
use qbv_core::fmorph::verify_f;
use qbv_core::linalg::{fmt_rational, verify_d_squared, RankMode};
use qbv_core::psi::{p_identity_sweep, p_polynomial, recursion_sweep, tau_bracket, MultiIndex};
use qbv_core::qbv::verify_homotopy_relations;
use qbv_core::{Error, Label};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "qbv",
    version,
    about = "Exact checks for the BV and QBV graph complexes"
)]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for the modular rank computations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Graph cache directory; defaults to $QBV_CACHE, then `.qbv-cache`.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// ψ-class brackets and the polynomials p_n.
    Psi(PsiArgs),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Feyn(FeynCmd),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PsiArgs {
    /// Multi-index `(i_0,i_1,…)`; a single number `k` means τ_0^k.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    pn: Option<usize>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Homotopy relations of the QBV structure.
    Axioms {
        #[arg(long, default_value_t = 8)]
        max_arity: usize,
        #[arg(long, default_value_t = 3)]
        max_vdeg: u32,
        #[arg(long, default_value_t = 4)]
        max_upow: u32,
    },
    /// The morphism f is a chain map.
    F {
        #[arg(long, default_value_t = 7)]
        max_arity: usize,
    },
    /// Genus-zero recursions and the p_n identity.
    Recursion {
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[arg(long, default_value_t = 4)]
        max_abc: u32,
        /// Largest label set for the p_n identity.
        #[arg(long, default_value_t = 7)]
        max_set: usize,
    },
    /// Edge complex truncated at total weight N.
    Phie {
        #[arg(short = 'N', long = "truncation", default_value_t = 6)]
        n: u32,
    },
}

#[derive(Args, Clone, Copy)]
struct Gnw {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    weight: i32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    #[value(name = "feyn_bv")]
    FeynBv,
    #[value(name = "afeyn_qbv")]
    AfeynQbv,
}

#[derive(Subcommand)]
enum FeynCmd {
    /// Cohomology dimensions of one side. For `afeyn_qbv` the weight is
    /// the complementary one, 6g−6+2n−W.
    Dims {
        #[command(flatten)]
        at: Gnw,
        #[arg(long, value_enum, default_value_t = SideArg::FeynBv)]
        side: SideArg,
        /// Also write the JSON table to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compare both sides in complementary degree and weight.
    Compare {
        #[command(flatten)]
        at: Gnw,
    },
    /// Core graphs of genus g with n legs.
    Graphs {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Check that the comparison map is a quasi-isomorphism.
    Phi {
        #[command(flatten)]
        at: Gnw,
    },
}

/// Outcome of a command: the exit code and whatever was already printed.
enum Fail {
    Usage(String),
    Verification,
    DSquared(String),
    Internal(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::InvalidInput(m) => Fail::Usage(m),
            other => Fail::Internal(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
    {
        eprintln!("qbv: {e}");
        return ExitCode::from(2);
    }
    let cache = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os(feyn::cache::CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(feyn::cache::DEFAULT_CACHE_DIR));
    std::env::set_var(feyn::cache::CACHE_ENV, &cache);

    let out = match &cli.cmd {
        Cmd::Psi(a) => cmd_psi(a, cli.format),
        Cmd::Verify(v) => cmd_verify(v, cli.format),
        Cmd::Feyn(f) => cmd_feyn(f, &cli),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Verification) => ExitCode::from(1),
        Err(Fail::Usage(m)) => {
            eprintln!("qbv: {m}");
            ExitCode::from(2)
        }
        Err(Fail::DSquared(m)) => {
            eprintln!("qbv: d² ≠ 0 on {m}");
            ExitCode::from(3)
        }
        Err(Fail::Internal(m)) => {
            eprintln!("qbv: {m}");
            ExitCode::from(1)
        }
    }
}

fn json(v: impl serde::Serialize) -> String {
    serde_json::to_string(&v).expect("plain data serializes")
}

fn cmd_psi(a: &PsiArgs, format: Format) -> Outcome {
    if let Some(arg) = &a.tau {
        // a bare number k is the multi-index (k), i.e. τ_0^k
        let i: MultiIndex = arg.parse()?;
        let v = tau_bracket(&i)?;
        match format {
            Format::Json => println!(
                "{}",
                json(serde_json::json!({"index": i.0, "value": fmt_rational(&v)}))
            ),
            _ => println!("{}", fmt_rational(&v)),
        }
    } else if let Some(n) = a.pn {
        let labels: Vec<Label> = (1..=n as u32).map(Label).collect();
        let p = p_polynomial(n, &labels)?;
        match format {
            Format::Json => println!("{}", p.to_json()),
            Format::Csv => {
                println!("exponents,coeff");
                for (e, c) in p.sorted_terms() {
                    let e: Vec<String> = e.iter().map(u32::to_string).collect();
                    println!("{},{}", e.join(" "), fmt_rational(&c));
                }
            }
            Format::Text => println!("{p}"),
        }
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Prints rows as an aligned table or CSV, or `payload` as JSON.
fn emit_rows(
    format: Format,
    header: &[&str],
    rows: &[Vec<String>],
    payload: impl serde::Serialize,
) {
    match format {
        Format::Json => println!("{}", json(payload)),
        Format::Csv => {
            println!("{}", header.join(","));
            for r in rows {
                println!("{}", r.join(","));
            }
        }
        Format::Text => {
            let widths: Vec<usize> = (0..header.len())
                .map(|c| {
                    rows.iter()
                        .map(|r| r[c].len())
                        .chain([header[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                println!("{}", padded.join("  ").trim_end());
            };
            line(header.to_vec());
            for r in rows {
                line(r.iter().map(String::as_str).collect());
            }
        }
    }
}

fn cmd_verify(v: &VerifyCmd, format: Format) -> Outcome {
    let ok = match *v {
        VerifyCmd::Axioms {
            max_arity,
            max_vdeg,
            max_upow,
        } => {
            if max_arity == 0 {
                return Err(Fail::Usage("--max-arity must be positive".into()));
            }
            let r = verify_homotopy_relations(max_arity, max_vdeg, max_upow);
            let rows: Vec<Vec<String>> = r
                .stats
                .iter()
                .map(|s| {
                    vec![
                        s.arity.to_string(),
                        s.tuples.to_string(),
                        s.evaluated.to_string(),
                        s.failures.to_string(),
                        verdict(s.failures == 0).into(),
                    ]
                })
                .collect();
            let payload = serde_json::json!({
                "passed": r.passed(),
                "relations": r.stats.iter().map(|s| serde_json::json!({
                    "arity": s.arity, "tuples": s.tuples, "evaluated": s.evaluated, "failures": s.failures,
                })).collect::<Vec<_>>(),
                "counterexamples": r.failures,
            });
            emit_rows(
                format,
                &["arity", "tuples", "evaluated", "failures", "result"],
                &rows,
                payload,
            );
            if format != Format::Json {
                for f in &r.failures {
                    eprintln!(
                        "counterexample arity {}: {:?} glued {:?}: {}",
                        f.arity, f.tuple, f.glue, f.residual
                    );
                }
            }
            r.passed()
        }
        VerifyCmd::F { max_arity } => {
            if max_arity < 3 {
                return Err(Fail::Usage("--max-arity must be at least 3".into()));
            }
            let r = verify_f(max_arity)?;
            let rows: Vec<Vec<String>> = r
                .iter()
                .map(|x| {
                    vec![
                        x.arity.to_string(),
                        verdict(x.c_case).into(),
                        verdict(x.e_case).into(),
                        verdict(x.paths_agree).into(),
                    ]
                })
                .collect();
            let ok = r.iter().all(|x| x.c_case && x.e_case && x.paths_agree);
            emit_rows(
                format,
                &["arity", "c", "e", "paths_agree"],
                &rows,
                serde_json::json!({"passed": ok, "rows": r}),
            );
            ok
        }
        VerifyCmd::Recursion {
            max_n,
            max_abc,
            max_set,
        } => {
            if max_n < 3 || max_set < 3 {
                return Err(Fail::Usage(
                    "--max-n and --max-set must be at least 3".into(),
                ));
            }
            let rec = recursion_sweep(max_n, max_abc);
            let p = p_identity_sweep(max_set)?;
            let mut rows = vec![
                vec![
                    "asym".into(),
                    rec.asym_checked.to_string(),
                    verdict(!rec.failures.iter().any(|f| f.starts_with("asym"))).into(),
                ],
                vec![
                    "sym".into(),
                    rec.sym_checked.to_string(),
                    verdict(!rec.failures.iter().any(|f| f.starts_with("sym"))).into(),
                ],
            ];
            rows.extend(p.iter().map(|r| {
                vec![
                    format!("p_identity |A|={}", r.size),
                    r.pairs.to_string(),
                    verdict(r.passed).into(),
                ]
            }));
            let ok = rec.passed() && p.iter().all(|r| r.passed);
            emit_rows(
                format,
                &["identity", "instances", "result"],
                &rows,
                serde_json::json!({"passed": ok, "recursion": rec, "p_identity": p}),
            );
            for f in rec.failures.iter().take(20) {
                eprintln!("counterexample: {f}");
            }
            ok
        }
        VerifyCmd::Phie { n } => {
            if n == 0 {
                return Err(Fail::Usage("-N must be positive".into()));
            }
            let r = verify_phie_truncated(n)?;
            let mut rows: Vec<Vec<String>> = r
                .strata
                .iter()
                .map(|s| {
                    let classes: usize = s.dims.values().sum();
                    vec![
                        format!("stratum k={}", s.k),
                        format!("classes={classes}"),
                        verdict(classes == 1 && s.represented_by_phi).into(),
                    ]
                })
                .collect();
            rows.extend(r.kernels.iter().map(|k| {
                vec![
                    format!("kernel n={}", k.n),
                    format!("rank={}", k.rank),
                    verdict(k.rank == k.n as usize + 1 && k.alternating_kernel && k.shape_matches)
                        .into(),
                ]
            }));
            rows.push(vec![
                "leg map".into(),
                String::new(),
                verdict(r.phi_l_iso).into(),
            ]);
            emit_rows(
                format,
                &["check", "detail", "result"],
                &rows,
                serde_json::json!({"passed": r.passed(), "report": r}),
            );
            r.passed()
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Fail::Verification)
    }
}

fn check_gnw(at: Gnw) -> Outcome {
    if 2 * at.g + at.n < 3 {
        return Err(Fail::Usage(format!(
            "unstable (g,n) = ({},{}): need 2g+n ≥ 3",
            at.g, at.n
        )));
    }
    if at.weight != 0 && at.weight != 2 {
        return Err(Fail::Usage(format!(
            "weight must be 0 or 2, got {}",
            at.weight
        )));
    }
    Ok(())
}

fn checked(c: GraphComplex) -> std::result::Result<GraphComplex, Fail> {
    if verify_d_squared(&c.complex) {
        Ok(c)
    } else {
        let l = &c.label;
        Err(Fail::DSquared(format!(
            "{} (g={}, n={}, W={})",
            l.side.as_str(),
            l.g,
            l.n,
            l.weight
        )))
    }
}

fn both_sides(at: Gnw) -> std::result::Result<(GraphComplex, GraphComplex), Fail> {
    check_gnw(at)?;
    let source = checked(build_feyn_bv(at.g, at.n, at.weight)?)?;
    let target = checked(build_afeyn_qbv(
        at.g,
        at.n,
        top_weight(at.g, at.n) - at.weight,
    )?)?;
    Ok((source, target))
}

fn dims_text(d: &BTreeMap<i32, usize>) -> String {
    let parts: Vec<String> = d
        .iter()
        .filter(|(_, x)| **x > 0)
        .map(|(k, x)| format!("{k}:{x}"))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_feyn(f: &FeynCmd, cli: &Cli) -> Outcome {
    let mode = RankMode::Verified { seed: cli.seed };
    match f {
        FeynCmd::Dims { at, side, emit } => {
            check_gnw(*at)?;
            let c = match side {
                SideArg::FeynBv => build_feyn_bv(at.g, at.n, at.weight)?,
                SideArg::AfeynQbv => {
                    build_afeyn_qbv(at.g, at.n, top_weight(at.g, at.n) - at.weight)?
                }
            };
            let t = DimsTable::from_complex(&checked(c)?, mode)?;
            let text = t.to_json();
            if let Some(path) = emit {
                std::fs::write(path, format!("{text}\n"))
                    .map_err(|e| Fail::Internal(format!("{}: {e}", path.display())))?;
            }
            match cli.format {
                Format::Json => println!("{text}"),
                Format::Csv => {
                    println!("degree,dim");
                    for (d, x) in t.dims()? {
                        println!("{d},{x}");
                    }
                }
                Format::Text => {
                    println!(
                        "g={} n={} W={} side={}",
                        t.g,
                        t.n,
                        t.weight,
                        side_name(*side)
                    );
                    for (d, x) in t.dims()? {
                        println!("H^{d} = {x}");
                    }
                    println!("euler = {}", t.euler);
                }
            }
            Ok(())
        }
        FeynCmd::Compare { at } => {
            let (s, t) = both_sides(*at)?;
            let c = compare_cohomology_between(&s, &t, mode)?;
            match cli.format {
                Format::Json => println!("{}", json(&c)),
                Format::Csv => {
                    println!("k,feyn_bv,afeyn_qbv");
                    let ks: std::collections::BTreeSet<i32> = c
                        .feyn_bv
                        .keys()
                        .chain(c.afeyn_qbv.keys())
                        .copied()
                        .collect();
                    for k in ks {
                        let get = |m: &BTreeMap<i32, usize>| m.get(&k).copied().unwrap_or(0);
                        println!("{k},{},{}", get(&c.feyn_bv), get(&c.afeyn_qbv));
                    }
                }
                Format::Text => {
                    println!(
                        "g={} n={} W={} top={}",
                        c.g,
                        c.n,
                        c.weight,
                        top_weight(c.g, c.n)
                    );
                    println!(
                        "feyn_bv   H^-k:      {}  euler {}",
                        dims_text(&c.feyn_bv),
                        c.euler_feyn_bv
                    );
                    println!(
                        "afeyn_qbv H^(top-k): {}  euler {}",
                        dims_text(&c.afeyn_qbv),
                        c.euler_afeyn_qbv
                    );
                }
            }
            if cli.format != Format::Json {
                println!("{}", if c.equal { "EQUAL" } else { "DIFFERENT" });
            }
            if c.equal {
                Ok(())
            } else {
                Err(Fail::Verification)
            }
        }
        FeynCmd::Graphs { g, n } => {
            check_gnw(Gnw {
                g: *g,
                n: *n,
                weight: 0,
            })?;
            let gs = feyn::cache::graphs(*g, *n)?;
            match cli.format {
                Format::Json => {
                    let list: Vec<_> = gs
                        .iter()
                        .map(|x| serde_json::json!({"vertices": x.vertices, "edges": x.edges, "legs": x.legs}))
                        .collect();
                    println!(
                        "{}",
                        json(
                            serde_json::json!({"g": g, "n": n, "count": gs.len(), "graphs": list})
                        )
                    );
                }
                _ => print!("{}", feyn::graphs_to_text(&gs)),
            }
            Ok(())
        }
        FeynCmd::Phi { at } => {
            both_sides(*at)?;
            let r = verify_phi_auto(at.g, at.n, at.weight, mode)?;
            let rows = vec![
                vec!["chain_map".into(), verdict(r.chain_map).into()],
                vec!["weights".into(), verdict(r.weights).into()],
                vec!["quasi_iso".into(), verdict(r.quasi_iso).into()],
            ];
            emit_rows(cli.format, &["check", "result"], &rows, &r);
            if r.passed() {
                Ok(())
            } else {
                Err(Fail::Verification)
            }
        }
    }
}

fn side_name(s: SideArg) -> &'static str {
    match s {
        SideArg::FeynBv => "feyn_bv",
        SideArg::AfeynQbv => "afeyn_qbv",
    }
}
