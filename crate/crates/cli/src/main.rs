//! Command-line surface for the parallel repetition workbench.
//!
//! Every subcommand is a thin adapter over the library: identical inputs
//! give identical results to direct library calls. Exit codes: 0 for a
//! successful run or positive verdict, 1 for a negative verdict with a
//! witness, 2 for usage or format errors.

mod report;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prgames::conditioning::{
    self, build_hitting_distribution, normalize_certificate, parse_certificate, pr_upper_bound,
    render_certificate, verify_certificate, HitMode, NamedCertificate,
};
use prgames::cycles::{self, LemmaKind};
use prgames::games::{
    self, build_game_gs, coloring_value, dhj_coeff, equidistributed_set, evaluate_strategy,
    game_value, gs_canonical_acceptance, has_combinatorial_line, hj_coeff, parse_game,
    parse_string_set, render_game, render_string_set, repeat_game, Strategy,
};
use prgames::hypergraph::{self, parse_hypergraph, render_hypergraph};
use prgames::spgraph::{certify_sp, certify_tree, sp_parse};
use prgames::{ratio, Error, Ratio};

use report::{format_ratio, Format, RunReport};

#[derive(Parser)]
#[command(name = "prgames", about = "workbench for parallel repetition of multi-prover games")]
struct Cli {
    /// report format
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
    /// include wall-clock timing in the report (breaks byte-stability)
    #[arg(long, global = true)]
    timings: bool,
    /// worker threads (default: PRGAMES_WORKERS or 1)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// strategy-enumeration budget
    #[arg(long, global = true, default_value_t = games::DEFAULT_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fmt {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// hypergraph file operations
    Hypergraph {
        #[command(subcommand)]
        cmd: HypergraphCmd,
    },
    /// certificate verification and synthesis
    Cert {
        #[command(subcommand)]
        cmd: CertCmd,
    },
    /// same-set-hitting distributions
    Hitting {
        #[command(subcommand)]
        cmd: HittingCmd,
    },
    /// game values and repetition
    Game {
        #[command(subcommand)]
        cmd: GameCmd,
    },
    /// density line-free combinatorics
    Dhj {
        #[command(subcommand)]
        cmd: DhjCmd,
    },
    /// chromatic line-free combinatorics
    Hj {
        #[command(subcommand)]
        cmd: HjCmd,
    },
    /// coloring games
    Coloring {
        #[command(subcommand)]
        cmd: ColoringCmd,
    },
    /// closed-form repetition bounds
    Bound {
        #[command(subcommand)]
        cmd: BoundCmd,
    },
    /// cycle-with-shortcuts non-constructibility checks
    Cycle {
        #[command(subcommand)]
        cmd: CycleCmd,
    },
}

#[derive(Subcommand)]
enum HypergraphCmd {
    /// validate a hypergraph file and report its shape
    Check {
        file: PathBuf,
        /// require every vertex to be covered by an edge
        #[arg(long)]
        question_set: bool,
    },
    /// enumerate homomorphisms between two hypergraphs
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Subcommand)]
enum CertCmd {
    /// replay a certificate; optionally check isomorphism with a target
    Verify {
        file: PathBuf,
        #[arg(long)]
        expect_iso: Option<PathBuf>,
        /// write the replayed hypergraph here
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// merge all collapses into one final step
    Normalize {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// generate a certificate for a named family
    Named {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// synthesize a certificate for a series-parallel bipartite graph
    Sp {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// synthesize a certificate for a tree
    Tree {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// complete hypergraph with these side sizes, e.g. 2,2,2
    #[arg(long, value_delimiter = ',')]
    complete: Option<Vec<usize>>,
    /// membership graph of the nonempty subsets of [k]
    #[arg(long)]
    set_graph: Option<usize>,
}

#[derive(Subcommand)]
enum HittingCmd {
    /// build the distribution for a certificate and target, report bounds
    Build {
        cert: PathBuf,
        target: PathBuf,
    },
    /// check the same-set-hitting inequality over subsets of the n-fold
    /// product
    Verify {
        cert: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum GameCmd {
    /// exact value of a game file
    Value { file: PathBuf },
    /// materialize the n-fold repetition
    Repeat {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// build the line-set game for a string set; reports its value and the
    /// canonical acceptance of the n-fold repetition
    Gs {
        strings: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// repetitions for the canonical-strategy acceptance
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// search for a homomorphism vector good for a set of question vectors
    GoodVector {
        graph: PathBuf,
        vectors: PathBuf,
    },
    /// lift a repeated strategy through a good vector
    Lift {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum DhjCmd {
    /// maximum measure of a line-free subset, with witness
    Coeff {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        n: usize,
        /// write the witness set here
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// search a string-set file for a combinatorial line
    Line { strings: PathBuf },
    /// the equidistributed set over [r]^n
    Equi {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HjCmd {
    /// least color count avoiding monochromatic lines
    Coeff {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ColoringCmd {
    /// exact color-value of a coloring game file
    Value { file: PathBuf },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// repetition bound for a question set constructible with k doublings
    Pr {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
    },
    /// bound for a non-uniform question distribution
    Nonuniform {
        /// least question probability times the question count, as p/q
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = BoundFn::Zero)]
        f: BoundFn,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundFn {
    /// f ≡ 0
    Zero,
    /// f(x) = 2^(-x)
    Exp2,
}

#[derive(Subcommand)]
enum CycleCmd {
    /// run the non-constructibility checks for the cycle with shortcuts
    Verify {
        #[arg(long)]
        n: usize,
        /// run a single check instead of all three
        #[arg(long, value_enum)]
        check: Option<Check>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    B,
    Ad,
    Natural,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        Fmt::Text => Format::Text,
        Fmt::Json => Format::Json,
    };
    let workers = cli
        .workers
        .or_else(|| {
            std::env::var("PRGAMES_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1);
    let started = Instant::now();
    match run(&cli, workers) {
        Ok((mut report, negative)) => {
            report.workers = workers;
            if cli.timings {
                report.timing_ms = Some(started.elapsed().as_millis());
            }
            print!("{}", report.render(format));
            if negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    if let Some(p) = path {
        std::fs::write(p, content).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn parse_ratio_arg(text: &str) -> Result<Ratio, Error> {
    let (p, q) = text.split_once('/').unwrap_or((text, "1"));
    let p: i64 = p
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational `{text}`")))?;
    let q: i64 = q
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational `{text}`")))?;
    if q == 0 {
        return Err(Error::Invalid("zero denominator".into()));
    }
    Ok(ratio(p, q))
}

/// Runs one subcommand; the boolean is true for a negative verdict.
fn run(cli: &Cli, workers: usize) -> Result<(RunReport, bool), Error> {
    let budget = cli.budget;
    match &cli.command {
        Cmd::Hypergraph { cmd } => match cmd {
            HypergraphCmd::Check { file, question_set } => {
                let text = read(file)?;
                let g = parse_hypergraph(&text)?;
                let mut rep = RunReport::new("hypergraph check");
                rep.digest(&[&text]);
                rep.value("arity", g.arity());
                rep.value("vertices", g.vertex_count());
                rep.value("edges", g.edge_count());
                rep.value("components", g.connected_components().len());
                let qs = g.is_question_set();
                rep.value("question_set", qs);
                if *question_set && !qs {
                    rep.verdict = "invalid: impossible questions present".into();
                    return Ok((rep, true));
                }
                rep.verdict = "valid".into();
                Ok((rep, false))
            }
            HypergraphCmd::Hom {
                source,
                target,
                limit,
                count_only,
            } => {
                let stext = read(source)?;
                let ttext = read(target)?;
                let s = parse_hypergraph(&stext)?;
                let t = parse_hypergraph(&ttext)?;
                let homs = hypergraph::enumerate_homomorphisms(&s, &t, *limit)?;
                let mut rep = RunReport::new("hypergraph hom");
                rep.digest(&[&stext, &ttext]);
                rep.value("count", homs.len());
                if !*count_only {
                    for (i, h) in homs.iter().enumerate() {
                        rep.details.push(format!("hom {i}: {:?}", h.maps));
                    }
                }
                rep.verdict = "enumerated".into();
                Ok((rep, false))
            }
        },
        Cmd::Cert { cmd } => match cmd {
            CertCmd::Verify { file, expect_iso, out } => {
                let text = read(file)?;
                let cert = parse_certificate(&text)?;
                let mut rep = RunReport::new("cert verify");
                rep.digest(&[&text]);
                match verify_certificate(&cert) {
                    Ok(replay) => {
                        rep.value("doublings", cert.doubling_count());
                        rep.value("collapses", cert.collapse_count());
                        rep.value("vertices", replay.graph.vertex_count());
                        rep.value("edges", replay.graph.edge_count());
                        write_out(out, &render_hypergraph(&replay.graph))?;
                        if let Some(target) = expect_iso {
                            let ttext = read(target)?;
                            let t = parse_hypergraph(&ttext)?;
                            if hypergraph::is_isomorphic(&replay.graph, &t) {
                                rep.verdict = "verified, isomorphic to target".into();
                            } else {
                                rep.verdict = "verified, NOT isomorphic to target".into();
                                return Ok((rep, true));
                            }
                        } else {
                            rep.verdict = "verified".into();
                        }
                        Ok((rep, false))
                    }
                    Err(e) => {
                        rep.verdict = format!("invalid certificate: {e}");
                        Ok((rep, true))
                    }
                }
            }
            CertCmd::Normalize { file, out } => {
                let text = read(file)?;
                let cert = parse_certificate(&text)?;
                let normal = normalize_certificate(&cert)?;
                let mut rep = RunReport::new("cert normalize");
                rep.digest(&[&text]);
                rep.value("doublings", normal.doubling_count());
                rep.value("collapses", normal.collapse_count());
                write_out(out, &render_certificate(&normal))?;
                if out.is_none() {
                    rep.details.push(render_certificate(&normal));
                }
                rep.verdict = "normalized".into();
                Ok((rep, false))
            }
            CertCmd::Named { family, out } => {
                let spec = match (&family.complete, &family.set_graph) {
                    (Some(sizes), None) => NamedCertificate::Complete(sizes.clone()),
                    (None, Some(k)) => NamedCertificate::SetGraph(*k),
                    _ => {
                        return Err(Error::Invalid(
                            "pass exactly one of --complete or --set-graph".into(),
                        ))
                    }
                };
                let cert = conditioning::certify_named(&spec)?;
                let replay = verify_certificate(&cert)?;
                let mut rep = RunReport::new("cert named");
                rep.digest(&[&format!("{spec:?}")]);
                rep.value("doublings", cert.doubling_count());
                rep.value("edges", replay.graph.edge_count());
                write_out(out, &render_certificate(&cert))?;
                if out.is_none() {
                    rep.details.push(render_certificate(&cert));
                }
                rep.verdict = "generated".into();
                Ok((rep, false))
            }
            CertCmd::Sp { graph, out } => {
                let text = read(graph)?;
                let g = parse_hypergraph(&text)?;
                let mut rep = RunReport::new("cert sp");
                rep.digest(&[&text]);
                match sp_parse(&g)? {
                    None => {
                        rep.verdict = "graph is not series-parallel".into();
                        Ok((rep, true))
                    }
                    Some(tree) => {
                        let sc = certify_sp(&tree)?;
                        let replay = verify_certificate(&sc.certificate)?;
                        if !hypergraph::is_isomorphic(&replay.graph, &g) {
                            return Err(Error::Internal(
                                "synthesized certificate does not replay to the input".into(),
                            ));
                        }
                        rep.value("doublings", sc.certificate.doubling_count());
                        rep.value("collapses", sc.certificate.collapse_count());
                        write_out(out, &render_certificate(&sc.certificate))?;
                        if out.is_none() {
                            rep.details.push(render_certificate(&sc.certificate));
                        }
                        rep.verdict = "certified".into();
                        Ok((rep, false))
                    }
                }
            }
            CertCmd::Tree { graph, out } => {
                let text = read(graph)?;
                let g = parse_hypergraph(&text)?;
                let sc = certify_tree(&g)?;
                let mut rep = RunReport::new("cert tree");
                rep.digest(&[&text]);
                rep.value("doublings", sc.certificate.doubling_count());
                write_out(out, &render_certificate(&sc.certificate))?;
                if out.is_none() {
                    rep.details.push(render_certificate(&sc.certificate));
                }
                rep.verdict = "certified".into();
                Ok((rep, false))
            }
        },
        Cmd::Hitting { cmd } => match cmd {
            HittingCmd::Build { cert, target } => {
                let ctext = read(cert)?;
                let ttext = read(target)?;
                let c = parse_certificate(&ctext)?;
                let t = parse_hypergraph(&ttext)?;
                let dist = build_hitting_distribution(&c, &t)?;
                let mut rep = RunReport::new("hitting build");
                rep.digest(&[&ctext, &ttext]);
                rep.value("support", dist.support.len());
                rep.value_ratio("min_probability", &dist.min_probability());
                rep.value_ratio("min_probability_bound", &dist.min_probability_bound());
                rep.value("doublings", dist.doublings);
                let ok = dist.min_probability() >= dist.min_probability_bound();
                rep.verdict = if ok {
                    "minimum probability bound holds".into()
                } else {
                    "minimum probability bound FAILS".into()
                };
                Ok((rep, !ok))
            }
            HittingCmd::Verify {
                cert,
                target,
                n,
                mode,
                seed,
                samples,
            } => {
                let ctext = read(cert)?;
                let ttext = read(target)?;
                let c = parse_certificate(&ctext)?;
                let t = parse_hypergraph(&ttext)?;
                let dist = build_hitting_distribution(&c, &t)?;
                let hit_mode = match mode {
                    Mode::Exhaustive => HitMode::Exhaustive,
                    Mode::Sampled => HitMode::Sampled {
                        seed: *seed,
                        count: *samples,
                    },
                };
                let report = conditioning::verify_hitting(&dist, *n, hit_mode)?;
                let mut rep = RunReport::new("hitting verify");
                rep.digest(&[&ctext, &ttext, &format!("{n}:{seed}:{samples}")]);
                rep.value("checked_subsets", report.checked);
                rep.value("exponent", report.c);
                rep.value("failures", report.failures.len());
                for (size, prob, bound) in report.failures.iter().take(10) {
                    rep.details.push(format!(
                        "failure: |S| = {size}, Pr = {}, bound = {}",
                        format_ratio(prob),
                        format_ratio(bound)
                    ));
                }
                let ok = report.all_hold();
                rep.verdict = if ok {
                    "same-set hitting inequality holds".into()
                } else {
                    "same-set hitting inequality FAILS".into()
                };
                Ok((rep, !ok))
            }
        },
        Cmd::Game { cmd } => match cmd {
            GameCmd::Value { file } => {
                let text = read(file)?;
                let g = parse_game(&text)?;
                let (v, s) = game_value(&g, budget)?;
                let mut rep = RunReport::new("game value");
                rep.digest(&[&text]);
                rep.value_ratio("value", &v);
                rep.details.push(format!("witness: {:?}", s.maps));
                rep.verdict = "computed".into();
                Ok((rep, false))
            }
            GameCmd::Repeat { file, n, out } => {
                let text = read(file)?;
                let g = parse_game(&text)?;
                let gn = repeat_game(&g, *n, budget)?;
                let mut rep = RunReport::new("game repeat");
                rep.digest(&[&text, &n.to_string()]);
                rep.value("questions", gn.edge_list().len());
                write_out(out, &render_game(&gn))?;
                rep.verdict = "repeated".into();
                Ok((rep, false))
            }
            GameCmd::Gs { strings, r, n, out } => {
                let stext = read(strings)?;
                let s = parse_string_set(&stext)?;
                let g = build_game_gs(*r, s.n, &s)?;
                let (v, _) = game_value(&g, budget)?;
                let accept = gs_canonical_acceptance(*r, s.n, &s)?;
                let mut rep = RunReport::new("game gs");
                rep.digest(&[&stext, &r.to_string(), &n.to_string()]);
                rep.value_ratio("value", &v);
                rep.value_ratio("measure", &s.measure());
                rep.value_ratio("canonical_acceptance_n1", &accept);
                rep.value(
                    "line",
                    has_combinatorial_line(&s)
                        .map(|p| p.to_string())
                        .unwrap_or_else(|| "absent".into()),
                );
                write_out(out, &render_game(&g))?;
                rep.verdict = "built".into();
                Ok((rep, false))
            }
            GameCmd::GoodVector { graph, vectors } => {
                let gtext = read(graph)?;
                let vtext = read(vectors)?;
                let g = parse_hypergraph(&gtext)?;
                let (n, set) = parse_qvectors(&vtext)?;
                let found = games::find_good_vector(&g, n, &set, budget)?;
                let mut rep = RunReport::new("game good-vector");
                rep.digest(&[&gtext, &vtext]);
                match found {
                    Some(gv) => {
                        rep.value("identity_coordinate", gv.identity_coordinate);
                        for (i, h) in gv.homs.iter().enumerate() {
                            rep.details.push(format!("f_{}: {:?}", i + 1, h.maps));
                        }
                        rep.verdict = "good vector found".into();
                        Ok((rep, false))
                    }
                    None => {
                        rep.verdict = "no good vector".into();
                        Ok((rep, true))
                    }
                }
            }
            GameCmd::Lift { game, strategy, n } => {
                let gtext = read(game)?;
                let stext = read(strategy)?;
                let g = parse_game(&gtext)?;
                let rs = parse_strategy(&stext, g.arity())?;
                let winning = games_winning_set(&g, *n, &rs)?;
                let gv = games::find_good_vector(&g.questions, *n, &winning, budget)?
                    .ok_or_else(|| Error::Invalid("no good vector for the winning set".into()))?;
                let lifted = games::lift_strategy(&g, &rs, *n, &gv, &winning)?;
                let value = evaluate_strategy(&g, &lifted)?;
                let mut rep = RunReport::new("game lift");
                rep.digest(&[&gtext, &stext, &n.to_string()]);
                rep.value_ratio("lifted_value", &value);
                rep.details.push(format!("lifted: {:?}", lifted.maps));
                rep.verdict = "lifted".into();
                Ok((rep, false))
            }
        },
        Cmd::Dhj { cmd } => match cmd {
            DhjCmd::Coeff { r, n, out } => {
                let (v, witness) = dhj_coeff(*r, *n, budget)?;
                let mut rep = RunReport::new("dhj coeff");
                rep.digest(&[&r.to_string(), &n.to_string()]);
                rep.value_ratio("coefficient", &v);
                rep.value("witness_size", witness.strings.len());
                write_out(out, &render_string_set(&witness))?;
                if out.is_none() {
                    rep.details.push(render_string_set(&witness));
                }
                rep.verdict = "computed".into();
                Ok((rep, false))
            }
            DhjCmd::Line { strings } => {
                let text = read(strings)?;
                let s = parse_string_set(&text)?;
                let mut rep = RunReport::new("dhj line");
                rep.digest(&[&text]);
                match has_combinatorial_line(&s) {
                    Some(p) => {
                        rep.value("pattern", p.to_string());
                        rep.verdict = "line found".into();
                        Ok((rep, false))
                    }
                    None => {
                        rep.verdict = "line-free".into();
                        Ok((rep, true))
                    }
                }
            }
            DhjCmd::Equi { r, n, out } => {
                let s = equidistributed_set(*r, *n)?;
                let mut rep = RunReport::new("dhj equi");
                rep.digest(&[&r.to_string(), &n.to_string()]);
                rep.value("size", s.strings.len());
                rep.value_ratio("measure", &s.measure());
                write_out(out, &render_string_set(&s))?;
                if out.is_none() {
                    rep.details.push(render_string_set(&s));
                }
                rep.verdict = "built".into();
                Ok((rep, false))
            }
        },
        Cmd::Hj { cmd } => match cmd {
            HjCmd::Coeff { r, n } => {
                let (c, witness) = hj_coeff(*r, *n, budget)?;
                let mut rep = RunReport::new("hj coeff");
                rep.digest(&[&r.to_string(), &n.to_string()]);
                rep.value("coefficient", c);
                rep.details.push(format!("witness coloring: {witness:?}"));
                rep.verdict = "computed".into();
                Ok((rep, false))
            }
        },
        Cmd::Coloring { cmd } => match cmd {
            ColoringCmd::Value { file } => {
                let text = read(file)?;
                let cg = parse_coloring_game(&text)?;
                let (c, s) = coloring_value(&cg, budget)?;
                let mut rep = RunReport::new("coloring value");
                rep.digest(&[&text]);
                rep.value("colors", c);
                rep.details.push(format!("witness: {:?}", s.maps));
                rep.verdict = "computed".into();
                Ok((rep, false))
            }
        },
        Cmd::Bound { cmd } => match cmd {
            BoundCmd::Pr { m, k, n } => {
                let b = pr_upper_bound(*m, *k, *n);
                let mut rep = RunReport::new("bound pr");
                rep.digest(&[&m.to_string(), &k.to_string(), &n.to_string()]);
                rep.approx("bound", b);
                rep.verdict = "computed".into();
                Ok((rep, false))
            }
            BoundCmd::Nonuniform { alpha, n, f } => {
                let a = parse_ratio_arg(alpha)?;
                let func = match f {
                    BoundFn::Zero => |_x: f64| 0.0,
                    BoundFn::Exp2 => |x: f64| 2f64.powf(-x),
                };
                let b = games::nonuniform_bound(&a, *n, func)?;
                let mut rep = RunReport::new("bound nonuniform");
                rep.digest(&[alpha, &n.to_string(), &format!("{:?}", *f as u8)]);
                rep.approx("bound", b);
                rep.verdict = "computed".into();
                Ok((rep, false))
            }
        },
        Cmd::Cycle { cmd } => match cmd {
            CycleCmd::Verify { n, check } => {
                let mut rep = RunReport::new("cycle verify");
                rep.digest(&[&n.to_string(), &format!("{check:?}")]);
                match check {
                    Some(kind) => {
                        let kind = match kind {
                            Check::B => LemmaKind::NonEmptyB,
                            Check::Ad => LemmaKind::NonEmptyAd,
                            Check::Natural => LemmaKind::NaturalCollapse,
                        };
                        let run = cycles::check_lemma(kind, *n, workers)?;
                        rep.value("partitions", run.stats.partitions);
                        rep.value("collapse_searches", run.stats.collapse_searches);
                        match &run.outcome {
                            cycles::Outcome::Success => {
                                rep.verdict = format!("{}: SUCCESS", run.kind.header(*n));
                                Ok((rep, false))
                            }
                            cycles::Outcome::Counterexample(cx) => {
                                rep.verdict = format!("{}: FAILURE", run.kind.header(*n));
                                rep.details.push(format!("{cx}"));
                                Ok((rep, true))
                            }
                        }
                    }
                    None => {
                        let verdict = cycles::verify_nonconstructible(*n, workers)?;
                        for run in &verdict.runs {
                            rep.value(
                                &format!("partitions[{:?}]", run.kind),
                                run.stats.partitions,
                            );
                            rep.value(
                                &format!("searches[{:?}]", run.kind),
                                run.stats.collapse_searches,
                            );
                            if let cycles::Outcome::Counterexample(cx) = &run.outcome {
                                rep.details.push(format!("{cx}"));
                            }
                        }
                        rep.details.push(verdict.summary());
                        if verdict.non_constructible {
                            rep.verdict = format!("cycle with shortcuts on {n} vertices: not constructible by conditioning");
                            Ok((rep, false))
                        } else {
                            rep.verdict = "verdict withheld: a check produced a counterexample".into();
                            Ok((rep, true))
                        }
                    }
                }
            }
        },
    }
}

/// `qvectors n` followed by lines of n edge indices.
fn parse_qvectors(input: &str) -> Result<(usize, BTreeSet<Vec<usize>>), Error> {
    let mut n = None;
    let mut set = BTreeSet::new();
    for (lno, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match n {
            None => {
                n = Some(
                    line.strip_prefix("qvectors")
                        .and_then(|t| t.trim().parse().ok())
                        .ok_or(Error::Parse {
                            line: lno + 1,
                            msg: "expected `qvectors n`".into(),
                        })?,
                );
            }
            Some(n) => {
                let v: Vec<usize> = line
                    .split_whitespace()
                    .map(|t| {
                        t.parse().map_err(|_| Error::Parse {
                            line: lno + 1,
                            msg: format!("bad index `{t}`"),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if v.len() != n {
                    return Err(Error::Parse {
                        line: lno + 1,
                        msg: format!("expected {n} indices"),
                    });
                }
                set.insert(v);
            }
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    Ok((n, set))
}

/// `strategy r` followed by `map j q a` lines (1-based prover).
fn parse_strategy(input: &str, arity: usize) -> Result<Strategy, Error> {
    let mut maps = vec![std::collections::BTreeMap::new(); arity];
    let mut seen_header = false;
    for (lno, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !seen_header {
            if !line.starts_with("strategy") {
                return Err(Error::Parse {
                    line: lno + 1,
                    msg: "expected `strategy r`".into(),
                });
            }
            seen_header = true;
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "map" {
            return Err(Error::Parse {
                line: lno + 1,
                msg: "expected `map j q a`".into(),
            });
        }
        let j: usize = toks[1].parse().map_err(|_| Error::Parse {
            line: lno + 1,
            msg: "bad prover".into(),
        })?;
        if j < 1 || j > arity {
            return Err(Error::Parse {
                line: lno + 1,
                msg: format!("prover {j} out of range"),
            });
        }
        let q: u32 = toks[2].parse().map_err(|_| Error::Parse {
            line: lno + 1,
            msg: "bad question".into(),
        })?;
        let a: u32 = toks[3].parse().map_err(|_| Error::Parse {
            line: lno + 1,
            msg: "bad answer".into(),
        })?;
        maps[j - 1].insert(q, a);
    }
    Ok(Strategy { maps })
}

/// Coloring game file: like a game file with `output q... a... c` lines.
fn parse_coloring_game(input: &str) -> Result<games::ColoringGame, Error> {
    let mut lines = input
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((i + 1, line.to_string()))
            }
        })
        .collect::<Vec<_>>()
        .into_iter();
    let (lno, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let r: usize = header
        .strip_prefix("coloring ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or(Error::Parse { line: lno, msg: "expected `coloring r`".into() })?;
    let mut answer_counts = Vec::with_capacity(r);
    for j in 1..=r {
        let (lno, line) = lines
            .next()
            .ok_or(Error::Parse { line: 0, msg: format!("missing answers {j}") })?;
        let c: u32 = line
            .strip_prefix(&format!("answers {j}:"))
            .and_then(|t| t.trim().parse().ok())
            .ok_or(Error::Parse { line: lno, msg: format!("expected `answers {j}: k`") })?;
        answer_counts.push(c);
    }
    let mut edges = BTreeSet::new();
    let mut outputs = std::collections::BTreeMap::new();
    for (lno, line) in lines {
        if let Some(rest) = line.strip_prefix("question:") {
            let e: Vec<u32> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse { line: lno, msg: "bad id".into() }))
                .collect::<Result<_, _>>()?;
            edges.insert(e);
        } else if let Some(rest) = line.strip_prefix("output") {
            let vals: Vec<u32> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse { line: lno, msg: "bad id".into() }))
                .collect::<Result<_, _>>()?;
            if vals.len() != 2 * r + 1 {
                return Err(Error::Parse {
                    line: lno,
                    msg: format!("output needs {r} questions, {r} answers, 1 color"),
                });
            }
            outputs.insert(
                (vals[..r].to_vec(), vals[r..2 * r].to_vec()),
                vals[2 * r],
            );
        } else {
            return Err(Error::Parse { line: lno, msg: format!("unexpected line `{line}`") });
        }
    }
    let sides: Vec<BTreeSet<u32>> = (0..r).map(|j| edges.iter().map(|e| e[j]).collect()).collect();
    let questions = prgames::hypergraph::PartiteHypergraph::new(r, sides, edges)?;
    games::ColoringGame::new(questions, answer_counts, move |e, a| {
        match outputs.get(&(e.to_vec(), a.to_vec())) {
            Some(&c) => games::Color::Palette(c),
            None => games::Color::Palette(u32::MAX),
        }
    })
}

/// Edge-index vectors on which a repeated strategy wins all coordinates.
fn games_winning_set(
    g: &games::Game,
    n: usize,
    s: &Strategy,
) -> Result<BTreeSet<Vec<usize>>, Error> {
    let edges = g.edge_list().to_vec();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut answers_by_coord: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut total = true;
        for j in 0..g.arity() {
            let qs: Vec<u32> = idx.iter().map(|&i| edges[i][j]).collect();
            let rep_q = games::repeated_question_id(g, j, &qs);
            let Some(rep_a) = s.answer(j, rep_q) else {
                total = false;
                break;
            };
            for (i, coord) in answers_by_coord.iter_mut().enumerate() {
                let div = g.answer_counts[j].pow((n - 1 - i) as u32);
                coord.push((rep_a / div) % g.answer_counts[j]);
            }
        }
        if !total {
            return Err(Error::Invalid("strategy not total on reachable questions".into()));
        }
        if idx
            .iter()
            .enumerate()
            .all(|(i, &e)| g.accepts(e, &answers_by_coord[i]))
        {
            out.insert(idx.clone());
        }
        let mut j = n;
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < edges.len() {
                break false;
            }
            idx[j] = 0;
        };
        if done {
            break;
        }
    }
    Ok(out)
}
