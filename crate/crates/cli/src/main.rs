//! `wsync` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 no witness (the property fails
//! or nothing was found within the bounds), 3 internal error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wsync::cfm::{bounded_explore, check_accepting_run, is_weakly_synchronous_system, Bounds, CommSystem, Exploration, Witness};
use wsync::graph::{exact_treewidth, grid, msc_to_digraph, underlying, verify_minor_model, verify_tree_decomposition};
use wsync::msc::{is_causally_ordered, is_weakly_synchronous, validate_msc, CoVerdict, EventId, WsVerdict};
use wsync::reduction::{
    check_no_receipt_before_send, check_queue_history, check_send_order, complete_dummies, encode, extract_run,
    is_fifo_sequence,
};
use wsync::text::{
    emit_graph, emit_grid_model, emit_msc, emit_queue_actions, emit_sends, emit_system, graph_to_dot, msc_to_dot,
    parse_fifo, parse_graph, parse_grid_model, parse_msc, parse_queue_actions, parse_sends, parse_system, GraphFile,
    GridModelFile, MscFile, QueueSequence, SendSequence,
};
use wsync::universal::{embed_arbitrary_minor, UniversalParams, UniversalWitness};

#[derive(Parser)]
#[command(name = "wsync", version, about = "Message sequence charts, weak synchrony and treewidth witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four chart conditions.
    Validate { msc: PathBuf },
    /// Decide weak synchrony and print the phases or a refutation.
    Phases { msc: PathBuf },
    /// Decide causal ordering.
    CoCheck { msc: PathBuf },
    /// Build the universal family for the given parameters.
    GenUniversal {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        l: u32,
        /// Also write the weakly synchronous chart G* and check that G is its minor.
        #[arg(long)]
        star: bool,
        /// Also write and verify the grid model in G.
        #[arg(long)]
        grid_witness: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Exact treewidth, or a lower bound from a grid-minor model.
    Treewidth {
        graph: PathBuf,
        #[arg(long, conflicts_with = "witness")]
        exact: bool,
        #[arg(long, value_name = "MODEL")]
        witness: Option<PathBuf>,
    },
    /// Embed a graph as a minor of a four-process weakly synchronous chart.
    EmbedMinor {
        graph: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Encode a FIFO automaton as a three-machine system.
    Encode { fifo: PathBuf },
    /// Translate between queue histories and send sequences of the encoding.
    Translate {
        #[arg(long, value_name = "ACTIONS", conflicts_with = "from_s3", required_unless_present = "from_s3")]
        to_s3: Option<PathBuf>,
        #[arg(long, value_name = "SENDS")]
        from_s3: Option<PathBuf>,
        /// Name of the dummy message.
        #[arg(long, default_value = "D")]
        dummy: String,
    },
    /// Search for an accepting run within bounds.
    Explore {
        system: PathBuf,
        #[arg(long)]
        max_queue: usize,
        #[arg(long)]
        max_steps: usize,
        #[arg(long)]
        max_configurations: Option<usize>,
        /// Check every enumerated run for weak synchrony.
        #[arg(long)]
        check_ws: bool,
        /// Runs to enumerate with --check-ws.
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Write a chart or a graph as DOT.
    Dot { file: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    NoWitness(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::NoWitness(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

type Output = Result<String, Failure>;

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn parsed<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str, out: &mut String) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
    writeln!(out, "wrote {}", path.display()).unwrap();
    Ok(())
}

/// Replaces `e<id>` in a message by the event names of the file.
fn named(f: &MscFile, text: &str) -> String {
    let mut out = String::new();
    let mut rest = text;
    while let Some(i) = rest.find('e') {
        out.push_str(&rest[..i]);
        let digits = rest[i + 1..].bytes().take_while(u8::is_ascii_digit).count();
        let boundary = i == 0 || !rest.as_bytes()[i - 1].is_ascii_alphanumeric();
        match rest[i + 1..i + 1 + digits].parse::<u32>() {
            Ok(id) if boundary && f.msc.contains(EventId(id)) => out.push_str(&f.event_name(EventId(id))),
            _ => out.push_str(&rest[i..i + 1 + digits]),
        }
        rest = &rest[i + 1 + digits..];
    }
    out.push_str(rest);
    out
}

fn phases(k: usize) -> String {
    format!("{k} phase{}", if k == 1 { "" } else { "s" })
}

fn load_msc(path: &Path) -> Result<MscFile, Failure> {
    parsed(path, parse_msc(&read(path)?))
}

fn cmd_validate(path: &Path) -> Output {
    let f = load_msc(path)?;
    let report = validate_msc(&f.msc);
    if report.is_valid() {
        return Ok(format!("valid: {} events, {} messages\n", f.msc.len(), f.msc.messages().len()));
    }
    let lines: Vec<String> = report.violations.iter().map(|v| named(&f, &v.to_string())).collect();
    Err(Failure::Invalid(lines.join("\n")))
}

fn cmd_phases(path: &Path) -> Output {
    let f = load_msc(path)?;
    match is_weakly_synchronous(&f.msc).map_err(|e| invalid(named(&f, &e.to_string())))? {
        WsVerdict::WeaklySynchronous(d) => {
            let mut out = format!("weakly synchronous: {}\n", phases(d.len()));
            for (i, phase) in d.phases.iter().enumerate() {
                let names: Vec<String> = phase.iter().map(|&e| f.event_name(e)).collect();
                writeln!(out, "phase {}: {}", i + 1, names.join(" ")).unwrap();
            }
            Ok(out)
        }
        WsVerdict::NotWeaklySynchronous(r) => {
            let block: Vec<String> = r.block.iter().map(|&e| f.event_name(e)).collect();
            Err(Failure::NoWitness(format!(
                "not weakly synchronous: receive {} lies below send {} in the block {}",
                f.event_name(r.receive),
                f.event_name(r.send),
                block.join(" ")
            )))
        }
    }
}

fn cmd_co_check(path: &Path) -> Output {
    let f = load_msc(path)?;
    match is_causally_ordered(&f.msc).map_err(|e| invalid(named(&f, &e.to_string())))? {
        CoVerdict::CausallyOrdered => Ok("causally ordered\n".into()),
        CoVerdict::Violation { first, second } => Err(Failure::NoWitness(format!(
            "not causally ordered: {} precedes {} but is not received first",
            f.event_name(first),
            f.event_name(second)
        ))),
    }
}

fn cmd_gen_universal(h: u32, l: u32, star: bool, grid_witness: bool, dir: &Path) -> Output {
    let p = UniversalParams::new(h, l).map_err(invalid)?;
    let w = UniversalWitness::build(p);
    let host = GraphFile::from_digraph(&w.g);
    let mut out = format!("G({h},{l}): {} vertices, {} arcs\n", w.g.num_vertices(), w.g.num_arcs());
    fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?;
    write(&dir.join("g.graph"), &emit_graph(&host), &mut out)?;
    if star {
        let m = &w.gstar.msc;
        let report = validate_msc(m);
        let count = is_weakly_synchronous(m).ok().and_then(|v| v.phases().map(|d| d.len()));
        let g = underlying(&w.g);
        let chart = underlying(&msc_to_digraph(m));
        match (report.is_valid(), count, verify_minor_model(&g, &chart, &w.model_g_in_gstar)) {
            (true, Some(k), Ok(())) => {
                writeln!(out, "G* chart: {} events, {}", m.len(), phases(k)).unwrap();
                writeln!(out, "G minor of G*: VERIFIED").unwrap();
            }
            (valid, count, check) => {
                return Err(Failure::Internal(format!("G* failed its checks: valid {valid}, phases {count:?}, minor {check:?}")));
            }
        }
        let f = MscFile::new(w.gstar.alphabet.clone(), m.clone());
        write(&dir.join("gstar.msc"), &emit_msc(&f), &mut out)?;
    }
    if grid_witness {
        let (rows, cols) = (h, 6 * l);
        verify_minor_model(&grid(rows, cols), &host.graph(), &w.grid_model)
            .map_err(|v| Failure::Internal(format!("grid model rejected: {v}")))?;
        writeln!(out, "grid {rows}x{cols} minor: VERIFIED").unwrap();
        let model = GridModelFile { rows, cols, model: w.grid_model.clone() };
        write(&dir.join("grid.model"), &emit_grid_model(&model, &host), &mut out)?;
    }
    Ok(out)
}

fn cmd_treewidth(path: &Path, witness: Option<&Path>) -> Output {
    let host = parsed(path, parse_graph(&read(path)?))?;
    let g = host.graph();
    match witness {
        None => {
            let tw = exact_treewidth(&g).map_err(invalid)?;
            let check = verify_tree_decomposition(&g, &tw.decomposition);
            if !check.is_valid() {
                return Err(Failure::Internal(format!("decomposition rejected: {}", check.violation.unwrap())));
            }
            let bags = tw.decomposition.bags.len();
            Ok(format!("treewidth {} (decomposition with {bags} bags: VERIFIED)\n", tw.width))
        }
        Some(m) => {
            let model = parsed(m, parse_grid_model(&read(m)?, &host))?;
            verify_minor_model(&grid(model.rows, model.cols), &g, &model.model)
                .map_err(|v| Failure::Invalid(format!("{}: grid model rejected: {v}", m.display())))?;
            Ok(format!(
                "treewidth >= {} (grid {}x{} minor: VERIFIED)\n",
                model.rows.min(model.cols),
                model.rows,
                model.cols
            ))
        }
    }
}

fn cmd_embed_minor(path: &Path, dir: &Path) -> Output {
    let hf = parsed(path, parse_graph(&read(path)?))?;
    let h = hf.graph();
    let e = embed_arbitrary_minor(&h).map_err(invalid)?;
    let mut out = format!("H: {} vertices, {} edges\n", h.num_vertices(), h.num_edges());
    verify_minor_model(&h, &underlying(&e.digraph), &e.model)
        .map_err(|v| Failure::Internal(format!("model in the construction rejected: {v}")))?;
    writeln!(out, "construction: {} vertices; H minor: VERIFIED", e.digraph.num_vertices()).unwrap();
    let m = &e.lift.msc;
    let count = is_weakly_synchronous(m).ok().and_then(|v| v.phases().map(|d| d.len()));
    let chart = underlying(&msc_to_digraph(m));
    match (validate_msc(m).is_valid(), count, verify_minor_model(&h, &chart, &e.lift_model)) {
        (true, Some(k), Ok(())) => {
            let procs = m.processes().count();
            writeln!(out, "chart: {procs} processes, {} events, {}; H minor: VERIFIED", m.len(), phases(k)).unwrap();
        }
        (valid, count, check) => {
            return Err(Failure::Internal(format!("chart failed its checks: valid {valid}, phases {count:?}, minor {check:?}")));
        }
    }
    fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?;
    write(&dir.join("construction.graph"), &emit_graph(&GraphFile::from_digraph(&e.digraph)), &mut out)?;
    write(&dir.join("chart.msc"), &emit_msc(&MscFile::new(e.lift.alphabet.clone(), m.clone())), &mut out)?;
    Ok(out)
}

fn cmd_encode(path: &Path) -> Output {
    let f = parsed(path, parse_fifo(&read(path)?))?;
    let enc = encode(&f).map_err(invalid)?;
    Ok(emit_system(&enc.system))
}

fn cmd_to_s3(path: &Path, dummy: &str) -> Output {
    let q = parsed(path, parse_queue_actions(&read(path)?))?;
    if q.letters.iter().any(|l| l == dummy) {
        return Err(invalid(format!("the dummy {dummy:?} is also a letter of the history")));
    }
    let s = SendSequence { letters: q.letters.clone(), dummy_name: dummy.to_string(), sends: Vec::new() };
    let c = complete_dummies(&q.actions, s.dummy()).map_err(invalid)?;
    let check = is_fifo_sequence(&c.sends);
    if !(check.fifo && check.complete) || extract_run(&c.sends, s.dummy()) != q.actions {
        return Err(Failure::Internal("completion does not translate back".into()));
    }
    Ok(emit_sends(&SendSequence { sends: c.sends, ..s }))
}

fn cmd_from_s3(path: &Path, dummy: &str) -> Output {
    let s = parsed(path, parse_sends(&read(path)?, dummy))?;
    if !check_send_order(&s.sends) {
        return Err(invalid("sends to b and c do not alternate in the same order"));
    }
    if !check_no_receipt_before_send(&s.sends) {
        return Err(invalid("a message is received before it is sent"));
    }
    let actions = extract_run(&s.sends, s.dummy());
    check_queue_history(&actions).map_err(invalid)?;
    Ok(emit_queue_actions(&QueueSequence { letters: s.letters, actions }))
}

fn describe_run(s: &CommSystem, w: &Witness) -> String {
    let al = s.alphabet();
    let mut out = String::new();
    for t in &w.trace {
        let a = s.automaton(t.process);
        let tr = s.transition(*t).expect("witness transitions exist");
        let label = tr.label.map_or("eps".to_string(), |l| l.display(al).to_string());
        let (src, dst) = (a.state_name(tr.source), a.state_name(tr.target));
        writeln!(out, "{}: {src} -> {dst} {label}", al.process_name(t.process)).unwrap();
    }
    out
}

fn cmd_explore(path: &Path, bounds: Bounds, check_ws: bool, limit: usize) -> Output {
    let s = parsed(path, parse_system(&read(path)?))?;
    let mut out = match bounded_explore(&s, bounds) {
        Exploration::Found(w) => {
            check_accepting_run(&s, &w.msc, &w.run).map_err(|v| Failure::Internal(format!("witness rejected: {v}")))?;
            let mut out = format!("accepting run with {} events (VERIFIED)\n", w.msc.len());
            out.push_str(&describe_run(&s, &w));
            out.push('\n');
            out.push_str(&emit_msc(&MscFile::new(s.alphabet().clone(), w.msc)));
            out
        }
        Exploration::NoneWithinBounds => return Err(Failure::NoWitness("none within bounds".into())),
        Exploration::CapReached => {
            return Err(Failure::NoWitness(format!(
                "none found before the cap of {} configurations",
                bounds.max_configurations
            )))
        }
    };
    if check_ws {
        let v = is_weakly_synchronous_system(&s, bounds, limit);
        let scope = if v.complete { "all" } else { "the first" };
        match v.counterexample {
            None => writeln!(out, "\nweakly synchronous: {scope} {} runs within bounds", v.explored).unwrap(),
            Some(w) => {
                check_accepting_run(&s, &w.msc, &w.run)
                    .map_err(|v| Failure::Internal(format!("counterexample rejected: {v}")))?;
                writeln!(out, "\nnot weakly synchronous: counterexample run").unwrap();
                out.push_str(&describe_run(&s, &w));
                out.push('\n');
                out.push_str(&emit_msc(&MscFile::new(s.alphabet().clone(), w.msc)));
            }
        }
    }
    Ok(out)
}

/// Chart and graph files never parse as each other, so whichever parser
/// accepts the file decides.
fn cmd_dot(path: &Path) -> Output {
    let text = read(path)?;
    match (parse_msc(&text), parse_graph(&text)) {
        (Ok(f), _) => Ok(msc_to_dot(&f)),
        (_, Ok(g)) => Ok(graph_to_dot(&g)),
        (Err(m), Err(g)) => {
            Err(Failure::Invalid(format!("{}: not a chart ({m}) nor a graph ({g})", path.display())))
        }
    }
}

fn run(cli: Cli) -> Output {
    match cli.command {
        Command::Validate { msc } => cmd_validate(&msc),
        Command::Phases { msc } => cmd_phases(&msc),
        Command::CoCheck { msc } => cmd_co_check(&msc),
        Command::GenUniversal { h, l, star, grid_witness, out } => cmd_gen_universal(h, l, star, grid_witness, &out),
        Command::Treewidth { graph, exact: _, witness } => cmd_treewidth(&graph, witness.as_deref()),
        Command::EmbedMinor { graph, out } => cmd_embed_minor(&graph, &out),
        Command::Encode { fifo } => cmd_encode(&fifo),
        Command::Translate { to_s3: Some(p), dummy, .. } => cmd_to_s3(&p, &dummy),
        Command::Translate { from_s3: Some(p), dummy, .. } => cmd_from_s3(&p, &dummy),
        Command::Translate { .. } => Err(invalid("give --to-s3 or --from-s3")),
        Command::Explore { system, max_queue, max_steps, max_configurations, check_ws, limit } => {
            let mut bounds = Bounds::new(max_queue, max_steps);
            if let Some(c) = max_configurations {
                bounds.max_configurations = c;
            }
            cmd_explore(&system, bounds, check_ws, limit)
        }
        Command::Dot { file } => cmd_dot(&file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(f)) => {
            let (Failure::Invalid(msg) | Failure::NoWitness(msg) | Failure::Internal(msg)) = &f;
            eprintln!("wsync: {msg}");
            ExitCode::from(f.code())
        }
        Err(_) => ExitCode::from(3),
    }
}
