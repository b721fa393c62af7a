//! Command-line front end. [`run`] returns the process exit code so it can be tested in-process.
//!
//! Exit codes: 0 success, 1 failed verification or type check, 2 usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::ir::{analyze, Program, IR_SCHEMA_VERSION};
use crate::mindeg::gotu_report;
use crate::programs::{Instance, Task, TaskSpec};
use crate::runtime::{RunResult, Runner};
use crate::taskdata::{gen_instances, verify, CarryMode, DataTask, GenConfig, VerifyConfig, DATA_SCHEMA_VERSION};
use crate::typesys::{check_program, illegal_addition_fixtures};
use crate::value::Value;

/// Version stamped on every JSON record the CLI prints.
pub const CLI_SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "raspl", version, about = "Run, trace, check and verify RASP-L next-token programs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a completion for one prompt.
    Run(RunArgs),
    /// Print every intermediate variable at each generation step.
    Trace(TraceArgs),
    /// Type-check a serialized program, a shipped program or the illegal-addition fixtures.
    Typecheck(TypecheckArgs),
    /// Print the complexity report of a program.
    Analyze(ProgramArgs),
    /// Write a dataset as JSON lines.
    Gen(GenArgs),
    /// Compare a shipped program with its oracle over a length range.
    Verify(VerifyArgs),
    /// Fit the minimum-degree interpolator on the AND task and compare it with the program.
    Mindeg(MindegArgs),
    /// Print a shipped program as IR JSON.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct PromptArgs {
    #[arg(long)]
    task: Task,
    /// Raw prompt as integers separated by spaces or commas.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b", "tokens", "bits"])]
    prompt: Option<String>,
    /// First number (count start or summand).
    #[arg(long)]
    a: Option<String>,
    /// Second number (count end or summand).
    #[arg(long)]
    b: Option<String>,
    /// Tokens for mode, copy-unique and sort.
    #[arg(long)]
    tokens: Option<String>,
    /// Bits for parity-scratchpad and bool-and, e.g. `00110`.
    #[arg(long)]
    bits: Option<String>,
    /// First index hint of parity-scratchpad.
    #[arg(long, default_value_t = crate::programs::parity::FIRST_HINT)]
    first_hint: Value,
    /// Step budget instead of the task default.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Render special tokens by name.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    prompt: PromptArgs,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    prompt: PromptArgs,
    /// Only print this step (0 is the step that reads the prompt).
    #[arg(long)]
    step: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ProgramArgs {
    /// A shipped task program.
    #[arg(long)]
    task: Option<Task>,
    /// IR JSON file.
    #[arg(long)]
    program: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FixtureSet {
    IllegalAdd,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TypecheckArgs {
    #[arg(long)]
    task: Option<Task>,
    #[arg(long)]
    program: Option<PathBuf>,
    /// Built-in negative fixtures; succeeds when every fixture fails as expected.
    #[arg(long, value_enum)]
    fixture: Option<FixtureSet>,
}

#[derive(Args, Debug)]
struct SeedArgs {
    /// Random seed.
    #[arg(long, env = "RASPL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Any dataset task, including copy-repeat, parity-plain, add-plain,
    /// mode-scratch-asc and mode-scratch-app.
    #[arg(long)]
    task: DataTask,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 20)]
    max_len: usize,
    #[arg(long, default_value_t = CarryMode::Independent)]
    carry: CarryMode,
    #[command(flatten)]
    seed: SeedArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    task: Task,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 100)]
    max_len: usize,
    /// Random instances per length.
    #[arg(long, default_value_t = 1000)]
    per_length: usize,
    #[arg(long, default_value_t = CarryMode::Independent)]
    carry: CarryMode,
    /// Enumerate every instance of each length (count only).
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 20)]
    max_failures: usize,
    #[command(flatten)]
    seed: SeedArgs,
}

#[derive(Args, Debug)]
struct MindegArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Trailing coordinates that stay at 1 during training.
    #[arg(long, default_value_t = 3)]
    k: usize,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    task: Task,
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct UsageError {
    kind: &'static str,
    message: String,
}

impl UsageError {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Self { kind, message: message.to_string() }
    }
}

macro_rules! usage_from {
    ($($t:ty => $kind:literal),* $(,)?) => {$(
        impl From<$t> for UsageError {
            fn from(e: $t) -> Self {
                UsageError::new($kind, e)
            }
        }
    )*};
}

usage_from! {
    crate::error::TaskError => "task",
    crate::error::EvalError => "eval",
    crate::mindeg::MindegError => "mindeg",
    std::io::Error => "io",
    serde_json::Error => "json",
}

struct Out<'a> {
    w: &'a mut dyn Write,
    format: Format,
}

impl Out<'_> {
    fn json<T: Serialize>(&mut self, v: &T) -> Result<(), UsageError> {
        serde_json::to_writer(&mut *self.w, v)?;
        writeln!(self.w)?;
        Ok(())
    }

    fn row(&mut self, cols: &[String]) -> Result<(), UsageError> {
        writeln!(self.w, "{}", cols.join("\t"))?;
        Ok(())
    }

    fn header(&mut self, cols: &[&str]) -> Result<(), UsageError> {
        writeln!(self.w, "{}", cols.join("\t"))?;
        Ok(())
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            report(stderr, &UsageError::new("usage", e.to_string().trim_end()));
            return 2;
        }
    };
    let mut out = Out { w: stdout, format: cli.format };
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            report(stderr, &e);
            2
        }
    }
}

fn report(stderr: &mut dyn Write, e: &UsageError) {
    let record = json!({
        "schema_version": CLI_SCHEMA_VERSION,
        "error": { "kind": e.kind, "message": e.message },
    });
    let _ = writeln!(stderr, "{record}");
}

fn dispatch(cmd: Command, out: &mut Out<'_>) -> Result<i32, UsageError> {
    match cmd {
        Command::Run(a) => cmd_run(&a.prompt, out),
        Command::Trace(a) => cmd_trace(&a, out),
        Command::Typecheck(a) => cmd_typecheck(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Mindeg(a) => cmd_mindeg(&a, out),
        Command::Export(a) => {
            out.json(&a.task.spec().program)?;
            Ok(0)
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<Value>, UsageError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Value>().map_err(|e| UsageError::new("usage", format!("bad integer `{t}`: {e}"))))
        .collect()
}

fn parse_bytes(s: &str) -> Result<Vec<u8>, UsageError> {
    parse_ints(s)?
        .into_iter()
        .map(|v| u8::try_from(v).map_err(|_| UsageError::new("usage", format!("token {v} out of range"))))
        .collect()
}

fn parse_bits(s: &str) -> Result<Vec<u8>, UsageError> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(UsageError::new("usage", format!("bit string may only hold 0 and 1, got `{c}`"))),
        })
        .collect()
}

fn need<'a>(v: &'a Option<String>, flag: &str, task: Task) -> Result<&'a str, UsageError> {
    v.as_deref()
        .ok_or_else(|| UsageError::new("usage", format!("{task} needs --{flag} (or --prompt)")))
}

fn build_prompt(p: &PromptArgs, spec: &TaskSpec) -> Result<Vec<Value>, UsageError> {
    if let Some(raw) = &p.prompt {
        let prompt = parse_ints(raw)?;
        spec.decode_prompt(&prompt)?;
        return Ok(prompt);
    }
    let task = p.task;
    let num = |v: &Option<String>, flag: &str| -> Result<u16, UsageError> {
        need(v, flag, task)?
            .parse()
            .map_err(|e| UsageError::new("usage", format!("--{flag}: {e}")))
    };
    let inst = match task {
        Task::Count => Instance::Count { a: num(&p.a, "a")?, b: num(&p.b, "b")? },
        Task::AddRev | Task::AddFwd => Instance::Addition {
            a: need(&p.a, "a", task)?.to_string(),
            b: need(&p.b, "b", task)?.to_string(),
        },
        Task::Mode => Instance::Mode { tokens: parse_bytes(need(&p.tokens, "tokens", task)?)? },
        Task::CopyUnique => Instance::CopyUnique { tokens: parse_bytes(need(&p.tokens, "tokens", task)?)? },
        Task::Sort => Instance::Sort { tokens: parse_bytes(need(&p.tokens, "tokens", task)?)? },
        Task::ParityScratchpad => Instance::Parity {
            bits: parse_bits(need(&p.bits, "bits", task)?)?,
            first_hint: p.first_hint,
        },
        Task::BoolAnd => Instance::BoolAnd { bits: parse_bits(need(&p.bits, "bits", task)?)? },
    };
    Ok(spec.encode_prompt(&inst)?)
}

fn execute(p: &PromptArgs, trace: bool) -> Result<(TaskSpec, RunResult), UsageError> {
    let spec = p.task.spec();
    let prompt = build_prompt(p, &spec)?;
    let runner = Runner::new(&spec)?;
    let budget = p.max_steps.unwrap_or_else(|| spec.max_steps_for(prompt.len()));
    if budget == 0 {
        return Err(UsageError::new("usage", "--max-steps must be positive"));
    }
    let result = runner.run_with_budget(&prompt, budget, trace)?;
    Ok((spec, result))
}

fn render(spec: &TaskSpec, seq: &[Value], pretty: bool) -> String {
    seq.iter()
        .map(|&t| if pretty { spec.render_token(t) } else { t.to_string() })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_run(p: &PromptArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    let (spec, r) = execute(p, false)?;
    let answer = spec.decode_answer(&r.full_sequence, r.prompt_len).ok();
    match out.format {
        Format::Json => {
            let mut record = json!({
                "schema_version": CLI_SCHEMA_VERSION,
                "task": p.task,
                "prompt": &r.full_sequence[..r.prompt_len],
                "completion": r.completion(),
                "full_sequence": &r.full_sequence,
                "steps_taken": r.steps_taken,
                "terminated": r.terminated,
                "answer": answer,
            });
            if p.pretty {
                record["rendered"] = json!(render(&spec, &r.full_sequence, true));
            }
            out.json(&record)?;
        }
        Format::Tsv => {
            out.header(&["task", "prompt_len", "steps_taken", "terminated", "full_sequence"])?;
            out.row(&[
                p.task.to_string(),
                r.prompt_len.to_string(),
                r.steps_taken.to_string(),
                serde_json::to_value(r.terminated)?.as_str().unwrap_or_default().to_string(),
                render(&spec, &r.full_sequence, p.pretty),
            ])?;
        }
    }
    Ok(0)
}

fn cmd_trace(a: &TraceArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    let (spec, r) = execute(&a.prompt, true)?;
    let traces = r.per_step_traces.clone().unwrap_or_default();
    if let Some(s) = a.step.filter(|&s| s >= traces.len()) {
        return Err(UsageError::new("usage", format!("--step {s} but the run took {} steps", traces.len())));
    }
    let steps: Vec<(usize, &crate::ir::Trace)> =
        traces.iter().enumerate().filter(|(i, _)| a.step.is_none_or(|s| s == *i)).collect();
    match out.format {
        Format::Json => {
            let steps: Vec<_> = steps
                .iter()
                .map(|(i, t)| json!({ "step": i, "next_token": r.full_sequence[r.prompt_len + i], "trace": t }))
                .collect();
            out.json(&json!({
                "schema_version": CLI_SCHEMA_VERSION,
                "task": a.prompt.task,
                "full_sequence": r.full_sequence,
                "steps": steps,
            }))?;
        }
        Format::Tsv => {
            out.header(&["step", "var", "name", "op", "kind", "values"])?;
            for (i, t) in steps {
                let len = t.output_values().len();
                out.row(&[
                    i.to_string(),
                    "input".into(),
                    "seq".into(),
                    "input".into(),
                    "token".into(),
                    render(&spec, &r.full_sequence[..len], a.prompt.pretty),
                ])?;
                for e in &t.entries {
                    out.row(&[
                        i.to_string(),
                        e.id.to_string(),
                        e.name.clone().unwrap_or_default(),
                        e.op.clone(),
                        e.kind.to_string(),
                        e.values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                    ])?;
                }
            }
        }
    }
    Ok(0)
}

fn load_program(task: Option<Task>, path: &Option<PathBuf>) -> Result<(String, Program), UsageError> {
    match (task, path) {
        (Some(t), _) => Ok((t.to_string(), t.spec().program)),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| UsageError::new("io", format!("{}: {e}", p.display())))?;
            let prog = Program::from_json(&text).map_err(|e| UsageError::new("ir", format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), prog))
        }
        (None, None) => Err(UsageError::new("usage", "give --task or --program")),
    }
}

fn cmd_typecheck(a: &TypecheckArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    if a.fixture.is_some() {
        let mut all_ok = true;
        let mut rows = Vec::new();
        for f in illegal_addition_fixtures() {
            let errors = check_program(&f.program);
            let ok = errors.iter().any(|e| e.code == f.expected);
            all_ok &= ok;
            rows.push((f, errors, ok));
        }
        match out.format {
            Format::Json => {
                let fixtures: Vec<_> = rows
                    .iter()
                    .map(|(f, errors, ok)| json!({ "fixture": f.name, "expected": f.expected, "errors": errors, "as_expected": ok }))
                    .collect();
                out.json(&json!({ "schema_version": CLI_SCHEMA_VERSION, "fixtures": fixtures, "ok": all_ok }))?;
            }
            Format::Tsv => {
                out.header(&["fixture", "expected", "site", "code", "message"])?;
                for (f, errors, _) in &rows {
                    for e in errors {
                        out.row(&[
                            f.name.clone(),
                            f.expected.to_string(),
                            e.site.to_string(),
                            e.code.to_string(),
                            e.message.clone(),
                        ])?;
                    }
                }
            }
        }
        return Ok(if all_ok { 0 } else { 1 });
    }
    let (subject, prog) = load_program(a.task, &a.program)?;
    let errors = check_program(&prog);
    match out.format {
        Format::Json => out.json(&json!({
            "schema_version": CLI_SCHEMA_VERSION,
            "program": subject,
            "ok": errors.is_empty(),
            "errors": errors,
        }))?,
        Format::Tsv => {
            out.header(&["program", "site", "code", "message"])?;
            for e in &errors {
                out.row(&[subject.clone(), e.site.to_string(), e.code.to_string(), e.message.clone()])?;
            }
        }
    }
    Ok(if errors.is_empty() { 0 } else { 1 })
}

fn cmd_analyze(a: &ProgramArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    let (subject, prog) = load_program(a.task, &a.program)?;
    let r = analyze(&prog);
    match out.format {
        Format::Json => out.json(&json!({
            "schema_version": CLI_SCHEMA_VERSION,
            "program": subject,
            "ir_schema_version": IR_SCHEMA_VERSION,
            "report": r,
        }))?,
        Format::Tsv => {
            let v = serde_json::to_value(&r)?;
            out.header(&["program", "metric", "value"])?;
            for (k, val) in v.as_object().into_iter().flatten() {
                out.row(&[subject.clone(), k.clone(), val.to_string()])?;
            }
        }
    }
    Ok(0)
}

fn cmd_gen(a: &GenArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    let cfg = GenConfig {
        task: a.task,
        min_len: a.min_len,
        max_len: a.max_len,
        carry: a.carry,
        seed: a.seed.seed,
    };
    let records = gen_instances(&cfg, a.count)?;
    let mut buf = Vec::new();
    {
        let mut sink = Out { w: &mut buf, format: out.format };
        if sink.format == Format::Tsv {
            sink.header(&["schema_version", "task", "format", "length", "prompt", "target"])?;
        }
        for r in &records {
            match sink.format {
                Format::Json => sink.json(r)?,
                Format::Tsv => {
                    let join = |s: &[Value]| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                    sink.row(&[
                        DATA_SCHEMA_VERSION.to_string(),
                        r.task.clone(),
                        r.format.clone(),
                        r.length.to_string(),
                        join(&r.prompt),
                        join(&r.target),
                    ])?
                }
            }
        }
    }
    match &a.out {
        Some(path) => fs::write(path, buf).map_err(|e| UsageError::new("io", format!("{}: {e}", path.display())))?,
        None => out.w.write_all(&buf)?,
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    let cfg = VerifyConfig {
        min_len: a.min_len,
        max_len: a.max_len,
        per_length: a.per_length,
        carry: a.carry,
        seed: a.seed.seed,
        exhaustive: a.exhaustive,
        max_failures: a.max_failures,
    };
    let report = verify(&a.task.spec(), &cfg)?;
    match out.format {
        Format::Json => out.json(&report)?,
        Format::Tsv => {
            out.header(&["task", "distribution", "length", "instances", "exact", "em"])?;
            for l in &report.per_length {
                out.row(&[
                    report.task.to_string(),
                    report.distribution.clone(),
                    l.length.to_string(),
                    l.instances.to_string(),
                    l.exact.to_string(),
                    l.em.to_string(),
                ])?;
            }
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_mindeg(a: &MindegArgs, out: &mut Out<'_>) -> Result<i32, UsageError> {
    let r = gotu_report(a.n, a.k)?;
    match out.format {
        Format::Json => out.json(&r)?,
        Format::Tsv => {
            out.header(&["zero_at", "interpolator", "program"])?;
            for u in &r.unseen {
                out.row(&[u.zero_at.to_string(), u.interpolator.to_string(), u.program.to_string()])?;
            }
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("raspl").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn run_addition_tsv() {
        let (code, out, _) = call(&["run", "--task", "add-rev", "--a", "88", "--b", "842", "--format", "tsv"]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        assert!(row.ends_with(
            "-1 -100 0 -101 0 -102 8 -103 8 -2 -100 0 -101 8 -102 4 -103 2 -3 -103 0 -102 3 -101 9 -100 0 -5"
        ));
    }

    #[test]
    fn raw_prompt_and_json() {
        let (code, out, _) = call(&["run", "--task", "count", "--prompt", "-1 2 5 -3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["completion"], json!([2, 3, 4, 5, -2]));
        assert_eq!(v["schema_version"], 1);
    }

    #[test]
    fn usage_errors_exit_2_with_a_record() {
        let (code, _, err) = call(&["run", "--task", "nope"]);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
        let (code, _, err) = call(&["run", "--task", "sort", "--tokens", "3 3"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"task\""));
        let (code, _, _) = call(&["typecheck", "--program", "/nonexistent.json"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn fixtures_exit_0() {
        let (code, out, _) = call(&["typecheck", "--fixture", "illegal-add"]);
        assert_eq!(code, 0);
        assert!(out.contains("IndexArithmetic") && out.contains("IllegalCast"));
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = call(&["verify", "--task", "count", "--max-len", "5", "--exhaustive"]);
        assert_eq!(code, 0, "{out}");
        let (code, _, _) = call(&["verify", "--task", "sort", "--exhaustive", "--max-len", "2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn export_then_typecheck() {
        let (_, ir, _) = call(&["export", "--task", "add-fwd"]);
        let path = std::env::temp_dir().join(format!("raspl-cli-{}.json", std::process::id()));
        fs::write(&path, ir).unwrap();
        let (code, out, _) = call(&["typecheck", "--program", path.to_str().unwrap()]);
        fs::remove_file(&path).unwrap();
        assert_eq!(code, 0, "{out}");
    }
}
