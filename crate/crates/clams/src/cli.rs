//! The `clams` command line.
//!
//! Exit status: 0 success, 1 domain error (invalid grammar, missing score,
//! mismatched runs), 2 I/O or usage error. Every referenced input path is
//! checked before any work starts.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clams_core::eval::{
    evaluate_full, evaluate_masked, make_reference_scorer, train_bigram, BigramModel, MaskedKey,
    ScoreMode, ScoreTable, ScorerBehavior, TiePolicy,
};
use clams_core::{
    apply_capitalization, generate, parse_grammar_with_warnings, validate_grammar, Diagnostic,
    MinimalSet,
};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::files::{read_corpus, read_vocabulary, read_wals};
use crate::labeled::write_labeled_lines;
use crate::report::{
    build_reports, complexities, correlate, read_eval_records, render_records, render_table,
    write_eval_records, EvalRecord,
};
use crate::scores::{load_scores, write_scores};
use crate::structured::{read_structured, write_structured};

#[derive(Debug, Parser)]
#[command(
    name = "clams",
    version,
    about = "Generate and score agreement challenge sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check grammar files; diagnostics go to stderr.
    Validate {
        #[arg(required = true)]
        grammars: Vec<PathBuf>,
    },
    /// Expand grammars into minimal sets, one output file per grammar.
    Generate {
        #[arg(required = true)]
        grammars: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = SetFormat::Labeled)]
        format: SetFormat,
        /// Uppercase the first character of every sentence.
        #[arg(long)]
        capitalize: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Score structured sets with a built-in scorer.
    Score {
        sets: PathBuf,
        #[arg(long, value_enum)]
        scorer: Scorer,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        /// Training corpus for the bigram scorer, one sentence per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Add-k smoothing constant.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 10_000)]
        vocab_limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a score file against structured sets.
    Evaluate {
        sets: PathBuf,
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        /// Model vocabulary, one token per line (masked mode).
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long, default_value = "und")]
        language: String,
        #[arg(long, default_value = "run1")]
        run_id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate evaluation records into a table.
    Report {
        #[arg(required = true)]
        records: Vec<PathBuf>,
        /// WALS feature file (`language<TAB>feature<TAB>value`).
        #[arg(long)]
        complexity: Option<PathBuf>,
        /// Rank-correlate complexity with average accuracy.
        #[arg(long, requires = "complexity")]
        correlate: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetFormat {
    Labeled,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scorer {
    Bigram,
    Oracle,
    Adversary,
    Constant,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Masked,
}

impl From<Mode> for ScoreMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => ScoreMode::FullSentence,
            Mode::Masked => ScoreMode::MaskedFocus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Records,
}

/// A command failure, already formatted for stderr.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Domain(String),
    /// Exit 2.
    Io(String),
    /// Exit 2.
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) | Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Io(m) | Failure::Usage(m) => m,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn domain(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Domain(format!("{}: {e}", path.display()))
}

/// Parses `std::env::args` and runs the command.
pub fn main() -> ExitCode {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("clams: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

pub fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { grammars } => {
            require_files(&grammars)?;
            cmd_validate(&grammars)
        }
        Command::Generate {
            grammars,
            format,
            capitalize,
            out_dir,
        } => {
            require_files(&grammars)?;
            cmd_generate(&grammars, format, capitalize, &out_dir)
        }
        Command::Score {
            sets,
            scorer,
            mode,
            corpus,
            k,
            vocab_limit,
            seed,
            out,
        } => {
            if scorer == Scorer::Bigram && corpus.is_none() {
                return Err(Failure::Usage("the bigram scorer needs --corpus".into()));
            }
            require_files(std::iter::once(&sets).chain(&corpus))?;
            let sets = read_sets(&sets)?;
            let table = match scorer {
                Scorer::Bigram => {
                    let path = corpus.as_deref().expect("checked above");
                    let corpus = read_corpus(open(path)?).map_err(|e| io_err(path, e))?;
                    let model =
                        train_bigram(&corpus, k, vocab_limit).map_err(|e| domain(path, e))?;
                    bigram_scores(&model, &sets, mode.into())
                }
                Scorer::Oracle => make_reference_scorer(&sets, ScorerBehavior::Oracle, mode.into()),
                Scorer::Adversary => {
                    make_reference_scorer(&sets, ScorerBehavior::Adversary, mode.into())
                }
                Scorer::Constant => {
                    make_reference_scorer(&sets, ScorerBehavior::Constant, mode.into())
                }
                Scorer::Random => {
                    make_reference_scorer(&sets, ScorerBehavior::SeededRandom(seed), mode.into())
                }
            };
            emit(out.as_deref(), |w| write_scores(&table, w).map(drop))
        }
        Command::Evaluate {
            sets,
            scores,
            mode,
            vocab,
            language,
            run_id,
            out,
        } => {
            if mode == Mode::Masked && vocab.is_none() {
                return Err(Failure::Usage("masked evaluation needs --vocab".into()));
            }
            require_files([&sets, &scores].into_iter().chain(&vocab))?;
            cmd_evaluate(
                &sets,
                &scores,
                mode,
                vocab.as_deref(),
                &language,
                &run_id,
                out.as_deref(),
            )
        }
        Command::Report {
            records,
            complexity,
            correlate: want_rho,
            format,
            out,
        } => {
            require_files(records.iter().chain(&complexity))?;
            cmd_report(
                &records,
                complexity.as_deref(),
                want_rho,
                format,
                out.as_deref(),
            )
        }
    }
}

fn require_files<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> Result<(), Failure> {
    for p in paths {
        if !p.is_file() {
            return Err(Failure::Io(format!("{}: no such file", p.display())));
        }
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io_err(path, e))
}

fn read_sets(path: &Path) -> Result<Vec<MinimalSet>, Failure> {
    read_structured(open(path)?).map_err(|e| match e {
        crate::FormatError::Io(e) => io_err(path, e),
        other => domain(path, other),
    })
}

/// Writes to `out` (or stdout when absent).
fn emit(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_err(path, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w)
                .and_then(|()| w.flush())
                .map_err(|e| io_err(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w).map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn construction_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn format_diagnostic(path: &Path, severity: &str, d: &Diagnostic) -> String {
    format!(
        "{}:{}: {severity}[{}]: {}",
        path.display(),
        d.line,
        d.code,
        d.message
    )
}

fn cmd_validate(grammars: &[PathBuf]) -> Result<(), Failure> {
    let outcomes: Vec<Result<(Vec<String>, bool), Failure>> = grammars
        .par_iter()
        .map(|path| {
            let src = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let mut lines = Vec::new();
            let (g, warnings) = match parse_grammar_with_warnings(&src, &construction_id(path)) {
                Ok(parsed) => parsed,
                Err(e) => {
                    lines.push(format!(
                        "{}:{}: error[parse]: {}",
                        path.display(),
                        e.line,
                        e.kind
                    ));
                    return Ok((lines, false));
                }
            };
            let report = validate_grammar(&g);
            for d in &report.errors {
                lines.push(format_diagnostic(path, "error", d));
            }
            for d in warnings.iter().chain(&report.warnings) {
                lines.push(format_diagnostic(path, "warning", d));
            }
            Ok((lines, report.is_ok()))
        })
        .collect();
    let mut all_ok = true;
    for outcome in outcomes {
        let (lines, ok) = outcome?;
        for l in lines {
            eprintln!("{l}");
        }
        all_ok &= ok;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Domain("validation failed".into()))
    }
}

fn cmd_generate(
    grammars: &[PathBuf],
    format: SetFormat,
    capitalize: bool,
    out_dir: &Path,
) -> Result<(), Failure> {
    let mut stems: Vec<String> = grammars.iter().map(|p| construction_id(p)).collect();
    stems.sort();
    if let Some(w) = stems.windows(2).find(|w| w[0] == w[1]) {
        return Err(Failure::Usage(format!(
            "two grammars share the construction id `{}`",
            w[0]
        )));
    }
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let ext = match format {
        SetFormat::Labeled => "txt",
        SetFormat::Structured => "jsonl",
    };
    let outcomes: Vec<Result<Vec<String>, Failure>> = grammars
        .par_iter()
        .map(|path| {
            let id = construction_id(path);
            let src = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let (g, parse_warnings) =
                parse_grammar_with_warnings(&src, &id).map_err(|e| domain(path, e))?;
            let generation = generate(&g).map_err(|e| domain(path, e))?;
            let mut sets = generation.sets;
            if capitalize {
                sets = sets.iter().map(apply_capitalization).collect();
            }
            let target = out_dir.join(format!("{id}.{ext}"));
            let file = File::create(&target).map_err(|e| io_err(&target, e))?;
            let mut w = BufWriter::new(file);
            match format {
                SetFormat::Labeled => write_labeled_lines(&sets, &mut w),
                SetFormat::Structured => write_structured(&sets, &mut w),
            }
            .map_err(|e| io_err(&target, e))?;
            Ok(parse_warnings
                .iter()
                .chain(&generation.warnings)
                .map(|d| format_diagnostic(path, "warning", d))
                .collect())
        })
        .collect();
    let mut first_failure = None;
    for outcome in outcomes {
        match outcome {
            Ok(lines) => lines.iter().for_each(|l| eprintln!("{l}")),
            Err(f) => {
                if first_failure.is_none() {
                    first_failure = Some(f);
                } else {
                    eprintln!("clams: {}", f.message());
                }
            }
        }
    }
    first_failure.map_or(Ok(()), Err)
}

/// Full mode scores each sentence; masked mode scores the grammatical
/// sentence with each candidate form substituted at the focus.
pub fn bigram_scores(model: &BigramModel, sets: &[MinimalSet], mode: ScoreMode) -> ScoreTable {
    let mut table = ScoreTable::new(mode);
    for set in sets {
        match mode {
            ScoreMode::FullSentence => {
                for s in set.sentences() {
                    let key = s.render();
                    if table.sentence_score(&key).is_none() {
                        let _ = table.insert_full(&key, model.score_sentence(&s.tokens));
                    }
                }
            }
            ScoreMode::MaskedFocus => {
                let start = set.focus.token_index;
                let end = start + set.focus.grammatical_form.len();
                let forms =
                    std::iter::once(&set.focus.grammatical_form).chain(&set.focus.variant_forms);
                for form in forms {
                    let tokens = &set.grammatical.tokens;
                    let filled: Vec<&str> = tokens[..start]
                        .iter()
                        .chain(form.tokens())
                        .chain(&tokens[end.min(tokens.len())..])
                        .map(String::as_str)
                        .collect();
                    let key =
                        MaskedKey::new(&set.construction_id, set.set_index, &form.to_string());
                    let _ = table.insert_masked(key, model.score_sentence(&filled));
                }
            }
        }
    }
    table
}

fn cmd_evaluate(
    sets_path: &Path,
    scores_path: &Path,
    mode: Mode,
    vocab: Option<&Path>,
    language: &str,
    run_id: &str,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let sets = read_sets(sets_path)?;
    let loaded = load_scores(open(scores_path)?, mode.into()).map_err(|e| match e {
        crate::FormatError::Io(e) => io_err(scores_path, e),
        other => domain(scores_path, other),
    })?;
    if loaded.duplicates > 0 {
        eprintln!(
            "{}: warning: {} repeated key(s); the last score was kept",
            scores_path.display(),
            loaded.duplicates
        );
    }
    let results = match mode {
        Mode::Full => evaluate_full(&sets, &loaded.table, TiePolicy::Incorrect),
        Mode::Masked => {
            let path = vocab.expect("checked by caller");
            let vocab = read_vocabulary(open(path)?).map_err(|e| io_err(path, e))?;
            evaluate_masked(&sets, &loaded.table, &vocab)
        }
    }
    .map_err(|e| domain(scores_path, e))?;

    let records: Vec<EvalRecord> = results
        .iter()
        .map(|r| EvalRecord::new(language, run_id, r))
        .collect();
    let reports = build_reports(&records).map_err(|e| Failure::Domain(e.to_string()))?;
    eprint!("{}", render_table(&reports, &[], None));
    emit(out, |w| write_eval_records(&records, w))
}

fn cmd_report(
    record_paths: &[PathBuf],
    complexity: Option<&Path>,
    want_rho: bool,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mut records = Vec::new();
    for path in record_paths {
        records.extend(read_eval_records(open(path)?).map_err(|e| domain(path, e))?);
    }
    let reports = build_reports(&records).map_err(|e| Failure::Domain(e.to_string()))?;
    let complexity = match complexity {
        Some(path) => {
            let profiles = read_wals(open(path)?).map_err(|e| domain(path, e))?;
            complexities(&profiles).map_err(|e| domain(path, e))?
        }
        None => Vec::new(),
    };
    let rho = if want_rho {
        Some(
            correlate(&reports, &complexity)
                .map_err(|e| Failure::Domain(format!("correlation: {e}")))?,
        )
    } else {
        None
    };
    let text = match format {
        ReportFormat::Table => render_table(&reports, &complexity, rho.as_ref()),
        ReportFormat::Records => render_records(&reports, &complexity, rho.as_ref()),
    };
    emit(out, |w| w.write_all(text.as_bytes()))
}
