//! Command-line front end: builds a job from flags or a JSON file, runs it, and
//! maps failures onto exit statuses.

pub mod args;
mod commands;
pub mod error;
pub mod job;
pub mod views;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use rexosc_core::model::REConfig;

use args::{Cli, Command, SpecArgs};
pub use error::{CliError, EXIT_NUMERICAL, EXIT_SINGULAR, EXIT_VALIDATION};
pub use job::{Format, JobConfig};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "REXOSC_THREADS";

/// Parse `argv` (program name first), run, and return the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_VALIDATION } else { 0 };
        }
    };
    // Output is buffered so the worker pool never touches the caller's writer.
    let mut buffer = Vec::new();
    let result = thread_pool().and_then(|pool| pool.install(|| dispatch(&cli.command, &mut buffer)));
    if out.write_all(&buffer).and_then(|_| out.flush()).is_err() {
        let _ = writeln!(err, "error: cannot write to stdout");
        return EXIT_VALIDATION;
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

/// Default co-dimension sweep for `table`: the admissible values among 0..=3.
fn table_job(a: &SpecArgs) -> Result<JobConfig, CliError> {
    let mut job = job::job_from_args(a, true)?;
    if a.job.is_none() && a.m.is_empty() && job.spec.dimension() == 1 {
        let sweep: Vec<u32> = (0..=3)
            .filter(|&m| REConfig::new(vec![m]).map(|c| c.is_admissible(&job.spec)).unwrap_or(false))
            .collect();
        job.codimension_sweep = Some(sweep);
        if a.states.is_none() {
            job.states = job::parse_states("g;0;1;2", 1)?;
        }
    }
    Ok(job)
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    if let Command::Degeneracy(a) = cmd {
        return commands::degeneracy(a, out);
    }
    let (spec_args, job) = match cmd {
        Command::Table(a) => (&a.spec, table_job(&a.spec)?),
        Command::Spectrum(a) => {
            let mut job = job::job_from_args(&a.spec, false)?;
            if a.spec.job.is_none() {
                job.grids.cutoff = a.cutoff;
                if !a.exact.is_empty() {
                    job.grids.exact_ratios = Some(a.exact.clone());
                }
            }
            (&a.spec, job)
        }
        Command::Verify(a) => (&a.spec, job::job_from_args(&a.spec, false)?),
        Command::Transform(a) => (&a.spec, job::job_from_args(&a.spec, false)?),
        Command::Plotdata(a) => (&a.spec, job::job_from_args(&a.spec, false)?),
        Command::Degeneracy(_) => unreachable!("handled above"),
    };
    if spec_args.emit_job {
        job.validate_model()?;
        out.write_all(job.to_canonical_json().as_bytes())?;
        return Ok(());
    }
    job.validate()?;
    let mut file;
    let sink: &mut dyn Write = match &job.outputs.path {
        Some(p) => {
            file = std::io::BufWriter::new(std::fs::File::create(p)?);
            &mut file
        }
        None => out,
    };
    match cmd {
        Command::Table(_) => commands::table(&job, sink),
        Command::Spectrum(_) => commands::spectrum_cmd(&job, sink),
        Command::Verify(_) => commands::verify_cmd(&job, sink),
        Command::Transform(_) => commands::transform(&job, sink),
        Command::Plotdata(_) => commands::plotdata(&job, sink),
        Command::Degeneracy(_) => unreachable!("handled above"),
    }?;
    sink.flush()?;
    Ok(())
}
