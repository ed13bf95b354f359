//! Front end for `gpalg`: the workspace file format, object construction
//! and the report protocol behind the `gpa` binary.

pub mod commands;
pub mod instantiate;
pub mod workspace;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub use commands::{run_workspace, CliError, Format, Report, RunOptions, Verb};
pub use workspace::{parse_str, parse_workspace, ParseError, Workspace};

/// Parses `path` and runs `verb`, returning the exit code and rendered output.
pub fn run_file(path: &Path, verb: Verb, opts: &RunOptions, format: Format) -> (i32, String) {
    let result = parse_workspace(path).map_err(CliError::from).and_then(|ws| run_workspace(&ws, verb, opts));
    match result {
        Ok(report) => (report.exit_code(), report.render(format)),
        Err(e) => {
            let code = e.exit_code();
            let text = match format {
                Format::Machine => format!("error = {e}\nexit = {code}\n"),
                Format::Text => format!("error: {e}\n"),
            };
            (code, text)
        }
    }
}

/// Sorted `*.alg` files in `dir`.
pub fn corpus_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "alg"))
        .collect();
    files.sort();
    Ok(files)
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Runs `verb` over every file of `dir` in parallel and writes one report per
/// file to `out`. Returns `(file, exit code)` pairs in file order.
pub fn run_batch(dir: &Path, out: &Path, verb: Verb, opts: &RunOptions, format: Format) -> std::io::Result<Vec<(PathBuf, i32)>> {
    fs::create_dir_all(out)?;
    let files = corpus_files(dir)?;
    gpalg::par::map_range(files.len(), |k| {
        let file = &files[k];
        let (code, text) = run_file(file, verb, opts, format);
        let stem = file.file_stem().unwrap_or_default().to_string_lossy();
        write_atomic(&out.join(format!("{stem}.{}.txt", verb.name())), &text)?;
        Ok((file.clone(), code))
    })
    .into_iter()
    .collect()
}
