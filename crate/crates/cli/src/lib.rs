//! Library surface of the `mfcat` command-line tool: the script language,
//! the executor and the emitters, reused by the binary and the test suites.

pub mod emit;
pub mod exec;
pub mod script;

pub use exec::{execute, ExecOptions, ResultRecord};
pub use script::{parse_script, ParseError, Script};

/// Parses and runs a script, returning the rendered output.
pub fn run_script_text(
    text: &str,
    opts: &ExecOptions,
    json: bool,
    timings: bool,
) -> Result<String, String> {
    let script = parse_script(text).map_err(|e| e.to_string())?;
    let results = execute(&script, opts)?;
    Ok(if json {
        emit::emit_json(&results, timings)
    } else {
        emit::emit_text(&results, timings)
    })
}
