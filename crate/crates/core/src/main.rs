use std::io::Write;

fn main() {
    let outcome = tfmodlab::cli::run_from_args(std::env::args_os(), &mut std::io::stdin().lock());
    let mut out = std::io::stdout().lock();
    // A closed pipe downstream is not worth a panic.
    let _ = out.write_all(outcome.report.as_bytes());
    let _ = out.flush();
    std::process::exit(outcome.code);
}
