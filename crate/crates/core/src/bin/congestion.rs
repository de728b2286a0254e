use std::io::Write;

fn main() {
    let outcome = congestion::cli::run_command(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.rendered.as_bytes());
    let _ = stdout.flush();
    std::process::exit(outcome.exit_code);
}
