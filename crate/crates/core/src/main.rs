use std::io::Write;

fn main() {
    let out = glc::cli::run_args_threaded(std::env::args_os().collect());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
