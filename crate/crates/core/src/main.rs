use std::io::Write;

fn main() {
    let (code, out, err) = spe_core::cli::run(std::env::args_os());
    if !out.is_empty() {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{out}");
    }
    if !err.is_empty() {
        eprint!("{err}");
    }
    std::process::exit(code);
}
