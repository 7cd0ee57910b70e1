use std::io::Write;

fn main() {
    let stdin = std::io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = thd::cli::run(std::env::args_os(), &mut stdin, &mut stdout, &mut stderr);
    let _ = stdout.flush();
    std::process::exit(code);
}
