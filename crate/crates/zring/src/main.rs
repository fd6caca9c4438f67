use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, out) = zring::cli::run(&argv);
    if code == 2 {
        let _ = write!(std::io::stderr(), "{out}");
    } else {
        let _ = write!(std::io::stdout(), "{out}");
    }
    std::process::exit(code);
}
