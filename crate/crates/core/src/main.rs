use std::io::Write;

fn main() {
    let (code, text) = cs4kit::cli::run(std::env::args_os());
    let stream = if code == cs4kit::cli::EXIT_USAGE {
        eprint!("{text}");
        None
    } else {
        Some(text)
    };
    if let Some(text) = stream {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(text.as_bytes());
        let _ = stdout.flush();
    }
    std::process::exit(code);
}
