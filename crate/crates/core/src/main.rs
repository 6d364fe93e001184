use kscheck_core::cli::{exit, run_args};

fn main() {
    let (text, code) = run_args(std::env::args_os());
    // reports go to stdout even on a mismatch or timeout; errors and usage go to stderr
    if matches!(code, exit::OK | exit::MISMATCH | exit::TIMEOUT) {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    std::process::exit(code);
}
