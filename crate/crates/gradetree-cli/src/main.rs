use std::io::{stderr, stdin, stdout};

fn main() {
    let code = gradetree_cli::run(
        std::env::args(),
        &mut stdin().lock(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    );
    std::process::exit(code);
}
