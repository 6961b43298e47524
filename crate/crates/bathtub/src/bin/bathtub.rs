//! Command-line entry point; see `bathtub --help`.

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = bathtub::cli_app::main_with_args(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    );
    std::process::exit(code);
}
