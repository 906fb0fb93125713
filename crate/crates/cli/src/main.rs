fn main() {
    let code = stabforge_cli::run_cli(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
