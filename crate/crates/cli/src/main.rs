fn main() {
    lucaslp_cli::configure_threads();
    std::process::exit(lucaslp_cli::run_cli(std::env::args_os()));
}
