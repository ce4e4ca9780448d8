fn main() {
    std::process::exit(qmc_cli::run_cli(std::env::args_os()));
}
