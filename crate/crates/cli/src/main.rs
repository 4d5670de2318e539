fn main() {
    std::process::exit(cmc_cli::cli_main(std::env::args_os()));
}
