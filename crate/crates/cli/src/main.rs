fn main() {
    std::process::exit(qdce_cli::cli_main(std::env::args_os()));
}
