fn main() {
    std::process::exit(aqml_cli::cli_main(std::env::args_os()));
}
