fn main() {
    std::process::exit(erode::cli::cli_main(std::env::args_os()));
}
