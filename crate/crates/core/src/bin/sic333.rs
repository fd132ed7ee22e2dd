fn main() {
    std::process::exit(sic333::cli::run(std::env::args_os()));
}
