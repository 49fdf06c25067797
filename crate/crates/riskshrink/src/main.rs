fn main() {
    std::process::exit(riskshrink::cli::run(std::env::args_os()));
}
