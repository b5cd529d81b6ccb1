fn main() {
    std::process::exit(zerosum_cli::run(std::env::args_os()));
}
