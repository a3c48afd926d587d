fn main() {
    std::process::exit(quotfib::cli::run(std::env::args_os()));
}
