fn main() {
    std::process::exit(atss::cli::run(std::env::args_os()));
}
