fn main() {
    std::process::exit(fracrand::cli::run(std::env::args_os()));
}
