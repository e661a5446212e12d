fn main() {
    std::process::exit(propflow::cli::run(std::env::args_os()));
}
