fn main() {
    std::process::exit(cxi::cli::run_from_args(std::env::args_os()));
}
