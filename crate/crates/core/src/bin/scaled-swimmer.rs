fn main() {
    std::process::exit(scaled_swimmer::cli::run(std::env::args_os()));
}
