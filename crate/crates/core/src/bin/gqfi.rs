fn main() {
    std::process::exit(gqfi::cli::run(std::env::args_os()));
}
