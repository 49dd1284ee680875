fn main() {
    std::process::exit(ghost_series::cli::run(std::env::args_os()));
}
