fn main() {
    std::process::exit(regret_median::cli::run(std::env::args_os()));
}
