fn main() {
    std::process::exit(hopfring::cli::run(std::env::args_os()));
}
