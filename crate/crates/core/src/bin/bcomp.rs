fn main() {
    std::process::exit(boundary_comparison::cli::run(std::env::args_os()));
}
