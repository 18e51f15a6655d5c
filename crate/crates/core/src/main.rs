fn main() {
    std::process::exit(boundary_kdf::cli::run(std::env::args_os()));
}
