fn main() {
    std::process::exit(spectralgas::cli::main_with_args(std::env::args_os()));
}
