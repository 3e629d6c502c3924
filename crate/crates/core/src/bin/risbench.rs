fn main() {
    std::process::exit(risbench::cli::main_with_args(std::env::args_os()));
}
