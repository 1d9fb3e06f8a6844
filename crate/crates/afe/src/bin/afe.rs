fn main() {
    std::process::exit(afe::cli::main_with_args(std::env::args_os()));
}
