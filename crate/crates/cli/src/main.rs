fn main() {
    std::process::exit(digold_cli::main_with_args(std::env::args_os()));
}
