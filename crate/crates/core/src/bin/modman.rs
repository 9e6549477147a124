fn main() {
    std::process::exit(modman::cli::main_with_args(std::env::args_os()));
}
