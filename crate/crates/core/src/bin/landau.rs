fn main() {
    std::process::exit(landau::cli::main_with_args(std::env::args_os()));
}
