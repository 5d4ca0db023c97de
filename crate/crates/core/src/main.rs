fn main() {
    std::process::exit(e6lax::cli::main_with_args(std::env::args_os()));
}
