fn main() {
    std::process::exit(spinmus::cli::main_with_args(std::env::args_os()));
}
