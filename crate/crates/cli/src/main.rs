fn main() {
    std::process::exit(floguide_cli::main_with_args(std::env::args_os()));
}
