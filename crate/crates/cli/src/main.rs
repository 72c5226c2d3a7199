fn main() {
    std::process::exit(qecmarkov_cli::main_with_args(std::env::args_os()));
}
