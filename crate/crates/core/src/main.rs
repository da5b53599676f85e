fn main() {
    std::process::exit(treelimit::cli::main_with_args(std::env::args_os()));
}
