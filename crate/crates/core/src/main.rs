fn main() {
    std::process::exit(lgsim::cli::main_with_args(std::env::args_os()));
}
