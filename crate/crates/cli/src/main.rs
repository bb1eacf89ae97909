fn main() {
    std::process::exit(monopole_cli::main_with(std::env::args_os()));
}
