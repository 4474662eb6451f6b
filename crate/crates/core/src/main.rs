fn main() {
    std::process::exit(cmgrass::cli::main_with_args(std::env::args_os()));
}
