fn main() {
    std::process::exit(spdc::cli::main_with(std::env::args_os()));
}
