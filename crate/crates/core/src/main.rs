fn main() {
    std::process::exit(stripfact::cli::main_with(std::env::args_os()));
}
