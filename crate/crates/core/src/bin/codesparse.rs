fn main() {
    std::process::exit(codesparse::cli::run(std::env::args_os()));
}
