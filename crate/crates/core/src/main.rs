fn main() {
    std::process::exit(okpattern::cli::run(std::env::args_os()));
}
