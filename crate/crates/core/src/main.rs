fn main() {
    std::process::exit(fewweight::cli::run(std::env::args_os()));
}
