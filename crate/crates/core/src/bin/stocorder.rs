fn main() {
    std::process::exit(stocorder::cli::run(std::env::args_os()));
}
