fn main() {
    std::process::exit(rectsum::cli::run(std::env::args_os()));
}
