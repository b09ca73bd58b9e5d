fn main() {
    std::process::exit(loopsoliton::cli::run(std::env::args_os()));
}
