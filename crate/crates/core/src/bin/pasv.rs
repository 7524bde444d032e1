fn main() {
    std::process::exit(pasv::cli::run(std::env::args_os()));
}
