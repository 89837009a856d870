fn main() {
    std::process::exit(sepinv::cli::run(std::env::args_os()));
}
