fn main() {
    std::process::exit(k3monad::cli::run(std::env::args_os()));
}
