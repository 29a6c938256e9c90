fn main() {
    std::process::exit(mhdes::cli::run(std::env::args_os()));
}
