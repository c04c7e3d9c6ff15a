fn main() {
    std::process::exit(ricci::cli::run_from(std::env::args_os()));
}
