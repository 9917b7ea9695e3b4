fn main() {
    std::process::exit(bivfact::cli::run_from_env());
}
