fn main() {
    std::process::exit(cuntz::cli::run());
}
