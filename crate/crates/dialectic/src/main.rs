fn main() {
    std::process::exit(dialectic::cli::run());
}
