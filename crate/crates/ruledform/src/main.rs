fn main() {
    std::process::exit(ruledform::cli::run());
}
