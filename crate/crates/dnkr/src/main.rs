fn main() {
    std::process::exit(dnkr::cli::run());
}
