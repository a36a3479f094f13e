fn main() {
    std::process::exit(ssarc::cli::main());
}
