fn main() {
    std::process::exit(jetcone::cli::main());
}
