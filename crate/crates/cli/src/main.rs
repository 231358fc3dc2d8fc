fn main() {
    std::process::exit(amalg_cli::run());
}
