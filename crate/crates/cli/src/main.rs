fn main() {
    std::process::exit(elastica_cli::run());
}
