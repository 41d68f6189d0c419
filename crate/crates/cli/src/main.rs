fn main() {
    std::process::exit(cqstar_cli::run());
}
