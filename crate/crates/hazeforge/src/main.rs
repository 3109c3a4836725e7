fn main() {
    std::process::exit(hazeforge::cli::run());
}
