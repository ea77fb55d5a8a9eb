fn main() {
    std::process::exit(scenekg::cli::run());
}
