fn main() {
    std::process::exit(fricke3::cli::run());
}
