fn main() {
    std::process::exit(geosub::cli::run());
}
