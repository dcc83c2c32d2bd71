fn main() {
    std::process::exit(ghzbell::cli::run());
}
