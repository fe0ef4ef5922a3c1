fn main() {
    std::process::exit(torsionlab::cli::run());
}
