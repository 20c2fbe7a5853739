fn main() {
    let code = sullivan_core::cli::run(std::env::args().collect());
    std::process::exit(code);
}
