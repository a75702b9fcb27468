fn main() {
    env_logger::init();
    std::process::exit(quadrast::cli::run(std::env::args()));
}
