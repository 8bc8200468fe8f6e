fn main() {
    std::process::exit(beamlab::cli::main());
}
