fn main() {
    std::process::exit(energy_pyramid::cli::run(std::env::args_os()));
}
