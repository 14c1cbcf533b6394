fn main() {
    std::process::exit(wasn_energy::cli::run(std::env::args_os()));
}
