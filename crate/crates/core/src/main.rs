fn main() {
    std::process::exit(spectile::cli::run(std::env::args_os()));
}
