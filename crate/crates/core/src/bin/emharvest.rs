fn main() {
    std::process::exit(emharvest::cli::run(std::env::args_os()));
}
