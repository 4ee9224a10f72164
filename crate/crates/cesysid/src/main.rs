fn main() {
    std::process::exit(cesysid::cli::run(std::env::args_os()));
}
