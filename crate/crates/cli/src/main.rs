fn main() {
    std::process::exit(cablewave_cli::run(std::env::args_os()));
}
