fn main() {
    std::process::exit(cryocam::cli::run_command(std::env::args_os()));
}
