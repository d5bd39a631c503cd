fn main() {
    std::process::exit(lowdisc::cli::run_command(std::env::args_os()));
}
