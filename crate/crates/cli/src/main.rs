fn main() {
    std::process::exit(dqm_cli::run(std::env::args_os()));
}
