fn main() {
    std::process::exit(permlab_cli::run_cli(std::env::args_os()));
}
