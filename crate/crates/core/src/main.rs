fn main() {
    std::process::exit(qtorus::cli::run(std::env::args_os()));
}
