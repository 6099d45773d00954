fn main() {
    std::process::exit(malliavin_lab::cli::run(std::env::args_os()));
}
