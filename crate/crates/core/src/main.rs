fn main() {
    std::process::exit(stereo_uncertainty::cli::main_with_args(std::env::args_os()));
}
