fn main() {
    std::process::exit(ogw_localization::cli::run(std::env::args_os()));
}
