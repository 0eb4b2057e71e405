fn main() {
    std::process::exit(atac_limits::cli::run(std::env::args_os()));
}
