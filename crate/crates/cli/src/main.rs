fn main() {
    std::process::exit(rgl_cli::run(std::env::args_os()));
}
