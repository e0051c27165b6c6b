fn main() {
    std::process::exit(trapreact::cli::run(std::env::args_os()));
}
