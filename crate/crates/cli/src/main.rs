fn main() {
    std::process::exit(sectionzeros_cli::run(std::env::args_os()));
}
