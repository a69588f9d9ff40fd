fn main() {
    std::process::exit(entcert_cli::run(std::env::args_os()));
}
