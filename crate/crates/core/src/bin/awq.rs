fn main() {
    std::process::exit(askey_wilson::cli::run(std::env::args_os()));
}
