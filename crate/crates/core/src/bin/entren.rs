fn main() {
    std::process::exit(entren::expcli::cli_main(std::env::args_os()));
}
