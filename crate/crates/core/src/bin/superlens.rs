fn main() {
    std::process::exit(superlens::harness::cli_main(std::env::args_os()));
}
