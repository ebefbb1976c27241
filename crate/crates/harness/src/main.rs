fn main() {
    std::process::exit(teamneg_harness::cli::cli_main(std::env::args_os()));
}
