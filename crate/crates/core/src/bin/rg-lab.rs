fn main() {
    std::process::exit(rg_lab::cli::run(std::env::args_os()));
}
