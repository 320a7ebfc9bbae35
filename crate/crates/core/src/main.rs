fn main() {
    std::process::exit(statdist::cli::main_with(std::env::args_os()));
}
