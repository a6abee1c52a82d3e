fn main() {
    std::process::exit(magnon_efimov::cli::run(std::env::args_os()));
}
