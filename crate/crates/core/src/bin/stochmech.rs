fn main() {
    std::process::exit(stochmech::cli::main());
}
