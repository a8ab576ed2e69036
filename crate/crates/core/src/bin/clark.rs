fn main() {
    std::process::exit(rif_clark::cli::main());
}
