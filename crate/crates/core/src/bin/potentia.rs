fn main() {
    std::process::exit(potentia::cli::main());
}
