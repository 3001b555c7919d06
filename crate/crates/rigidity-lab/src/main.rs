fn main() {
    std::process::exit(rigidity_lab::cli::main_with_exit_code());
}
