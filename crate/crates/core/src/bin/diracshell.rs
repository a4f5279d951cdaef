fn main() {
    std::process::exit(diracshell::cli::main_with(std::env::args_os()));
}
