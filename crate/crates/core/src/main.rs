fn main() {
    std::process::exit(fermikernel::cli::run(std::env::args_os()));
}
