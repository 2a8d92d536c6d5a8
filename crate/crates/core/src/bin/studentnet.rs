fn main() {
    std::process::exit(studentnet::cli::run(std::env::args_os()));
}
