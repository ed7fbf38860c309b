fn main() {
    std::process::exit(oversquash::cli::run(std::env::args_os()));
}
