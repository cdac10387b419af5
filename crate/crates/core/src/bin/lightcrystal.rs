fn main() {
    std::process::exit(lightcrystal::io::cli::main_with_args(std::env::args_os()));
}
