fn main() {
    std::process::exit(bcn::run(std::env::args_os()));
}
