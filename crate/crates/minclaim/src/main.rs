fn main() {
    std::process::exit(minclaim::cli::run(std::env::args_os()));
}
