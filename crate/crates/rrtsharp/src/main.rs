fn main() {
    std::process::exit(rrtsharp::cli::main_with_args(std::env::args_os()));
}
