fn main() {
    let code = xlmimo_cli::run(std::env::args_os());
    std::process::exit(code);
}
