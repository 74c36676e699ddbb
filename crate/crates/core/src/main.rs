fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(ghz_routing::cli::run(&argv));
}
