fn main() {
    let (code, out, err) = goldman_core::cli::run(std::env::args_os());
    if !out.is_empty() {
        println!("{out}");
    }
    if !err.is_empty() {
        eprintln!("{err}");
    }
    std::process::exit(code);
}
