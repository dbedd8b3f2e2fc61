fn main() {
    let code = pangle::cli::main_with_io();
    std::process::exit(code);
}
