fn main() {
    eprintln!("CLI not yet wired");
    std::process::exit(2);
}
