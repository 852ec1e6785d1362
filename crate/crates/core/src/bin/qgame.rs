fn main() {
    std::process::exit(qgame::run());
}
