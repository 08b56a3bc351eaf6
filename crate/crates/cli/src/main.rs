mod experiments;

fn main() {
    std::process::exit(experiments::run());
}
