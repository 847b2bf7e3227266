//! Command-line front end; see [`qbgg::cli`].

fn main() {
    std::process::exit(qbgg::cli::main_with_args(std::env::args_os()));
}
