//! `tailsim` binary; see [`tailsim::cli`].

fn main() {
    std::process::exit(tailsim::cli::main_entry());
}
