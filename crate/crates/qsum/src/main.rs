fn main() {
    // Die quietly when stdout is a closed pipe (`qsum list | head`)
    // instead of panicking: restore the default SIGPIPE disposition,
    // which Rust overrides to ignore at startup.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(qsum::cli::run());
}
