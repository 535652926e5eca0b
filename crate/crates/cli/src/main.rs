fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = harmeas_cli::init_threads() {
        eprintln!("harmeas: {e}");
        std::process::exit(harmeas_cli::EXIT_ERROR);
    }
    std::process::exit(harmeas_cli::run(std::env::args_os()));
}
