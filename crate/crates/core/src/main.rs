fn main() -> std::process::ExitCode {
    qwalk::cli::main_with_args(std::env::args_os())
}
