fn main() -> std::process::ExitCode {
    mdsc::cli::main_with(std::env::args_os())
}
