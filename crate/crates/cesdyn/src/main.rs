fn main() -> std::process::ExitCode {
    cesdyn::cli::main()
}
