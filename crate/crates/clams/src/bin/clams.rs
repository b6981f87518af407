fn main() -> std::process::ExitCode {
    clams::cli::main()
}
