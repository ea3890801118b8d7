fn main() -> std::process::ExitCode {
    hausdorff_spectra::cli::main()
}
