fn main() {
    let out_dir = std::env::var_os(qentangle_cli::OUT_DIR_ENV).map(Into::into);
    std::process::exit(qentangle_cli::run_cli(std::env::args_os(), out_dir));
}
