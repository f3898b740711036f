fn main() {
    std::process::exit(auction_leakage::cli::run_from_args(std::env::args_os()));
}
