fn main() {
    std::process::exit(catenoid_tails::dispatch(std::env::args_os()));
}
