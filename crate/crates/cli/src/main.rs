fn main() {
    // One invocation, one thread.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    std::process::exit(dsiep_cli::run(std::env::args_os()));
}
