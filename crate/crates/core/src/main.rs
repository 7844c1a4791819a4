fn main() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("SHADOWLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    std::process::exit(shadowlab::cli::run(std::env::args_os()));
}
