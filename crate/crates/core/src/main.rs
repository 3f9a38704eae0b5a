use std::path::PathBuf;

use freedom_core::cli::{run, CACHE_DIR_ENV};

fn main() {
    let cache_dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    let code = run(
        std::env::args_os().skip(1),
        cache_dir.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
