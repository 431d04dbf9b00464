//! Generate `include/conley.h` with cbindgen. The committed header is the
//! source of truth for consumers; this script refreshes it when cbindgen
//! succeeds and leaves it untouched (with a warning) otherwise, so builds
//! never depend on header generation.

use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").expect("set by cargo"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let header = crate_dir.join("include").join("conley.h");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(e) => {
            println!("cargo:warning=cbindgen failed ({e}); keeping the committed header");
        }
    }
}
