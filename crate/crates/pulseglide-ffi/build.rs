use std::env;
use std::path::PathBuf;

// Regenerates include/pulseglide.h from the crate source. The header is
// committed so C consumers can build without running cbindgen themselves;
// generation failures only warn, keeping offline builds working.
fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("pulseglide.h");

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(e) => println!("cargo:warning=skipping header generation: {e}"),
    }
}
