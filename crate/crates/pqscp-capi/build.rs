//! Regenerates `include/pqscp.h` from the annotated sources. The header is
//! committed, so downstream C users never need this step; the build only
//! rewrites the file when the surface actually changed.

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let config = cbindgen::Config::from_file(format!("{crate_dir}/cbindgen.toml"))
        .expect("cbindgen.toml parses");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("the C surface stays representable in a C header")
        .write_to_file(format!("{crate_dir}/include/pqscp.h"));
}
