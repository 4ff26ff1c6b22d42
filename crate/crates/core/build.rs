use std::path::Path;

fn main() {
    println!("cargo::rustc-check-cfg=cfg(has_viewer_asset)");
    println!("cargo::rerun-if-changed=assets");
    if Path::new("assets/viewer.min.js").exists() {
        println!("cargo::rustc-cfg=has_viewer_asset");
    }
}
