#![no_main]

use libfuzzer_sys::fuzz_target;
use ribbon_core::scene::parse_scene_logged;

fuzz_target!(|data: &[u8]| {
    if let Ok((cfg, _)) = parse_scene_logged(data) {
        // Anything that validates must also build a surface without panicking.
        let _ = cfg.build_surface().map(|s| cfg.build_curves(&s));
    }
});
