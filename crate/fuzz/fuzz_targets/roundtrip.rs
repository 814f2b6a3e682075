#![no_main]

use libfuzzer_sys::fuzz_target;
use ribbon_core::scene::{parse_scene, serialize_scene};

fuzz_target!(|data: &[u8]| {
    let Ok(cfg) = parse_scene(data) else { return };
    let text = serialize_scene(&cfg);
    let back = parse_scene(text.as_bytes()).expect("serialized scene parses");
    assert_eq!(back, cfg);
    assert_eq!(serialize_scene(&back), text);
});
