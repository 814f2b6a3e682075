use proptest::prelude::*;
use ribbon_core::scene::*;

fn surface() -> impl Strategy<Value = (String, Vec<f64>)> {
    prop_oneof![
        Just(("plane".to_string(), vec![])),
        (0.1f64..10.0).prop_map(|r| ("cylinder".to_string(), vec![r])),
        (0.1f64..10.0).prop_map(|r| ("sphere".to_string(), vec![r])),
        (0.1f64..1.0, 1.1f64..5.0).prop_map(|(r, k)| ("torus".to_string(), vec![r * k, r])),
        (0.1f64..2.0, 0.1f64..2.0, 0.1f64..2.0)
            .prop_map(|(c, db, da)| ("ellipsoid".to_string(), vec![c + db + da, c + db, c])),
    ]
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, Just(std::f64::consts::PI), Just(-0.0), Just(1e-300)]
}

fn curve(k: usize) -> impl Strategy<Value = CurveSpec> {
    (
        prop::sample::select(CurveFamily::ALL.to_vec()),
        "[a-z][a-z0-9_.-]{0,10}",
        prop::collection::vec(number(), 8..12),
        any::<bool>(),
        (-10.0f64..10.0, 0.01f64..10.0),
    )
        .prop_map(move |(family, name, raw, closed, (a, len))| {
            let spline = family == CurveFamily::Spline;
            let knots = if spline { raw.chunks_exact(2).map(|c| [c[0], c[1]]).collect() } else { Vec::new() };
            let params = if spline { Vec::new() } else { raw[..family.arity()].to_vec() };
            CurveSpec { name: format!("{name}{k}"), family, params, closed, interval: (a, a + len), knots }
        })
}

fn config() -> impl Strategy<Value = SceneConfig> {
    (
        "[A-Za-z][A-Za-z0-9 _-]{0,12}[A-Za-z0-9]",
        surface(),
        (1usize..4).prop_flat_map(|n| (0..n).map(curve).collect::<Vec<_>>()),
        64usize..100_000,
        (1e-3f64..100.0, 0.01f64..=1.0),
        prop::array::uniform4(1e-12f64..1.0),
        prop::sample::subsequence(Artifact::ALL.to_vec(), 0..=4),
    )
        .prop_map(|(name, (surface, surface_params), curves, samples, (w_max, cap), t, outputs)| SceneConfig {
            name,
            surface,
            surface_params,
            curves,
            samples,
            w_max,
            striction_cap: cap,
            tolerances: Tolerances { closure: t[0], vertex: t[1], audit: t[2], regularity: t[3] },
            outputs,
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(cfg in config()) {
        let text = serialize_scene(&cfg);
        let (back, log) = parse_scene_logged(text.as_bytes()).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, cfg);
        prop_assert!(log.is_empty(), "{:?}", log);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_scene(&bytes);
    }

    #[test]
    fn mangled_scenes_never_panic(cut in 0usize..400, junk in "[\\[\\]=#,;*/a-z0-9 .-]{0,12}") {
        let text = include_str!("../../../scenes/ellipsoid.scene");
        let at = text.char_indices().map(|(i, _)| i).nth(cut).unwrap_or(text.len());
        let mangled = format!("{}{}{}", &text[..at], junk, &text[at..]);
        let _ = parse_scene(mangled.as_bytes());
    }
}

#[test]
fn shipped_scenes_parse() {
    for text in [include_str!("../../../scenes/torus.scene"), include_str!("../../../scenes/ellipsoid.scene")] {
        let (cfg, log) = parse_scene_logged(text.as_bytes()).unwrap();
        let s = cfg.build_surface().unwrap();
        assert_eq!(cfg.build_curves(&s).unwrap().len(), cfg.curves.len());
        assert!(log.iter().any(|l| l.starts_with("default tolerances.audit = ")), "{log:?}");
    }
}

#[test]
fn every_default_is_logged() {
    let (cfg, log) =
        parse_scene_logged(b"[surface]\nkind = sphere\n[curve]\nfamily = latitude\nparams = 1\n").unwrap();
    assert_eq!(cfg.name, "sphere");
    let fields: Vec<&str> = log.iter().map(|l| l.split(' ').nth(1).unwrap()).collect();
    for f in [
        "surface.params",
        "scene.name",
        "scene.samples",
        "scene.w_max",
        "scene.striction_cap",
        "tolerances.closure",
        "tolerances.vertex",
        "tolerances.audit",
        "tolerances.regularity",
        "outputs.artifacts",
        "curve[0].name",
        "curve[0].closed",
        "curve[0].interval",
    ] {
        assert!(fields.contains(&f), "{f} missing from {log:?}");
    }
}

#[test]
fn validation_names_the_field() {
    let field = |text: &str| match parse_scene(text.as_bytes()) {
        Err(SceneError::Validation { field, .. }) => field,
        other => panic!("{other:?}"),
    };
    let base = "[surface]\nkind = torus\n";
    assert_eq!(field(""), "surface.kind");
    assert_eq!(field(base), "curve");
    assert_eq!(field("[surface]\nkind = torus\nparams = 1, 2\n[curve]\nfamily = latitude\nparams = 1\n"), "surface");
    assert_eq!(field(&format!("{base}[curve]\nfamily = torus-unknot\nparams = 3, 1\n")), "curve[0].params");
    assert_eq!(field(&format!("{base}[curve]\nfamily = spline\nknots = 0 0; 1 1\n")), "curve[0].knots");
    assert_eq!(field(&format!("{base}[curve]\nfamily = latitude\nparams = 1\ninterval = 1, 0\n")), "curve[0].interval");
    assert_eq!(
        field(&format!("{base}[curve]\nname = a\nfamily = latitude\nparams = 1\n[curve]\nname = a\nfamily = latitude\nparams = 2\n")),
        "curve[1].name"
    );
    assert_eq!(field(&format!("{base}[scene]\nw_max = -1\n[curve]\nfamily = latitude\nparams = 1\n")), "scene.w_max");
    assert_eq!(field(&format!("{base}[tolerances]\naudit = 0\n[curve]\nfamily = latitude\nparams = 1\n")), "tolerances.audit");
}

#[test]
fn parse_errors_carry_the_line() {
    let line = |text: &str| match parse_scene(text.as_bytes()) {
        Err(SceneError::Parse { line, .. }) => line,
        other => panic!("{other:?}"),
    };
    assert_eq!(line("# comment\n\n[surface\n"), 3);
    assert_eq!(line("[surface]\nparams = 1, x\n"), 2);
    assert_eq!(line("[scene]\nsamples = many\n"), 2);
    assert_eq!(line("[curve]\nclosed = yes\n"), 2);
    assert_eq!(line("[outputs]\nartifacts = obj, png\n"), 2);
    assert_eq!(line("[scene]\n[scene]\n"), 2);
    assert!(matches!(parse_scene(b"[scene]\n\xff\n"), Err(SceneError::Parse { line: 2, .. })));
}

/// The fuzz seeds must all be valid scenes that survive a round trip.
#[test]
fn fuzz_seeds_round_trip() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut seen = 0;
    for target in std::fs::read_dir(root).unwrap() {
        for seed in std::fs::read_dir(target.unwrap().path()).unwrap() {
            let path = seed.unwrap().path();
            let cfg = parse_scene(&std::fs::read(&path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(parse_scene(serialize_scene(&cfg).as_bytes()).unwrap(), cfg);
            seen += 1;
        }
    }
    assert!(seen >= 8);
}
