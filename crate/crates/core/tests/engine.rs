use std::collections::HashMap;
use std::path::PathBuf;

use fontpair_core::config::EngineConfig;
use fontpair_core::embedder::{EmbedderError, FixtureEmbedder, PromptEmbedder};
use fontpair_core::embedding::load_embeddings;
use fontpair_core::glyph::load_strokes;
use fontpair_core::{load_catalog, Blocklist, Engine, Engine64, EngineError, EngineSettings, RecommendResponse};

const WEDDING: &str = "A design for wedding invitation";

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/wedding")
}

fn engine() -> Engine64 {
    let cfg = EngineConfig::load(fixture_dir().join("fontpair.toml")).unwrap();
    Engine::from_config(&cfg).unwrap()
}

struct Down;

impl PromptEmbedder<f64> for Down {
    fn embed(&self, _: &str) -> Result<Vec<f64>, EmbedderError> {
        Err(EmbedderError::Unavailable("connection refused".into()))
    }
}

fn engine_with(embedder: Box<dyn PromptEmbedder<f64>>) -> Engine64 {
    let dir = fixture_dir();
    Engine::new(
        load_catalog(dir.join("catalog.json")).unwrap(),
        load_embeddings(dir.join("embeddings.jsonl")).unwrap(),
        load_strokes(dir.join("strokes.jsonl")).unwrap(),
        embedder,
        Blocklist::new(["party"]),
        EngineSettings::default(),
    )
}

#[test]
fn wedding_prompt_pairs() {
    let pairs = engine().recommend(WEDDING, 4, None).unwrap();
    let got: Vec<(&str, &str)> = pairs
        .iter()
        .map(|p| (p.heading_font_id.as_str(), p.subheading_font_id.as_str()))
        .collect();
    assert_eq!(got, [("E", "N"), ("A", "H"), ("C", "B"), ("G", "K")]);

    let cats: Vec<&str> = pairs[0].categories.iter().map(|c| c.category_id.as_str()).collect();
    assert_eq!(cats, ["wedding", "cursive", "elegant"]);
    assert_eq!(pairs[0].heading_combo.len(), 3);
    assert!((pairs[0].balanced_score - 0.2735753180323933).abs() < 1e-9);
    assert!((pairs[3].balanced_score - 0.24436627865255697).abs() < 1e-9);
}

#[test]
fn pairs_respect_stroke_and_identity() {
    let e = engine();
    for prompt in [WEDDING, "Birthday party for kids", "Launch page for a developer tool"] {
        for seed in [None, Some(1), Some(99)] {
            for p in e.recommend(prompt, 10, seed).unwrap() {
                let h = e.strokes()[&p.heading_font_id].stroke_width;
                let s = e.strokes()[&p.subheading_font_id].stroke_width;
                assert!(s <= 0.8 * h);
                assert_ne!(p.heading_font_id, p.subheading_font_id);
                assert!(p.balanced_score >= 0.0);
            }
        }
    }
}

#[test]
fn fewer_pairs_than_groups_and_skipped_headings() {
    let e = engine();
    // four groups, so asking for more never repeats one
    assert_eq!(e.recommend(WEDDING, 10, None).unwrap().len(), 4);
    assert_eq!(e.recommend(WEDDING, 1, None).unwrap().len(), 1);
    // H is the thinnest font in its group and has nothing thinner to pair with
    let kids: Vec<String> = e
        .recommend("Birthday party for kids", 4, None)
        .unwrap()
        .into_iter()
        .map(|p| p.heading_font_id)
        .collect();
    assert_eq!(kids, ["M", "I", "A"]);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let e = engine();
    let run = |seed| RecommendResponse::from_pairs(&e.recommend(WEDDING, 4, Some(seed)).unwrap()).to_json();
    for seed in [0, 7, 12345] {
        assert_eq!(run(seed), run(seed));
        assert_eq!(run(seed), RecommendResponse::from_pairs(&engine().recommend(WEDDING, 4, Some(seed)).unwrap()).to_json());
    }
}

#[test]
fn request_errors() {
    let e = engine();
    assert!(matches!(e.recommend("   ", 1, None), Err(EngineError::EmptyPrompt)));
    assert!(matches!(e.recommend(WEDDING, 0, None), Err(EngineError::InvalidRequest(_))));
    let blocked = e.recommend("EXPLICIT wedding card", 1, None).unwrap_err();
    assert_eq!(blocked.code(), "blocked_prompt");
    // the fixture embedder only knows its own prompts
    assert_eq!(e.recommend("unknown prompt", 1, None).unwrap_err().code(), "embedder_unavailable");

    let down = engine_with(Box::new(Down));
    assert_eq!(down.recommend(WEDDING, 1, None).unwrap_err().code(), "embedder_unavailable");
    let party = engine_with(Box::new(Down));
    assert!(matches!(party.recommend("summer party", 1, None), Err(EngineError::BlockedPrompt(t)) if t == "party"));
}

#[test]
fn no_fonts_for_categories() {
    let dir = fixture_dir();
    let mut catalog = load_catalog(dir.join("catalog.json")).unwrap();
    for f in &mut catalog.fonts {
        f.tags.retain(|t| t == "modern");
    }
    catalog.fonts.retain(|f| !f.tags.is_empty());
    let table: HashMap<String, Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(dir.join("prompts.json")).unwrap()).unwrap();
    let e: Engine64 = Engine::new(
        catalog,
        load_embeddings(dir.join("embeddings.jsonl")).unwrap(),
        load_strokes(dir.join("strokes.jsonl")).unwrap(),
        Box::new(FixtureEmbedder::new(table).unwrap()),
        Blocklist::default(),
        EngineSettings { k_categories: 2, ..EngineSettings::default() },
    );
    let err = e.recommend(WEDDING, 2, None).unwrap_err();
    assert!(matches!(&err, EngineError::NoFontsForCategories(c) if c == &["wedding", "cursive"]));
    assert_eq!(err.code(), "no_fonts_for_categories");
}

#[test]
fn two_font_catalog_gives_one_pair() {
    let dir = fixture_dir();
    let mut catalog = load_catalog(dir.join("catalog.json")).unwrap();
    catalog.fonts.retain(|f| f.id == "E" || f.id == "H");
    let table: HashMap<String, Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(dir.join("prompts.json")).unwrap()).unwrap();
    let e: Engine64 = Engine::new(
        catalog,
        load_embeddings(dir.join("embeddings.jsonl")).unwrap(),
        load_strokes(dir.join("strokes.jsonl")).unwrap(),
        Box::new(FixtureEmbedder::new(table).unwrap()),
        Blocklist::default(),
        EngineSettings::default(),
    );
    let pairs = e.recommend(WEDDING, 1, None).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!((pairs[0].heading_font_id.as_str(), pairs[0].subheading_font_id.as_str()), ("E", "H"));
    // a lone candidate skips gating and normalizes to 0.5 on both sides
    assert!((pairs[0].balanced_score - 0.25).abs() < 1e-12);
}

#[test]
fn heading_family_exclusion() {
    let dir = fixture_dir();
    let mut catalog = load_catalog(dir.join("catalog.json")).unwrap();
    // put N, the usual partner of E, in E's family
    catalog.fonts.iter_mut().find(|f| f.id == "N").unwrap().family = "Everly Script".into();
    let table: HashMap<String, Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(dir.join("prompts.json")).unwrap()).unwrap();
    let mut settings = EngineSettings::default();
    settings.pairing.exclude_heading_family = true;
    let e: Engine64 = Engine::new(
        catalog,
        load_embeddings(dir.join("embeddings.jsonl")).unwrap(),
        load_strokes(dir.join("strokes.jsonl")).unwrap(),
        Box::new(FixtureEmbedder::new(table).unwrap()),
        Blocklist::default(),
        settings,
    );
    let first = &e.recommend(WEDDING, 1, None).unwrap()[0];
    assert_eq!(first.heading_font_id, "E");
    assert_ne!(first.subheading_font_id, "N");
    assert!(e.pair_table("E", 20).unwrap().table.iter().all(|c| c.candidate_id != "N"));
}

#[test]
fn pair_table_lists_every_survivor() {
    let e = engine();
    let out = e.pair_table("E", 1).unwrap();
    assert_eq!(out.band, (30.0, 70.0));
    // three positive scores need a wider band
    assert_eq!(e.pair_table("E", 3).unwrap().band, (20.0, 80.0));
    assert_eq!(out.picks[0].0, "N");
    let ids: Vec<&str> = out.table.iter().map(|c| c.candidate_id.as_str()).collect();
    // everything at most 6.4 wide
    let mut want = vec!["A", "B", "H", "I", "J", "K", "L", "M", "N", "O"];
    let mut sorted = ids.clone();
    sorted.sort();
    want.sort();
    assert_eq!(sorted, want);
    assert!(matches!(e.pair_table("ZZ", 1), Err(EngineError::UnknownFont(_))));
}

#[test]
fn f32_engine_agrees() {
    let cfg = EngineConfig::load(fixture_dir().join("fontpair.toml")).unwrap();
    let e: Engine<f32> = Engine::from_config(&cfg).unwrap();
    let heads: Vec<(String, String)> = e
        .recommend(WEDDING, 4, None)
        .unwrap()
        .into_iter()
        .map(|p| (p.heading_font_id, p.subheading_font_id))
        .collect();
    let want: Vec<(String, String)> = [("E", "N"), ("A", "H"), ("C", "B"), ("G", "K")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(heads, want);
}

#[test]
fn init_errors_name_the_path() {
    let text = std::fs::read_to_string(fixture_dir().join("fontpair.toml"))
        .unwrap()
        .replace("catalog.json", "/nonexistent/catalog.json");
    let cfg = EngineConfig::from_toml_str(&text, Some(&fixture_dir())).unwrap();
    let err = Engine::<f64>::from_config(&cfg).err().unwrap();
    assert!(err.to_string().contains("/nonexistent/catalog.json"), "{err}");
}
