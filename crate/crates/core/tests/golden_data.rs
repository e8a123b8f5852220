use cluster_slices::algebra::build_algebra;
use cluster_slices::cluster::ClusterCategory;
use cluster_slices::derived::build_model;
use cluster_slices::golden::{self, sha256_hex};
use cluster_slices::io::{self, Artifact, ArtifactKind};
use cluster_slices::quiver::Quiver;
use cluster_slices::translation::RawTranslationQuiver;
use cluster_slices::verify;

const CHECKSUMS: [(&str, &str); 4] = [
    ("rank5_window.json", "003d5c22a4dfb8e54c52a0e662c784049e91994516750a36f12f05d8dacb1f52"),
    ("d4_cyclic_window.json", "162ef42767aea921cc0adf67cc1f623fb5c3a2aaf006d8bea05246ff75530481"),
    ("d4_cyclic_slices.json", "e00ed31da6a7935a5531977b4b32c5beaa28237b93d1f36dc93872a2027d0841"),
    ("rank3_deleted_window.json", "3796e098af90898e2b563ac526b6a0293cad793316191fec90a2869f4f665b2b"),
];

#[test]
fn transcriptions_are_unchanged() {
    for ((name, text), (pinned_name, sum)) in golden::FILES.iter().zip(CHECKSUMS) {
        assert_eq!(*name, pinned_name);
        assert_eq!(sha256_hex(text), sum, "{name} changed");
    }
}

#[test]
fn rank_five_window_round_trips_byte_identically() {
    let g = golden::rank_five_window().unwrap();
    let text = Artifact::TranslationQuiver(g).to_text().unwrap();
    let again = Artifact::from_str(&text, ArtifactKind::TranslationQuiver).unwrap().to_text().unwrap();
    assert_eq!(text, again);
}

#[test]
fn corrupted_translation_names_the_point() {
    let mut raw: RawTranslationQuiver = io::parse(golden::RANK_FIVE_WINDOW).unwrap();
    // send tau(43) outside its orbit
    let k = raw.tau.iter().position(|(z, _)| z == "43").unwrap();
    raw.tau[k].1 = "432".into();
    let text = serde_json::to_string(&raw).unwrap();
    let rep = verify::windows_satisfy_axioms(&[("corrupt".into(), text)]);
    assert_eq!(rep.failures, 1);
    let msg = rep.counterexample.unwrap()["error"].as_str().unwrap().to_string();
    assert!(msg.contains("43"), "{msg}");
}

#[test]
fn mesh_violation_is_reported_at_the_point() {
    let mut raw: RawTranslationQuiver = io::parse(golden::RANK_FIVE_WINDOW).unwrap();
    raw.arrows.retain(|(s, t)| !(s == "432" && t == "43"));
    let text = serde_json::to_string(&raw).unwrap();
    let err = Artifact::from_str(&text, ArtifactKind::TranslationQuiver).unwrap_err().to_string();
    assert!(err.contains("mesh axiom fails at point 43"), "{err}");
}

#[test]
fn d4_algebra_save_load_keeps_structure_constants() {
    let m = build_model(&Quiver::d_type(4)).unwrap();
    let c = ClusterCategory::new(&m);
    let t = verify::cyclic_d4_tilting(&m).unwrap().remove(0);
    let rec = build_algebra(&c, &t).unwrap().record();
    let before = sha256_hex(&serde_json::to_string(&rec.structure).unwrap());
    let text = Artifact::Algebra(Box::new(rec)).to_text().unwrap();
    let Artifact::Algebra(back) = Artifact::from_str(&text, ArtifactKind::Algebra).unwrap() else { panic!() };
    assert_eq!(sha256_hex(&serde_json::to_string(&back.structure).unwrap()), before);
    assert_eq!(Artifact::Algebra(back).to_text().unwrap(), text);
}

#[test]
fn tampered_algebra_is_rejected() {
    let m = build_model(&Quiver::linear_a(3)).unwrap();
    let c = ClusterCategory::new(&m);
    let t = c.enumerate_tilting().unwrap().remove(0);
    let mut rec = build_algebra(&c, &t).unwrap().record();
    rec.structure.pop();
    let text = Artifact::Algebra(Box::new(rec)).to_text().unwrap();
    let err = Artifact::from_str(&text, ArtifactKind::Algebra).unwrap_err();
    assert!(err.to_string().contains("/structure"), "{err}");
}

#[test]
fn verify_all_passes_on_shipped_data() {
    let rep = verify::run_suite(verify::Suite::All, &verify::VerifyOptions::default());
    for p in &rep.properties {
        assert!(p.passed(), "{}: {:?}", p.name, p.counterexample);
    }
    assert!(rep.passed);
}

#[test]
fn repair_logs_growing_distance_on_d4() {
    let rep = verify::repair_everywhere(&[Quiver::d_type(4)]);
    assert!(rep.passed());
    assert!(!rep.log.is_empty());
    for entry in &rep.log {
        let d: Vec<u64> = entry["d"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        assert!(d.windows(2).all(|w| w[0] < w[1]), "{entry}");
    }
}
