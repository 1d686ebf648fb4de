use s5kit::suite::{run_criterion, TITLES};

const SEED: u64 = 0;

fn criterion(id: usize) {
    let r = run_criterion(id, SEED);
    println!(
        "criterion {id}: {} - {} ({} cases, {} failures)",
        if r.passed { "PASS" } else { "FAIL" },
        r.title,
        r.cases,
        r.failure_count
    );
    for note in &r.notes {
        println!("  note: {note}");
    }
    for f in &r.failures {
        println!("  failure: {f}");
    }
    assert_eq!(r.title, TITLES[id - 1]);
    assert!(r.passed, "criterion {id} failed: {:?}", r.failures);
}

#[test]
fn criterion_1_surjection_counts() {
    criterion(1);
}

#[test]
fn criterion_2_colimit_universal_properties() {
    criterion(2);
}

#[test]
fn criterion_3_duality() {
    criterion(3);
}

#[test]
fn criterion_4_cross_oracle_coequalizers() {
    criterion(4);
}

#[test]
fn criterion_5_counting_law_and_representability() {
    criterion(5);
}

#[test]
fn criterion_6_lifting_conditions_and_kan() {
    criterion(6);
}

#[test]
fn criterion_7_t1_t2_lex_agree() {
    criterion(7);
}

#[test]
fn criterion_8_classification_round_trip() {
    criterion(8);
}

#[test]
fn criterion_9_hom_correspondence() {
    criterion(9);
}
