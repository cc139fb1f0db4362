use std::io::Cursor;
use std::path::PathBuf;

use tilekit::ingest::{
    export_performances, load_performances, parse_performances, parse_reference_scores,
    IngestConfig, ValueMode,
};
use tilekit::Error;

const PRIOR: f64 = 0.124227;

fn sm74() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sm74.csv")
}

fn parse(text: &str, cfg: &IngestConfig) -> tilekit::Result<tilekit::ingest::LoadedTable> {
    parse_performances(Cursor::new(text.as_bytes().to_vec()), "test.csv", cfg)
}

fn cfg() -> IngestConfig {
    IngestConfig::new("test.csv")
}

#[test]
fn repair_rebuilds_fn_and_tn() {
    let text = "entity,group,tn,fp,fn,tp\nANN,cityscapes,0.8390,0.0368,0.0368,0.1064\n";
    let t = parse(text, &cfg().with_repair_prior(Some(PRIOR))).unwrap();
    let p = t.entities.records()[0].performance;
    assert_eq!(t.entities.records()[0].id, "ANN (cityscapes)");
    assert!((p.tn() - 0.838973).abs() < 1e-12);
    assert_eq!(p.fp(), 0.0368);
    assert!((p.fn_() - 0.017827).abs() < 1e-12);
    assert_eq!(p.tp(), 0.1064);
    let row = &t.report.rows[0];
    assert!((row.tn_discrepancy.unwrap() - 2.7e-5).abs() < 1e-9);
    assert!((row.fn_discrepancy.unwrap() - 0.018973).abs() < 1e-9);
    assert!(row.sum_flagged);
    assert_eq!(t.report.flagged, ["ANN (cityscapes)"]);
}

#[test]
fn counts_are_normalized() {
    let text = "entity,tn,fp,fn,tp\nm,9,1,2,8\n";
    let t = parse(text, &cfg()).unwrap();
    let p = t.entities.records()[0].performance;
    assert_eq!(p.to_array(), [0.45, 0.05, 0.10, 0.40]);
    assert_eq!(t.report.rows[0].read_as, "counts");
    assert!(t.entities.records()[0].group.is_none());
}

#[test]
fn explicit_modes() {
    let text = "entity,tn,fp,fn,tp\nm,0.4,0.1,0.1,0.4\n";
    let t = parse(text, &cfg().with_mode(ValueMode::Counts)).unwrap();
    assert_eq!(t.report.rows[0].read_as, "counts");
    let t = parse(text, &cfg().with_mode(ValueMode::Probabilities)).unwrap();
    assert_eq!(t.report.rows[0].read_as, "probabilities");
}

#[test]
fn header_is_case_insensitive_and_fields_trimmed() {
    let text = "Entity, Group ,TN,FP,FN,TP\n  m , g , 9, 1, 2, 8\n";
    let t = parse(text, &cfg()).unwrap();
    assert_eq!(t.entities.records()[0].id, "m (g)");
}

#[test]
fn duplicate_entities_fail() {
    let text = "entity,group,tn,fp,fn,tp\nm,g,9,1,2,8\nm,g,8,2,2,8\n";
    assert!(matches!(parse(text, &cfg()), Err(Error::DuplicateEntity(id)) if id == "m (g)"));
    // Same name in different groups is fine.
    let text = "entity,group,tn,fp,fn,tp\nm,g,9,1,2,8\nm,h,8,2,2,8\n";
    assert_eq!(parse(text, &cfg()).unwrap().entities.len(), 2);
}

#[test]
fn bad_rows_are_rejected_with_reasons() {
    let text = "entity,tn,fp,fn,tp\nok,9,1,2,8\nneg,9,-1,2,8\n";
    let t = parse(text, &cfg()).unwrap();
    assert_eq!(t.entities.len(), 1);
    assert_eq!(t.report.rejected.len(), 1);
    assert_eq!(t.report.rejected[0].id, "neg");
    assert_eq!(t.report.rejected[0].line, 3);
    assert!(!t.report.is_clean());

    // tp above the prior leaves a negative fn after repair.
    let text = "entity,tn,fp,fn,tp\nx,0.5,0.1,0.1,0.3\ny,0.7,0.1,0.1,0.1\n";
    let t = parse(text, &cfg().with_repair_prior(Some(0.2))).unwrap();
    assert_eq!(t.entities.len(), 1);
    assert_eq!(t.report.rejected[0].id, "x");

    // A table without a usable row is an error.
    assert!(matches!(
        parse("entity,tn,fp,fn,tp\nneg,9,-1,2,8\n", &cfg()),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn unparsable_numbers_report_the_location() {
    let text = "entity,tn,fp,fn,tp\nm,9,x,2,8\n";
    match parse(text, &cfg()) {
        Err(Error::Parse { line, column, .. }) => {
            assert_eq!(line, 2);
            assert_eq!(column, "fp");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_columns_fail() {
    assert!(matches!(
        parse("entity,tn,fp,tp\nm,1,2,3\n", &cfg()),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn bad_configuration_fails() {
    assert!(matches!(
        cfg().with_repair_prior(Some(1.5)).validate(),
        Err(Error::Config(_))
    ));
    let mut c = cfg();
    c.tolerance = 0.0;
    assert!(matches!(c.validate(), Err(Error::Config(_))));
}

#[test]
fn sm_table_loads_74_entities() {
    let t = load_performances(&IngestConfig::new(sm74()).with_repair_prior(Some(PRIOR))).unwrap();
    assert_eq!(t.entities.len(), 74);
    assert!(t.report.is_clean());
    assert_eq!(t.report.entity_count, 74);
    // The given tn column agrees with the repaired one to the table's
    // printed precision.
    assert!(t.report.max_tn_discrepancy.unwrap() < 1e-4);
    assert!((t.report.common_prior.unwrap() - PRIOR).abs() < 1e-9);
}

#[test]
fn export_then_ingest_is_lossless() {
    let t = load_performances(&IngestConfig::new(sm74()).with_repair_prior(Some(PRIOR))).unwrap();
    let mut csv = Vec::new();
    export_performances(&t.entities, &mut csv).unwrap();
    let again = parse(
        std::str::from_utf8(&csv).unwrap(),
        &cfg().with_mode(ValueMode::Probabilities),
    )
    .unwrap();
    assert_eq!(again.entities, t.entities);
    let mut csv2 = Vec::new();
    export_performances(&again.entities, &mut csv2).unwrap();
    assert_eq!(csv, csv2);
}

#[test]
fn reference_scores_match_ids() {
    let t = parse(
        "entity,group,tn,fp,fn,tp\na,g,9,1,2,8\nb,,8,2,2,8\n",
        &cfg(),
    )
    .unwrap();
    let r = parse_reference_scores(
        Cursor::new("entity,score\na (g),0.7\nb,0.6\nzzz,0.1\n"),
        "ref.csv",
        &t.entities,
    )
    .unwrap();
    assert_eq!(r.scores.len(), 2);
    assert_eq!(r.scores.get("a (g)"), Some(0.7));
    assert_eq!(r.unknown, ["zzz"]);
    assert_eq!(r.warnings().len(), 1);
    // Header is optional.
    let r = parse_reference_scores(Cursor::new("b,0.25\n"), "ref.csv", &t.entities).unwrap();
    assert_eq!(r.scores.get("b"), Some(0.25));
    assert!(matches!(
        parse_reference_scores(Cursor::new("zzz,0.1\n"), "ref.csv", &t.entities),
        Err(Error::NoMatchingEntities)
    ));
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_performances(&IngestConfig::new("/nonexistent/table.csv")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(err.to_string().contains("/nonexistent/table.csv"));
}
