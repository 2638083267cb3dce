use glhom::app::{run_suite, SuiteParams, SuiteReport};
use glhom::exact::rat;
use glhom::qseries::{
    f_series, p_poly, poly_from_json, poly_to_json, rational_from_json, rational_to_json, series_from_json,
    series_to_json, PolyJson, SeriesJson,
};
use glhom::{AbelianPGroup, Exec};

#[test]
fn series_roundtrip() {
    let s = f_series(&rat(-7, 3), 12).unwrap();
    let text = serde_json::to_string(&series_to_json(&s)).unwrap();
    let back: SeriesJson = serde_json::from_str(&text).unwrap();
    assert_eq!(series_from_json(&back).unwrap(), s);
}

#[test]
fn poly_roundtrip() {
    let p = p_poly(7).unwrap();
    let text = serde_json::to_string(&poly_to_json(&p)).unwrap();
    let back: PolyJson = serde_json::from_str(&text).unwrap();
    assert_eq!(poly_from_json(&back).unwrap(), p);
}

#[test]
fn rational_roundtrip_and_rejects_bad_input() {
    let x = rat(-123456789, 1000);
    assert_eq!(rational_from_json(&rational_to_json(&x)).unwrap(), x);
    let bad = glhom::qseries::RationalJson { num: "1".into(), den: "0".into() };
    assert!(rational_from_json(&bad).is_err());
}

#[test]
fn suite_report_roundtrip() {
    let r = run_suite("harmonic", &SuiteParams::default()).unwrap();
    let back: SuiteReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn exec_modes_agree() {
    for name in ["lambda", "table1", "case2"] {
        let par = run_suite(name, &SuiteParams { exec: Exec::Parallel, ..Default::default() }).unwrap();
        let seq = run_suite(name, &SuiteParams { exec: Exec::Sequential, ..Default::default() }).unwrap();
        assert_eq!(par, seq, "{name}");
    }
    let g = AbelianPGroup::from_factors(2, &[1, 1]).unwrap();
    let f = glhom::oracle::ff_make(3, 1).unwrap();
    assert_eq!(
        glhom::oracle::hom_count_with(&g, &f, 2, Exec::Parallel).unwrap(),
        glhom::oracle::hom_count_with(&g, &f, 2, Exec::Sequential).unwrap()
    );
}
