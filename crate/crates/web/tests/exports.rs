use serde_json::{json, Value};
use sheafbn_web::{bn_check_impl, cohomology_impl, e2_page_impl, fixture_json_impl};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn cohomology_of_pasted_and_named_complexes() {
    let pasted = fixture_json_impl("rp2").unwrap();
    let a = parse(cohomology_impl(&pasted, "Z").unwrap());
    assert_eq!(a, parse(cohomology_impl("rp2", "Z").unwrap()));
    assert_eq!(a["cohomology"], json!(["Z", "0", "Z/2"]));
    assert_eq!(a["homology"], json!(["Z", "Z/2", "0"]));
    assert_eq!(a["euler_characteristic"], json!(1));
}

#[test]
fn reports() {
    let r = parse(bn_check_impl("rp2", "Z", 4).unwrap());
    assert_eq!(r["consistent"], json!(true));
    let page = parse(e2_page_impl("rp2", "Z/2", 4, 2).unwrap());
    assert_eq!(page["checks"][3]["differentials_nonzero"], json!(true));
}

#[test]
fn errors_are_messages() {
    assert!(cohomology_impl("klein", "Z").unwrap_err().contains("klein"));
    assert!(cohomology_impl("{\"vertices\": 2}", "Z").is_err());
    assert!(e2_page_impl("rp2", "Z", 1, 1).unwrap_err().contains("field"));
    assert!(cohomology_impl("circle", "Z/6").is_err());
}
