use hnkit::acceptance::run;

fn check(id: usize) {
    let out = run(id);
    println!("{}", out.line());
    assert!(out.passed, "{}", out.line());
}

#[test]
fn criterion_01_constant_i() {
    check(1);
}

#[test]
fn criterion_02_closed_forms() {
    check(2);
}

#[test]
fn criterion_03_kernel_identity() {
    check(3);
}

#[test]
fn criterion_04_condition_discrimination() {
    check(4);
}

#[test]
fn criterion_05_form_equivalence() {
    check(5);
}

#[test]
fn criterion_06_recovery() {
    check(6);
}

#[test]
fn criterion_07_stieltjes() {
    check(7);
}

#[test]
fn criterion_08_symmetry() {
    check(8);
}

#[test]
fn criterion_09_independence() {
    check(9);
}

#[test]
fn criterion_10_positivity() {
    check(10);
}
