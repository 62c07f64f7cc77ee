use fsplit_core::algebra::FiniteAlgebra;
use fsplit_core::witt::{WittRing, WittVector};

fn v(c: &[u32]) -> WittVector<Vec<u32>> {
    WittVector {
        coords: c.iter().map(|&x| vec![x]).collect(),
    }
}

// W_n(F_p) ≅ Z/p^n: integer of a vector recovered from its digit expansion
fn to_int(w: &WittRing<'_, FiniteAlgebra>, x: &WittVector<Vec<u32>>) -> u64 {
    let p = w.p() as u64;
    w.digits(x)
        .iter()
        .enumerate()
        .map(|(j, lv)| lv.iter().map(|(_, c)| *c as u64).sum::<u64>() * p.pow(j as u32))
        .sum()
}

#[test]
fn w2_f2_examples() {
    let k = FiniteAlgebra::prime_field(2).unwrap();
    let w = WittRing::new(&k, 2).unwrap();
    assert_eq!(w.add(&v(&[1, 0]), &v(&[1, 0])).unwrap(), v(&[0, 1]));
    assert_eq!(w.mul(&v(&[1, 0]), &v(&[1, 1])).unwrap(), v(&[1, 1]));
    let v1 = w.verschiebung(&w.one());
    assert_eq!(v1, v(&[0, 1]));
    assert_eq!(w.mul(&v1, &v1).unwrap(), v(&[0, 0]));
}

#[test]
fn witt_of_prime_field_is_cyclic() {
    for (p, n) in [(2u32, 3usize), (3, 3), (5, 2)] {
        let k = FiniteAlgebra::prime_field(p).unwrap();
        let w = WittRing::new(&k, n).unwrap();
        let modulus = (p as u64).pow(n as u32);
        let elems = w.elements_from(&k.elements().collect::<Vec<_>>(), n);
        for x in &elems {
            for y in &elems {
                let (a, b) = (to_int(&w, x), to_int(&w, y));
                assert_eq!(to_int(&w, &w.add(x, y).unwrap()), (a + b) % modulus);
                assert_eq!(to_int(&w, &w.mul(x, y).unwrap()), (a * b) % modulus);
                assert_eq!(to_int(&w, &w.sub(x, y).unwrap()), (a + modulus - b) % modulus);
            }
        }
        // additive order of 1 is p^n
        let one = w.one();
        let mut acc = one.clone();
        let mut order = 1;
        while !w.is_zero(&acc) {
            acc = w.add(&acc, &one).unwrap();
            order += 1;
        }
        assert_eq!(order, modulus);
    }
}

#[test]
fn digits_round_trip() {
    let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], 3).unwrap();
    let w = WittRing::new(&a, 3).unwrap();
    let elems: Vec<_> = a.elements().collect();
    for x in w.elements_from(&elems, 3).iter().step_by(37) {
        let d = w.digits(x);
        assert_eq!(&w.from_digits(&d, 3), x);
    }
}

#[test]
fn teichmuller_square_of_nilpotent() {
    let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], 2).unwrap();
    let w = WittRing::new(&a, 2).unwrap();
    let t = w.teichmuller(&a.generators()[0]);
    assert!(w.is_zero(&w.mul(&t, &t).unwrap()));
}

#[test]
fn length_mismatch_is_an_error() {
    let k = FiniteAlgebra::prime_field(2).unwrap();
    let w = WittRing::new(&k, 3).unwrap();
    assert!(w.add(&v(&[1, 0]), &v(&[1, 0, 0])).is_err());
    assert!(w.v_pow(&v(&[1, 0]), 3).is_err());
}
