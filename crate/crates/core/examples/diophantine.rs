//! Smith normal form, integer solutions, and the constant-image test.
//!
//! ```bash
//! cargo run --example diophantine
//! ```

use num_bigint::BigInt;

use cr_preimage::linalg::{
    clear_denominators, has_constant_image_property, smith_normal_form, solve_constant_image, solve_linear_diophantine,
    IntMatrix, RatMatrix,
};

fn show(name: &str, a: &RatMatrix) {
    let (d, m) = clear_denominators(a);
    let x = solve_constant_image(a, &BigInt::from(1));
    println!(
        "{name}: d = {d}, d·A = {:?}, constant image: {}, x for a = 1: {:?}",
        m.to_rows(),
        has_constant_image_property(a),
        x.map(|x| x.iter().map(ToString::to_string).collect::<Vec<_>>())
    );
}

fn main() -> cr_preimage::Result<()> {
    let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!("diagonal of the Smith form: {:?}", snf.diagonal());
    println!("decomposition checks out: {}", snf.check(&m));

    let b = [BigInt::from(10), BigInt::from(12), BigInt::from(-10)];
    match solve_linear_diophantine(&m, &b)? {
        Some(x) => println!("M x = {:?} has the integer solution {:?}", b, x),
        None => println!("M x = {b:?} has no integer solution"),
    }

    show("[[1/2, 1/2]]", &RatMatrix::parse(&[&["1/2", "1/2"]])?);
    show("[[1, 1], [1, -1]]", &RatMatrix::from_i64(&[&[1, 1], &[1, -1]]));
    show("[[1, 0], [0, 1], [1, 1]]", &RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]));
    Ok(())
}
