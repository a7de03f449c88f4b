//! Coincidence similarity between a few small vectors, next to the Euclidean
//! distance, and the np-set view that makes signed entries comparable.
//!
//! ```bash
//! cargo run -p coinknn --example coincidence_basics
//! ```

use coinknn::{coincidence, dissimilarity, euclidean, npset_decompose, FeatureVector};

fn fv(values: &[f64]) -> FeatureVector {
    FeatureVector::new(values.to_vec()).expect("finite values")
}

fn main() -> coinknn::Result<()> {
    let pairs = [
        (vec![2.0, 2.0], vec![1.0, 1.0]),
        (vec![2.0, 2.0], vec![2.0, 2.0]),
        (vec![4.0, 1.0], vec![1.0, 4.0]),
        (vec![1.0, -2.0, 0.5], vec![1.0, 2.0, 0.5]),
        (vec![100.0], vec![101.0]),
        (vec![1.0], vec![2.0]),
    ];

    println!(
        "{:>18} {:>18} {:>8} {:>8} {:>9}",
        "u", "v", "C(1,1)", "1-C(3,1)", "euclid"
    );
    for (u, v) in &pairs {
        let (u, v) = (fv(u), fv(v));
        println!(
            "{:>18} {:>18} {:>8.4} {:>8.4} {:>9.4}",
            format!("{:?}", u.as_slice()),
            format!("{:?}", v.as_slice()),
            coincidence(&u, &v, 1.0, 1.0)?,
            dissimilarity(&u, &v, 3.0, 1.0)?,
            euclidean(&u, &v)?,
        );
    }

    // The last two rows differ by one unit in Euclidean terms but not at
    // all in relative terms; the coincidence index only sees the ratio.
    let a = fv(&[3.0, 5.0]);
    for scale in [1.0, 10.0, 1000.0] {
        let (u, v) = (a.scaled(scale)?, fv(&[4.0, 5.0]).scaled(scale)?);
        println!(
            "scale {scale:>6}: C = {:.6}, euclidean = {:.3}",
            coincidence(&u, &v, 3.0, 1.0)?,
            euclidean(&u, &v)?
        );
    }

    let np = npset_decompose(&fv(&[1.5, -2.0, 0.0]));
    println!("np-set of [1.5, -2, 0]: {np:?} (magnitude {})", np.magnitude());
    Ok(())
}
