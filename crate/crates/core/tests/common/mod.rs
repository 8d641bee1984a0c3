#![allow(dead_code)]

use optframe::linalg::eig_hermitian;
use optframe::schur_horn::realize_frame;
use optframe::{ComplexMatrix, Frame, FrameJson, HermitianPSD, SpectrumVec, C64};
use rand::rngs::StdRng;
use rand::Rng;

pub fn data_path(name: &str) -> String {
    format!("{}/data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub fn load_frame(name: &str) -> Frame {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture exists");
    let json: FrameJson = serde_json::from_str(&text).expect("fixture parses");
    json.to_frame().expect("fixture is a frame")
}

pub fn spec(v: &[f64]) -> SpectrumVec {
    SpectrumVec::new(v.to_vec()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn gaussian(rng: &mut StdRng) -> f64 {
    // Box-Muller
    let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_complex_matrix(rows: usize, cols: usize, rng: &mut StdRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(rng), gaussian(rng)))
}

pub fn random_real_matrix(rows: usize, cols: usize, rng: &mut StdRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(rng), 0.0))
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut StdRng) -> ComplexMatrix {
    loop {
        let g = random_complex_matrix(n, n, rng);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let dot: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(q) {
                        *x -= dot * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        if ok {
            return ComplexMatrix::from_columns(n, &cols).unwrap();
        }
    }
}

/// `V·diag(values)·V*` for a random unitary `V`.
pub fn random_psd_with_spectrum(values: &[f64], rng: &mut StdRng) -> HermitianPSD {
    let v = random_unitary(values.len(), rng);
    let m = v.matmul(&ComplexMatrix::diagonal(values)).matmul(&v.adjoint());
    HermitianPSD::new(hermitize(&m)).unwrap()
}

pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    m.add(&m.adjoint()).scale(C64::new(0.5, 0.0))
}

/// Random nonincreasing vector with entries in `[lo, hi]`, sometimes with repeated values.
pub fn random_spectrum(d: usize, lo: f64, hi: f64, rng: &mut StdRng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    if d > 1 && rng.random_bool(0.3) {
        let i = rng.random_range(0..d - 1);
        v[i + 1] = v[i];
    }
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn spectrum_of(m: &ComplexMatrix) -> Vec<f64> {
    eig_hermitian(&hermitize(m)).unwrap().0.into_vec()
}

/// A frame of `n` vectors in `C^d` whose frame operator is `V·diag(values)·V*`.
pub fn frame_with_operator_spectrum(values: &[f64], n: usize, rng: &mut StdRng) -> Frame {
    let d = values.len();
    assert!(n >= d);
    let v = random_unitary(d, rng);
    let u = random_unitary(n, rng);
    let syn = ComplexMatrix::from_fn(d, n, |i, j| {
        (0..d).map(|k| v[(i, k)] * values[k].sqrt() * u[(j, k)].conj()).sum()
    });
    Frame::from_synthesis(syn).unwrap()
}

/// A real frame of `n` vectors with frame operator `diag(λ)` and equal norms.
pub fn frame_with_spectrum(lambda: &[f64], n: usize) -> Frame {
    let b = HermitianPSD::new(ComplexMatrix::diagonal(lambda)).unwrap();
    let each = lambda.iter().sum::<f64>() / n as f64;
    let vectors = realize_frame(&b, &vec![each; n], 1e-12).unwrap();
    Frame::from_vectors(lambda.len(), &vectors).unwrap()
}

/// `k` random vectors in `C^d` with the given squared norms.
pub fn random_vectors_with_norms(d: usize, beta: &[f64], rng: &mut StdRng) -> Vec<Vec<C64>> {
    beta.iter()
        .map(|&b| {
            let v: Vec<C64> = (0..d).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|z| z * (b.sqrt() / norm)).collect()
        })
        .collect()
}
