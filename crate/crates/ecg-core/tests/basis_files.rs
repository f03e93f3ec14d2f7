//! Versioned JSON basis files: round trips, determinism, and rejection of
//! malformed content.

use ecg_core::{
    read_basis_file, write_basis_file, BasisSetFile, EcgBasisFunction, EcgError,
    BASIS_FILE_VERSION,
};
use matkit::{Matrix, SpdMatrix};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

fn scratch_path(tag: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ecg_basis_{tag}_{}.json", std::process::id()));
    p
}

fn random_basis(rng: &mut impl Rng, n: usize, count: usize) -> Vec<EcgBasisFunction> {
    (0..count)
        .map(|_| {
            let mut l = Matrix::zeros(n);
            for i in 0..n {
                for j in 0..i {
                    l.set(i, j, rng.gen_range(-0.5..0.5));
                }
                l.set(i, i, rng.gen_range(0.5..1.5));
            }
            let a = SpdMatrix::from_matrix(l.mul(&l.transpose()).unwrap().symmetrized()).unwrap();
            let s: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            EcgBasisFunction::new(a, s).unwrap()
        })
        .collect()
}

#[test]
fn round_trip_preserves_functions_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let basis = random_basis(&mut rng, 2, 7);
    let path = scratch_path("roundtrip");
    write_basis_file(&path, &basis).unwrap();
    let loaded = read_basis_file(&path).unwrap();
    assert_eq!(loaded.len(), basis.len());
    for (orig, back) in basis.iter().zip(&loaded) {
        assert_eq!(orig.n_electrons(), back.n_electrons());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(orig.a().get(i, j), back.a().get(i, j));
            }
        }
        assert_eq!(orig.s(), back.s());
    }
    std::fs::remove_file(&path).ok();
}

#[test]
fn read_write_cycle_is_byte_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let basis = random_basis(&mut rng, 2, 5);
    let first = scratch_path("bytes_a");
    let second = scratch_path("bytes_b");
    write_basis_file(&first, &basis).unwrap();
    let loaded = read_basis_file(&first).unwrap();
    write_basis_file(&second, &loaded).unwrap();
    let bytes_a = std::fs::read(&first).unwrap();
    let bytes_b = std::fs::read(&second).unwrap();
    assert_eq!(bytes_a, bytes_b);
    std::fs::remove_file(&first).ok();
    std::fs::remove_file(&second).ok();
}

#[test]
fn file_carries_version_and_schema_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let basis = random_basis(&mut rng, 2, 2);
    let path = scratch_path("schema");
    write_basis_file(&path, &basis).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["version"], BASIS_FILE_VERSION);
    assert_eq!(value["n_electrons"], 2);
    let funcs = value["functions"].as_array().unwrap();
    assert_eq!(funcs.len(), 2);
    assert_eq!(
        funcs[0]["A_lower_triangle_row_major"].as_array().unwrap().len(),
        3
    );
    assert_eq!(funcs[0]["s"].as_array().unwrap().len(), 6);
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_and_inconsistent_files_are_rejected() {
    let path = scratch_path("bad_json");
    std::fs::write(&path, "{ not json").unwrap();
    assert!(matches!(
        read_basis_file(&path),
        Err(EcgError::BasisFile { .. })
    ));
    std::fs::remove_file(&path).ok();

    let wrong_version = BasisSetFile {
        version: BASIS_FILE_VERSION + 1,
        n_electrons: 2,
        functions: vec![],
    };
    assert!(matches!(
        wrong_version.to_functions(),
        Err(EcgError::BasisFile { .. })
    ));

    let path = scratch_path("bad_matrix");
    std::fs::write(
        &path,
        r#"{"version":1,"n_electrons":2,"functions":[{"A_lower_triangle_row_major":[1.0,5.0,1.0],"s":[0,0,0,0,0,0]}]}"#,
    )
    .unwrap();
    assert!(
        matches!(read_basis_file(&path), Err(EcgError::BasisFile { .. })),
        "indefinite exponent matrix must be rejected"
    );
    std::fs::remove_file(&path).ok();

    let path = scratch_path("bad_shift");
    std::fs::write(
        &path,
        r#"{"version":1,"n_electrons":2,"functions":[{"A_lower_triangle_row_major":[1.0,0.0,1.0],"s":[0,0,0]}]}"#,
    )
    .unwrap();
    assert!(matches!(
        read_basis_file(&path),
        Err(EcgError::BasisFile { .. })
    ));
    std::fs::remove_file(&path).ok();

    let missing = scratch_path("missing");
    assert!(matches!(read_basis_file(&missing), Err(EcgError::Io(_))));
}
