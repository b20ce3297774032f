use crate::matkit::ComplexMatrix;

/// A named gate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: &'static str,
    pub matrix: ComplexMatrix,
}

/// `(1/√2) [[1, 1], [1, −1]]`.
pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).expect("static shape")
}

/// Controlled-NOT on two qubits, control first: fixes `|00⟩, |01⟩` and
/// swaps `|10⟩, |11⟩`.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
    .expect("static shape")
}

pub fn gate_library() -> Vec<Gate> {
    vec![
        Gate {
            name: "h",
            matrix: hadamard(),
        },
        Gate {
            name: "cnot",
            matrix: cnot(),
        },
        Gate {
            name: "id",
            matrix: ComplexMatrix::identity(2),
        },
    ]
}

const EXAMPLE2_SIGNS: [[f64; 8]; 8] = [
    [1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
    [0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0],
    [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0],
    [1.0, 0.0, 1.0, 0.0, -1.0, 0.0, -1.0, 0.0],
    [0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, -1.0],
    [0.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0],
    [-1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0],
];

/// The three-qubit benchmark circuit, a real 8×8 unitary with entries in
/// `{0, ±½}`.
pub fn build_example2_circuit() -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |i, j| (0.5 * EXAMPLE2_SIGNS[i][j]).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{frob_norm, kron};

    #[test]
    fn circuit_is_unitary() {
        let u = build_example2_circuit();
        assert!(u.unitary_defect() < 1e-12);
        assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn circuit_entries() {
        let u = build_example2_circuit();
        assert_eq!(u[(0, 0)].re, 0.5);
        for z in u.as_slice() {
            assert_eq!(z.im, 0.0);
            assert!([0.0, 0.5, -0.5].contains(&z.re));
        }
        // four nonzero entries per row and column
        for i in 0..8 {
            assert_eq!((0..8).filter(|&j| u[(i, j)].re != 0.0).count(), 4);
            assert_eq!((0..8).filter(|&j| u[(j, i)].re != 0.0).count(), 4);
        }
    }

    #[test]
    fn gates_square_to_identity() {
        let h = hadamard();
        assert!((&h * &h).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let cx = cnot();
        assert_eq!(&cx * &cx, ComplexMatrix::identity(4));
    }

    #[test]
    fn cnot_action_on_basis() {
        let cx = cnot();
        let basis = |k: usize| {
            let mut v = vec![num_complex::Complex64::new(0.0, 0.0); 4];
            v[k] = 1.0.into();
            v
        };
        assert_eq!(cx.mul_vec(&basis(0)), basis(0));
        assert_eq!(cx.mul_vec(&basis(1)), basis(1));
        assert_eq!(cx.mul_vec(&basis(2)), basis(3));
        assert_eq!(cx.mul_vec(&basis(3)), basis(2));
    }

    #[test]
    fn library_names_and_kron_chains() {
        let lib = gate_library();
        let names: Vec<_> = lib.iter().map(|g| g.name).collect();
        assert_eq!(names, ["h", "cnot", "id"]);
        for g in &lib {
            assert!(g.matrix.unitary_defect() < 1e-12);
        }
        let h = hadamard();
        let id = ComplexMatrix::identity(2);
        let layer = kron(&kron(&h, &h), &id);
        let ent = kron(&cnot(), &id);
        let chain = &(&ent * &layer) * &kron(&id, &cnot());
        assert_eq!(chain.shape(), (8, 8));
        assert!(chain.unitary_defect() < 1e-12);
        assert!(frob_norm(&chain) - 8f64.sqrt() < 1e-12);
    }
}
