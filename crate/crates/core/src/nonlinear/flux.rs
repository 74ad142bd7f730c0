//! Pseudo-spectral evaluation of the advective flux
//! `N(u) = (div(v (x) v), div(v theta))`, split by the pieces used in the
//! Duhamel decomposition.

use num_complex::Complex64;

use crate::grid::{dealias_mask, BoussinesqState, BoxSpec, Transformer, Wavenumbers};

/// The six flux pieces, each a full spectral array:
/// `f1 = div_h(v_h (x) v_h)`, `f2 = d_3(v_h v_3)` (two components each),
/// `f3 = div_h(v_3 v_h)`, `f4 = d_3(v_3^2)`, `f5 = div_h(v_h theta)`,
/// `f6 = d_3(v_3 theta)`.
#[derive(Clone, Debug)]
pub struct FluxPieces {
    pub f1: [Vec<Complex64>; 2],
    pub f2: [Vec<Complex64>; 2],
    pub f3: Vec<Complex64>,
    pub f4: Vec<Complex64>,
    pub f5: Vec<Complex64>,
    pub f6: Vec<Complex64>,
}

impl FluxPieces {
    pub fn zeros(n: usize) -> Self {
        let z = || vec![Complex64::default(); n];
        Self {
            f1: [z(), z()],
            f2: [z(), z()],
            f3: z(),
            f4: z(),
            f5: z(),
            f6: z(),
        }
    }

    /// Piece `j` (1-based) placed into its slot of a 4-vector at mode `idx`.
    #[inline]
    pub fn slot(&self, j: usize, idx: usize) -> [Complex64; 4] {
        let z = Complex64::default();
        match j {
            1 => [self.f1[0][idx], self.f1[1][idx], z, z],
            2 => [self.f2[0][idx], self.f2[1][idx], z, z],
            3 => [z, z, self.f3[idx], z],
            4 => [z, z, self.f4[idx], z],
            5 => [z, z, z, self.f5[idx]],
            6 => [z, z, z, self.f6[idx]],
            _ => panic!("flux piece index {j} out of 1..=6"),
        }
    }

    /// Full flux `N` at one mode.
    #[inline]
    pub fn total(&self, idx: usize) -> [Complex64; 4] {
        [
            self.f1[0][idx] + self.f2[0][idx],
            self.f1[1][idx] + self.f2[1][idx],
            self.f3[idx] + self.f4[idx],
            self.f5[idx] + self.f6[idx],
        ]
    }
}

/// Reusable buffers and plans for flux evaluation on one box.
pub struct FluxEvaluator {
    box_spec: BoxSpec,
    mask: Vec<f64>,
    waves: Wavenumbers,
    tr: Transformer,
}

impl FluxEvaluator {
    pub fn new(box_spec: BoxSpec, dealias: f64) -> Self {
        Self {
            box_spec,
            mask: dealias_mask(&box_spec, dealias),
            waves: box_spec.wavenumbers(),
            tr: Transformer::new(box_spec),
        }
    }

    pub fn mask(&self) -> &[f64] {
        &self.mask
    }

    fn masked(&self, c: &[Complex64]) -> Vec<Complex64> {
        c.iter().zip(&self.mask).map(|(z, m)| z * m).collect()
    }

    /// Physical products `(v1v1, v1v2, v1v3, v2v2, v2v3, v3v3, v1th, v2th, v3th)`
    /// transformed back to spectral space.
    fn products(&mut self, u: [&[Complex64]; 4]) -> Vec<Vec<Complex64>> {
        let c: Vec<Vec<Complex64>> = u.iter().map(|f| self.masked(f)).collect();
        let (v1, v2) = self.tr.to_physical_pair(&c[0], &c[1]);
        let (v3, th) = self.tr.to_physical_pair(&c[2], &c[3]);
        let mul = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x * y).collect() };
        let phys = [
            mul(&v1, &v1),
            mul(&v1, &v2),
            mul(&v1, &v3),
            mul(&v2, &v2),
            mul(&v2, &v3),
            mul(&v3, &v3),
            mul(&v1, &th),
            mul(&v2, &th),
            mul(&v3, &th),
        ];
        let mut out = Vec::with_capacity(9);
        for pair in phys.chunks(2) {
            if let [a, b] = pair {
                let (x, y) = self.tr.to_spectral_pair(a, b);
                out.push(x);
                out.push(y);
            } else {
                let zero = vec![0.0; self.box_spec.total()];
                out.push(self.tr.to_spectral_pair(&pair[0], &zero).0);
            }
        }
        out
    }

    pub fn pieces(&mut self, s: &BoussinesqState) -> FluxPieces {
        self.pieces_raw(std::array::from_fn(|c| s.fields[c].coeffs()))
    }

    pub fn pieces_raw(&mut self, u: [&[Complex64]; 4]) -> FluxPieces {
        let p = self.products(u);
        let b = self.box_spec;
        let n = b.total();
        let [nx, ny, _] = b.n();
        let mut f = FluxPieces {
            f1: [vec![Complex64::default(); n], vec![Complex64::default(); n]],
            f2: [vec![Complex64::default(); n], vec![Complex64::default(); n]],
            f3: vec![Complex64::default(); n],
            f4: vec![Complex64::default(); n],
            f5: vec![Complex64::default(); n],
            f6: vec![Complex64::default(); n],
        };
        let dk = &self.waves.dk;
        for idx in 0..n {
            let m = self.mask[idx];
            if m == 0.0 {
                continue;
            }
            let (i, j, k) = (idx % nx, (idx / nx) % ny, idx / (nx * ny));
            let (d1, d2, d3) = (
                Complex64::new(0.0, dk[0][i]),
                Complex64::new(0.0, dk[1][j]),
                Complex64::new(0.0, dk[2][k]),
            );
            let [v11, v12, v13, v22, v23, v33, v1t, v2t, v3t] =
                [0, 1, 2, 3, 4, 5, 6, 7, 8].map(|q| p[q][idx]);
            f.f1[0][idx] = d1 * v11 + d2 * v12;
            f.f1[1][idx] = d1 * v12 + d2 * v22;
            f.f2[0][idx] = d3 * v13;
            f.f2[1][idx] = d3 * v23;
            f.f3[idx] = d1 * v13 + d2 * v23;
            f.f4[idx] = d3 * v33;
            f.f5[idx] = d1 * v1t + d2 * v2t;
            f.f6[idx] = d3 * v3t;
        }
        f
    }

    /// Full flux `N(u)` as four spectral arrays.
    pub fn total(&mut self, u: [&[Complex64]; 4]) -> [Vec<Complex64>; 4] {
        let f = self.pieces_raw(u);
        let n = self.box_spec.total();
        let mut out: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![Complex64::default(); n]);
        for idx in 0..n {
            let t = f.total(idx);
            for c in 0..4 {
                out[c][idx] = t[c];
            }
        }
        out
    }
}
