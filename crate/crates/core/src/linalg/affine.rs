//! Solution sets of affine systems `F(x) = 0` over `Z/m_0 + ... + Z/m_{L-1}`.
//!
//! `F` is given as a black box that is assumed affine; its linear part is read
//! off column by column. The solutions form a coset `x_0 + K` of the kernel.

use rand::Rng;

use super::echelon::{Residues, SubgroupEchelon};

#[derive(Debug, Clone)]
pub struct AffineSolutions {
    moduli: Vec<i64>,
    /// lexicographically least solution
    particular: Option<Residues>,
    kernel: SubgroupEchelon,
}

/// Solves `f(x) = 0` for an affine `f` from coordinates `x_moduli` to `y_moduli`.
pub fn solve_affine(x_moduli: Vec<i64>, y_moduli: Vec<i64>, f: impl Fn(&[i64]) -> Residues) -> AffineSolutions {
    let (nx, ny) = (x_moduli.len(), y_moduli.len());
    let zero = vec![0i64; nx];
    let f0 = f(&zero);
    assert_eq!(f0.len(), ny, "residual length");
    let mut moduli = y_moduli.clone();
    moduli.extend(&x_moduli);
    let mut gens = Vec::with_capacity(nx);
    let mut unit = zero.clone();
    for j in 0..nx {
        unit[j] = 1;
        let fj = f(&unit);
        unit[j] = 0;
        let mut v: Residues = fj.iter().zip(&f0).map(|(a, b)| a - b).collect();
        v.resize(ny + nx, 0);
        v[ny + j] = 1;
        gens.push(v);
    }
    let graph = SubgroupEchelon::new(moduli, gens);
    let kernel = SubgroupEchelon::new(
        x_moduli.clone(),
        graph.generators_from(ny).into_iter().map(|v| v[ny..].to_vec()).collect(),
    );
    // L x = -f(0): reduce (-f(0), 0) on the y block
    let mut v: Residues = f0.iter().map(|&a| -a).collect();
    v.resize(ny + nx, 0);
    let r = graph.reduce_prefix(&v, ny);
    let particular = if r[..ny].iter().all(|&a| a == 0) {
        let x: Residues = r[ny..].iter().zip(&x_moduli).map(|(&a, &m)| (-a).rem_euclid(m)).collect();
        Some(kernel.reduce(&x))
    } else {
        None
    };
    AffineSolutions {
        moduli: x_moduli,
        particular,
        kernel,
    }
}

impl AffineSolutions {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Number of solutions, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        if self.is_empty() {
            0
        } else {
            self.kernel.order()
        }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn particular(&self) -> Option<&Residues> {
        self.particular.as_ref()
    }

    pub fn kernel(&self) -> &SubgroupEchelon {
        &self.kernel
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        match &self.particular {
            None => false,
            Some(p) => {
                let d: Residues = x.iter().zip(p).map(|(a, b)| a - b).collect();
                self.kernel.contains(&d)
            }
        }
    }

    fn shifted(&self, digits: &[i64]) -> Residues {
        let p = self.particular.as_ref().expect("nonempty solution set");
        let k = self.kernel.combine(digits);
        k.iter()
            .zip(p)
            .zip(&self.moduli)
            .map(|((a, b), &m)| (a + b).rem_euclid(m))
            .collect()
    }

    /// Every solution, in lexicographic order. Call only after checking [`count`](Self::count).
    pub fn enumerate(&self) -> Vec<Residues> {
        if self.is_empty() {
            return Vec::new();
        }
        let ranges = self.kernel.digit_ranges();
        let mut digits = vec![0i64; ranges.len()];
        let mut out = Vec::new();
        loop {
            out.push(self.shifted(&digits));
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < ranges[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        out.sort();
        out
    }

    /// A uniformly random solution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Residues> {
        self.particular.as_ref()?;
        let digits: Vec<i64> = self.kernel.digit_ranges().iter().map(|&r| rng.gen_range(0..r)).collect();
        Some(self.shifted(&digits))
    }
}
