//! Globally adaptive 15-point Gauss–Kronrod quadrature for vector integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights at the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn kronrod<F: Fn(f64) -> Vec<f64>>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let n = fc.len();
    let mut k: Vec<f64> = fc.iter().map(|x| x * WGK[7]).collect();
    let mut g: Vec<f64> = fc.iter().map(|x| x * WG[3]).collect();
    for j in 0..7 {
        let fl = f(c - h * XGK[j]);
        let fr = f(c + h * XGK[j]);
        for i in 0..n {
            let s = fl[i] + fr[i];
            k[i] += WGK[j] * s;
            if j % 2 == 1 {
                g[i] += WG[j / 2] * s;
            }
        }
    }
    let value: Vec<f64> = k.iter().map(|x| x * h).collect();
    let diff: Vec<f64> = k.iter().zip(&g).map(|(x, y)| (x - y) * h).collect();
    Panel {
        a,
        b,
        value,
        error: max_norm(&diff),
    }
}

/// Integrates `f` over `[a, b]` until the estimated error (max norm) is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> Vec<f64>>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Vec<f64>> {
    const MAX_PANELS: usize = 20_000;
    let first = kronrod(&f, a, b);
    let mut total = first.value.clone();
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);
    loop {
        let tol = abs_tol.max(rel_tol * max_norm(&total));
        if error <= tol {
            return Ok(total);
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailed { tolerance: tol, error });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        for (i, t) in total.iter_mut().enumerate() {
            *t += left.value[i] + right.value[i] - worst.value[i];
        }
        heap.push(left);
        heap.push(right);
        error = heap.iter().map(|p| p.error).sum();
    }
}
