// SPDX-License-Identifier: Apache-2.0

//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands.
//!
//! Panels are either plain intervals or the algebraic tail `[Λ, ∞)` mapped to
//! `u ∈ (0, 1]` by `ω = Λ/u`. The panel with the largest scaled error is
//! bisected until every component meets `rel_tol` against its own scale.

// published node tables, kept digit for digit
#![allow(clippy::excessive_precision)]

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
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PanelMap {
    Linear,
    /// `ω = scale / u` with the panel bounds given in `u`.
    Tail {
        scale: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub map: PanelMap,
}

impl Panel {
    pub fn linear(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            map: PanelMap::Linear,
        }
    }

    /// `[scale, ∞)` in the original variable.
    pub fn tail(scale: f64) -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            map: PanelMap::Tail { scale },
        }
    }

    fn split(&self) -> (Self, Self) {
        let mid = 0.5 * (self.a + self.b);
        (Self { b: mid, ..*self }, Self { a: mid, ..*self })
    }

    fn splittable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        mid > self.a && mid < self.b && (self.b - self.a) > 1e-15 * self.a.abs().max(self.b.abs())
    }
}

/// Splits `[lo, hi]` at the given breakpoints (those outside are ignored).
pub fn panels_between(lo: f64, hi: f64, breakpoints: &[f64]) -> Vec<Panel> {
    let mut pts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > lo && *x < hi)
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(b.abs()));
    pts.windows(2).map(|w| Panel::linear(w[0], w[1])).collect()
}

#[derive(Debug, Clone)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
    pub panels: usize,
    pub converged: bool,
    /// Largest `error / scale` over components.
    pub relative_error: f64,
}

struct Evaluated<const N: usize> {
    panel: Panel,
    value: [f64; N],
    error: [f64; N],
}

fn gauss_kronrod<const N: usize, F>(f: &F, panel: &Panel) -> Evaluated<N>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (panel.a + panel.b);
    let half = 0.5 * (panel.b - panel.a);
    let eval = |t: f64| -> [f64; N] {
        let x = center + half * t;
        match panel.map {
            PanelMap::Linear => f(x),
            PanelMap::Tail { scale } => {
                let jac = scale / (x * x);
                let mut v = f(scale / x);
                v.iter_mut().for_each(|c| *c *= jac);
                v
            }
        }
    };
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let mid = eval(0.0);
    for c in 0..N {
        kronrod[c] = WGK[7] * mid[c];
        gauss[c] = WG[3] * mid[c];
    }
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let lo = eval(-x);
        let hi = eval(x);
        for c in 0..N {
            let s = lo[c] + hi[c];
            kronrod[c] += wk * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        value[c] = kronrod[c] * half;
        error[c] = ((kronrod[c] - gauss[c]) * half).abs();
    }
    Evaluated {
        panel: *panel,
        value,
        error,
    }
}

/// Integrates `f` over the union of `panels`.
///
/// `scale` maps the current totals to the per-component magnitude that
/// `rel_tol` is measured against; `abs_floor` keeps identically-zero
/// components from demanding infinite accuracy.
pub fn integrate<const N: usize, F, S>(
    f: F,
    panels: &[Panel],
    rel_tol: f64,
    max_subdivisions: usize,
    abs_floor: f64,
    scale: S,
) -> Quadrature<N>
where
    F: Fn(f64) -> [f64; N],
    S: Fn(&[f64; N]) -> [f64; N],
{
    let mut work: Vec<Evaluated<N>> = panels.iter().map(|p| gauss_kronrod(&f, p)).collect();
    let mut frozen: Vec<bool> = vec![false; work.len()];
    let mut evaluations = 15 * work.len();
    let mut splits = 0usize;

    loop {
        let (value, error) = totals(&work);
        let sc = scale(&value).map(|s| s.abs().max(abs_floor));
        let weighted = |e: &[f64; N]| {
            e.iter()
                .zip(sc.iter())
                .map(|(e, s)| e / s)
                .fold(0.0_f64, f64::max)
        };
        let rel = weighted(&error);
        let done = rel <= rel_tol || rel.is_nan();
        let exhausted = splits >= max_subdivisions;
        let worst = work
            .iter()
            .enumerate()
            .filter(|(i, _)| !frozen[*i])
            .map(|(i, w)| (i, weighted(&w.error)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        if done || exhausted || worst.is_none() {
            return Quadrature {
                value,
                error,
                evaluations,
                panels: work.len(),
                converged: done,
                relative_error: rel,
            };
        }
        let (i, _) = worst.unwrap();
        let panel = work[i].panel;
        if !panel.splittable() {
            frozen[i] = true;
            continue;
        }
        let (l, r) = panel.split();
        work[i] = gauss_kronrod(&f, &l);
        work.push(gauss_kronrod(&f, &r));
        frozen.push(false);
        evaluations += 30;
        splits += 1;
    }
}

fn totals<const N: usize>(work: &[Evaluated<N>]) -> ([f64; N], [f64; N]) {
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for w in work {
        for c in 0..N {
            value[c] += w.value[c];
            error[c] += w.error[c];
        }
    }
    (value, error)
}
