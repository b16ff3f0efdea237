//! Image quality measures for comparing an input image with its enhanced output.

use crate::error::{Error, Result};
use crate::histogram::compute_histogram;
use crate::image::GrayImage;

/// Peak gray level.
const PEAK: f64 = 255.0;

/// Default EME tile side.
pub const DEFAULT_EME_BLOCK: u32 = 8;

/// SSIM window side and Gaussian width.
pub const SSIM_WINDOW: u32 = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// Absolute difference of the two image means.
pub fn ambe(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dimensions(b)?;
    Ok((a.mean() - b.mean()).abs())
}

/// Population standard deviation of the gray levels of `y`.
pub fn sd(y: &GrayImage) -> f64 {
    let h = compute_histogram(y);
    let mean = y.mean();
    let pdf = h.pdf();
    pdf.iter()
        .enumerate()
        .map(|(k, &p)| (k as f64 - mean).powi(2) * p)
        .sum::<f64>()
        .sqrt()
}

/// Shannon entropy of the gray-level distribution, in bits.
pub fn entropy(y: &GrayImage) -> f64 {
    let pdf = compute_histogram(y).pdf();
    -pdf.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Mean squared pixel difference.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dimensions(b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

/// Universal image quality index computed over the whole image,
/// `4 σ_ab μ_a μ_b / ((σ_a² + σ_b²)(μ_a² + μ_b²))`, with sample (N - 1) statistics.
pub fn uiqi(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dimensions(b)?;
    let n = a.len() as f64;
    let (mu_a, mu_b) = (a.mean(), b.mean());
    let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.pixels().iter().zip(b.pixels()) {
        let dx = x as f64 - mu_a;
        let dy = y as f64 - mu_b;
        var_a += dx * dx;
        var_b += dy * dy;
        cov += dx * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::UndefinedUiqi);
    }
    let denom = n - 1.0;
    let (var_a, var_b, cov) = (var_a / denom, var_b / denom, cov / denom);
    Ok(4.0 * cov * mu_a * mu_b / ((var_a + var_b) * (mu_a * mu_a + mu_b * mu_b)))
}

/// Measure of enhancement: the mean `(max + 1) / (min + 1)` ratio over a
/// `k x k` grid of `block x block` tiles, `k = min(width, height) / block`.
/// Border pixels outside the grid are ignored.
pub fn eme(y: &GrayImage, block: u32) -> Result<f64> {
    if block == 0 {
        return Err(Error::InvalidBlock(block));
    }
    let k = y.width().min(y.height()) / block;
    if k == 0 {
        return Err(Error::ImageTooSmall {
            metric: "EME",
            need: block,
            width: y.width(),
            height: y.height(),
        });
    }
    let mut total = 0.0;
    for ty in 0..k {
        for tx in 0..k {
            let (mut lo, mut hi) = (u8::MAX, u8::MIN);
            for row in y.rows().skip((ty * block) as usize).take(block as usize) {
                let start = (tx * block) as usize;
                for &p in &row[start..start + block as usize] {
                    lo = lo.min(p);
                    hi = hi.max(p);
                }
            }
            total += (hi as f64 + 1.0) / (lo as f64 + 1.0);
        }
    }
    Ok(total / (k * k) as f64)
}

/// `|EME(b) - EME(a)|`.
pub fn eme_error(a: &GrayImage, b: &GrayImage, block: u32) -> Result<f64> {
    a.same_dimensions(b)?;
    Ok((eme(b, block)? - eme(a, block)?).abs())
}

fn gaussian_kernel() -> Vec<f64> {
    let half = (SSIM_WINDOW / 2) as i32;
    let raw: Vec<f64> = (-half..=half)
        .map(|i| (-(i * i) as f64 / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

/// Separable "valid" filtering: output is `(w - n + 1) x (h - n + 1)`.
fn filter_valid(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let n = kernel.len();
    let out_w = width - n + 1;
    let out_h = height - n + 1;
    let mut horiz = vec![0.0; out_w * height];
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for x in 0..out_w {
            horiz[y * out_w + x] = kernel.iter().zip(&row[x..x + n]).map(|(k, v)| k * v).sum();
        }
    }
    let mut out = vec![0.0; out_w * out_h];
    for y in 0..out_h {
        for x in 0..out_w {
            out[y * out_w + x] = kernel
                .iter()
                .enumerate()
                .map(|(j, k)| k * horiz[(y + j) * out_w + x])
                .sum();
        }
    }
    out
}

/// Mean structural similarity over every 11x11 Gaussian-weighted window
/// (σ = 1.5, K1 = 0.01, K2 = 0.03) lying fully inside the image.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dimensions(b)?;
    let (w, h) = a.dimensions();
    if w.min(h) < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            metric: "SSIM",
            need: SSIM_WINDOW,
            width: w,
            height: h,
        });
    }
    let (w, h) = (w as usize, h as usize);
    let kernel = gaussian_kernel();
    let xa: Vec<f64> = a.pixels().iter().map(|&p| p as f64).collect();
    let xb: Vec<f64> = b.pixels().iter().map(|&p| p as f64).collect();
    let prod = |f: fn(f64, f64) -> f64| -> Vec<f64> {
        xa.iter().zip(&xb).map(|(&x, &y)| f(x, y)).collect()
    };

    let mu_a = filter_valid(&xa, w, h, &kernel);
    let mu_b = filter_valid(&xb, w, h, &kernel);
    let e_aa = filter_valid(&prod(|x, _| x * x), w, h, &kernel);
    let e_bb = filter_valid(&prod(|_, y| y * y), w, h, &kernel);
    let e_ab = filter_valid(&prod(|x, y| x * y), w, h, &kernel);

    let c1 = (SSIM_K1 * PEAK).powi(2);
    let c2 = (SSIM_K2 * PEAK).powi(2);
    let mut total = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
            / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
    }
    Ok(total / mu_a.len() as f64)
}

/// The seven quality scores of one (input, output) pair. Scores that are
/// undefined for the pair are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub ambe: f64,
    /// Standard deviation of the output.
    pub sd: f64,
    /// Entropy of the output.
    pub entropy: f64,
    /// `f64::INFINITY` when the images are identical.
    pub psnr: f64,
    /// Undefined when either image is constant.
    pub uiqi: Option<f64>,
    /// Undefined when the image is smaller than one EME tile.
    pub eme_error: Option<f64>,
    /// Undefined when the image is smaller than the SSIM window.
    pub ssim: Option<f64>,
}

impl MetricsReport {
    /// Column names, in field order.
    pub const COLUMNS: [&'static str; 7] =
        ["ambe", "sd", "entropy", "psnr", "uiqi", "eme_error", "ssim"];

    /// Values in [`Self::COLUMNS`] order.
    pub fn values(&self) -> [Option<f64>; 7] {
        [
            Some(self.ambe),
            Some(self.sd),
            Some(self.entropy),
            Some(self.psnr),
            self.uiqi,
            self.eme_error,
            self.ssim,
        ]
    }
}

/// Scores `output` against `input`.
pub fn evaluate(input: &GrayImage, output: &GrayImage, eme_block: u32) -> Result<MetricsReport> {
    input.same_dimensions(output)?;
    if eme_block == 0 {
        return Err(Error::InvalidBlock(eme_block));
    }
    let optional = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedUiqi | Error::ImageTooSmall { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(MetricsReport {
        ambe: ambe(input, output)?,
        sd: sd(output),
        entropy: entropy(output),
        psnr: psnr(input, output)?,
        uiqi: optional(uiqi(input, output))?,
        eme_error: optional(eme_error(input, output, eme_block))?,
        ssim: optional(ssim(input, output))?,
    })
}
