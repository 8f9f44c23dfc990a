//! The image encryption pipeline: counter-driven key update, fixed-point
//! keystream sliced into the pad sequence F' and mask sequence G, raster
//! padding with embedded counter bytes, XOR confusion, repeated nonlinear
//! Cat-map permutation rounds, and the encrypted 16-bit size register.
//!
//! Keystream arithmetic runs entirely in Q5.26 fixed point (the
//! [`crate::fixedpoint`] engine), so ciphertexts are bit-identical across
//! platforms.
//!
//! Grid layout: an R x C image is padded to S x S, where S is the larger
//! dimension, or the larger dimension plus one when the image is square
//! (two pad cells must exist for the counter bytes). Cells hold, in raster
//! order, the plain pixels, then (square inputs only) keystream filler,
//! then F' right-aligned so its two counter bytes land in the last two
//! cells. The size register R packs an orientation bit and the smaller
//! dimension; a square input stores field value 0, which no non-square
//! input can produce, making the layout unambiguous.

use thiserror::Error;

use crate::fixedpoint::{
    FixedConfig, FixedEngineSpec, FixedPointError, FixedSample, FixedSimulator, FixedState,
};

/// Largest counter value; the session counter wraps to zero past it.
pub const COUNTER_MAX: u16 = 4095;

/// Network weight used by the keystream generator (not part of the key).
pub const KEYSTREAM_K: f64 = 1.15;

/// Sampling step of the keystream generator. Coarser than the dynamics
/// default on purpose: successive states of the h = 0.01 flow change too
/// little near trajectory turning points, leaving runs of correlated
/// keystream bytes; half-unit steps decorrelate consecutive outputs while
/// the map stays bounded and chaotic. The step is part of the cipher
/// definition - both ends must use it.
pub const KEYSTREAM_STEP: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum CipherError {
    #[error("key error: {0}")]
    Key(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("counter desynchronization{}", match .recovered {
        Some(c) => format!(", recovered cnt = {c}"),
        None => String::from(", no counter recovered"),
    })]
    Desync { recovered: Option<u16> },
    #[error(transparent)]
    Fixed(#[from] FixedPointError),
}

/// Cat-map coefficients. The linear part must be invertible modulo the
/// padded side for decryption to exist, which is validated per image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

/// The sixteen key fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SecretKey {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub omega: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub x0: [f64; 3],
    pub cat: CatParams,
    pub t_factor: u8,
}

/// The key the published statistical runs use, with an invertible Cat map
/// (the all-ones map has determinant zero and is rejected).
pub fn default_secret_key() -> SecretKey {
    SecretKey {
        a1: 5.0,
        a2: 5.0,
        a3: 12.0,
        omega: 0.01,
        omega1: 0.2,
        omega2: 0.22,
        omega3: 0.21,
        x0: [0.0, 0.1, 0.0],
        cat: CatParams {
            a: 1,
            b: 1,
            c: 1,
            d: 2,
            e: 1,
        },
        t_factor: 5,
    }
}

impl SecretKey {
    /// Domain validation. Amplitudes admit [0, 12.5]: the published example
    /// key carries A3 = 12, above its stated [0, 10] range, and the counter
    /// update adds at most 3.75 more while staying far from the Q5.26 limit.
    pub fn validate(&self) -> Result<(), CipherError> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2), ("a3", self.a3)] {
            if !(0.0..=12.5).contains(&v) {
                return Err(CipherError::Key(format!("{name} = {v} outside [0, 12.5]")));
            }
        }
        for (name, v) in [
            ("omega", self.omega),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega3", self.omega3),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CipherError::Key(format!("{name} = {v} outside (0, 1)")));
            }
        }
        for (i, v) in self.x0.iter().enumerate() {
            if !(0.0..1.0).contains(v) {
                return Err(CipherError::Key(format!("x{}(0) = {v} outside [0, 1)", i + 1)));
            }
        }
        if self.t_factor > 5 {
            return Err(CipherError::Key(format!(
                "t = {} outside 0..=5",
                self.t_factor
            )));
        }
        Ok(())
    }

    /// Key-file text: `name = value` lines, amplitudes and initial state
    /// with 15 decimals, angular velocities with 7.
    pub fn to_key_file(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("a1 = {:.15}\n", self.a1));
        s.push_str(&format!("a2 = {:.15}\n", self.a2));
        s.push_str(&format!("a3 = {:.15}\n", self.a3));
        s.push_str(&format!("omega = {:.7}\n", self.omega));
        s.push_str(&format!("omega1 = {:.7}\n", self.omega1));
        s.push_str(&format!("omega2 = {:.7}\n", self.omega2));
        s.push_str(&format!("omega3 = {:.7}\n", self.omega3));
        s.push_str(&format!("x1_0 = {:.15}\n", self.x0[0]));
        s.push_str(&format!("x2_0 = {:.15}\n", self.x0[1]));
        s.push_str(&format!("x3_0 = {:.15}\n", self.x0[2]));
        s.push_str(&format!("cat_a = {}\n", self.cat.a));
        s.push_str(&format!("cat_b = {}\n", self.cat.b));
        s.push_str(&format!("cat_c = {}\n", self.cat.c));
        s.push_str(&format!("cat_d = {}\n", self.cat.d));
        s.push_str(&format!("cat_e = {}\n", self.cat.e));
        s.push_str(&format!("t = {}\n", self.t_factor));
        s
    }

    pub fn parse_key_file(text: &str) -> Result<SecretKey, CipherError> {
        let mut fields = std::collections::HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, value) = line.split_once('=').ok_or_else(|| {
                CipherError::Format(format!("key file line {}: expected name = value", lineno + 1))
            })?;
            fields.insert(name.trim().to_string(), value.trim().to_string());
        }
        let f = |name: &str| -> Result<f64, CipherError> {
            fields
                .get(name)
                .ok_or_else(|| CipherError::Format(format!("key file missing field {name}")))?
                .parse()
                .map_err(|_| CipherError::Format(format!("key file field {name} is not a number")))
        };
        let i = |name: &str| -> Result<i64, CipherError> {
            fields
                .get(name)
                .ok_or_else(|| CipherError::Format(format!("key file missing field {name}")))?
                .parse()
                .map_err(|_| CipherError::Format(format!("key file field {name} is not an integer")))
        };
        let key = SecretKey {
            a1: f("a1")?,
            a2: f("a2")?,
            a3: f("a3")?,
            omega: f("omega")?,
            omega1: f("omega1")?,
            omega2: f("omega2")?,
            omega3: f("omega3")?,
            x0: [f("x1_0")?, f("x2_0")?, f("x3_0")?],
            cat: CatParams {
                a: i("cat_a")?,
                b: i("cat_b")?,
                c: i("cat_c")?,
                d: i("cat_d")?,
                e: i("cat_e")?,
            },
            t_factor: i("t")? as u8,
        };
        key.validate()?;
        Ok(key)
    }
}

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self, CipherError> {
        if rows < 2 || cols < 2 {
            return Err(CipherError::Size(format!(
                "image must be at least 2x2, got {rows}x{cols}"
            )));
        }
        if rows.max(cols) >= 1 << 15 {
            return Err(CipherError::Size(format!(
                "image dimension {} exceeds 2^15 - 1",
                rows.max(cols)
            )));
        }
        if pixels.len() != rows * cols {
            return Err(CipherError::Size(format!(
                "pixel count {} does not match {rows}x{cols}",
                pixels.len()
            )));
        }
        Ok(GrayImage { rows, cols, pixels })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

/// Padded side for an R x C image.
pub fn padded_side(rows: usize, cols: usize) -> usize {
    let (max, min) = (rows.max(cols), rows.min(cols));
    if max > min {
        max
    } else {
        max + 1
    }
}

/// Counter-updated effective amplitudes. Each component independently
/// switches to the subtractive form when the additive one would exceed 10.
pub fn update_key(key: &SecretKey, cnt: u16) -> [f64; 3] {
    let offsets = [
        (cnt % 16) as f64 / 8.0,
        ((cnt >> 4) % 16) as f64 / 4.0,
        ((cnt >> 8) % 16) as f64 / 8.0,
    ];
    let mut out = [0.0; 3];
    for (i, (base, off)) in [key.a1, key.a2, key.a3].iter().zip(offsets).enumerate() {
        out[i] = if base + off > 10.0 { base - off } else { base + off };
    }
    out
}

/// Iterations discarded before any keystream output is used.
pub fn discard_count(cnt: u16, t_factor: u8) -> u64 {
    (cnt as u64 * t_factor as u64).max(1000)
}

/// Pad bytes F', mask bytes G, and the register mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeystreamBundle {
    pub f_prime: Vec<u8>,
    pub g: Vec<u8>,
    pub mask16: u16,
}

fn slice8(word: i32, lo: u32) -> u8 {
    ((word as u32) >> lo) as u8
}

fn f_byte(s: &FixedSample) -> u8 {
    let x = s.state.x1.raw();
    let y = s.state.x2.raw();
    let z = s.state.x3.raw();
    match y & 0b11 {
        0b00 => slice8(x, 0),
        0b01 => slice8(z, 0),
        0b10 => slice8(y, 2),
        _ => slice8(y, 8),
    }
}

fn g_byte(s: &FixedSample) -> u8 {
    let x = s.state.x1.raw();
    let y = s.state.x2.raw();
    let z = s.state.x3.raw();
    match (s.p1_active, s.p3_active) {
        (false, false) => slice8(x, 0) ^ slice8(z, 8),
        (false, true) => slice8(y, 2) ^ slice8(z, 4),
        (true, false) => slice8(x, 2) ^ slice8(y, 4),
        (true, true) => slice8(x, 8) ^ slice8(z, 0),
    }
}

fn engine_spec(key: &SecretKey, cnt: u16) -> FixedEngineSpec {
    let amps = update_key(key, cnt);
    FixedEngineSpec {
        k: KEYSTREAM_K,
        h: KEYSTREAM_STEP,
        wms_omega: Some(key.omega),
        svs: [
            Some((amps[0], key.omega1)),
            Some((amps[1], key.omega2)),
            Some((amps[2], key.omega3)),
        ],
        breakpoint: 1.34,
    }
}

fn engine(key: &SecretKey, cnt: u16) -> Result<FixedSimulator, CipherError> {
    let cfg = FixedConfig::build(&engine_spec(key, cnt))?;
    let initial = FixedState::from_f64(key.x0[0], key.x0[1], key.x0[2])?;
    Ok(FixedSimulator::new(cfg, initial))
}

fn validate_cnt(cnt: u16) -> Result<(), CipherError> {
    if cnt > COUNTER_MAX {
        return Err(CipherError::Key(format!(
            "counter {cnt} outside 0..={COUNTER_MAX}"
        )));
    }
    Ok(())
}

/// Generates the keystream for a padded side `s` and smaller dimension `n`:
/// runs the fixed-point network for `discard + 2s^2 - s n - 2` iterations,
/// discards the first `discard`, maps the first `s^2 - s n - 2` kept
/// outputs to F (selector: the two lowest bits of the x2 word), appends
/// the two counter bytes to form F', and maps the remaining `s^2` outputs
/// to G keyed by the axis-1/axis-3 stimulus activity flags. The register
/// mask splices the low bytes of the first kept x1 and x3 words.
pub fn keystream(
    key: &SecretKey,
    cnt: u16,
    s: usize,
    n: usize,
) -> Result<KeystreamBundle, CipherError> {
    key.validate()?;
    validate_cnt(cnt)?;
    if n < 2 || s <= n {
        return Err(CipherError::Size(format!(
            "padded side {s} and dimension {n} must satisfy s > n >= 2"
        )));
    }
    let f_len = (s * s)
        .checked_sub(s * n + 2)
        .ok_or_else(|| CipherError::Size(format!("side {s} too small for dimension {n}")))?;
    let g_len = s * s;
    let mut sim = engine(key, cnt)?;
    for _ in 0..discard_count(cnt, key.t_factor) {
        sim.step()?;
    }
    let first = sim.step()?;
    let mask16 = ((slice8(first.state.x1.raw(), 0) as u16) << 8)
        | slice8(first.state.x3.raw(), 0) as u16;
    let mut f_prime = Vec::with_capacity(f_len + 2);
    f_prime.push(f_byte(&first));
    for _ in 1..f_len {
        f_prime.push(f_byte(&sim.step()?));
    }
    f_prime.push(((cnt >> 8) as u8 & 0x0F) << 4);
    f_prime.push(cnt as u8);
    let mut g = Vec::with_capacity(g_len);
    for _ in 0..g_len {
        g.push(g_byte(&sim.step()?));
    }
    Ok(KeystreamBundle { f_prime, g, mask16 })
}

/// Register mask alone: only the first kept output is needed.
fn keystream_mask16(key: &SecretKey, cnt: u16) -> Result<u16, CipherError> {
    let mut sim = engine(key, cnt)?;
    for _ in 0..discard_count(cnt, key.t_factor) {
        sim.step()?;
    }
    let first = sim.step()?;
    Ok(((slice8(first.state.x1.raw(), 0) as u16) << 8) | slice8(first.state.x3.raw(), 0) as u16)
}

/// Arbitrary-length G bytes from a synthetic grid geometry, for randomness
/// testing of the mask sequence.
pub fn keystream_bytes(key: &SecretKey, cnt: u16, n_bytes: usize) -> Result<Vec<u8>, CipherError> {
    let side = (n_bytes as f64).sqrt().ceil() as usize;
    let side = side.max(3);
    let mut bundle = keystream(key, cnt, side, side - 1)?;
    bundle.g.truncate(n_bytes);
    Ok(bundle.g)
}

/// Fills the S x S grid: plain pixels in raster order, keystream filler for
/// the square-image gap, then F' right-aligned. Returns the grid and the
/// plain size register.
pub fn pad_image(img: &GrayImage, f_prime: &[u8]) -> Result<(Vec<u8>, u16), CipherError> {
    let s = padded_side(img.rows, img.cols);
    let n = img.rows.min(img.cols);
    if f_prime.len() != s * s - s * n {
        return Err(CipherError::Size(format!(
            "pad sequence length {} does not match side {s}",
            f_prime.len()
        )));
    }
    let square = img.rows == img.cols;
    let mut grid = Vec::with_capacity(s * s);
    grid.extend_from_slice(&img.pixels);
    if square {
        // keystream-only bytes of F', cycled; the counter tail stays unique
        let f_part = &f_prime[..f_prime.len() - 2];
        let gap = s * s - img.pixels.len() - f_prime.len();
        for j in 0..gap {
            grid.push(f_part[j % f_part.len()]);
        }
    }
    grid.extend_from_slice(f_prime);
    debug_assert_eq!(grid.len(), s * s);
    let register = if square {
        0
    } else {
        let orientation: u16 = if img.cols >= img.rows { 0 } else { 1 };
        (orientation << 15) | n as u16
    };
    Ok((grid, register))
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a.rem_euclid(b));
    }
    a.abs()
}

fn mod_inverse(v: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m, v.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        None
    } else {
        Some(t0.rem_euclid(m))
    }
}

/// Validates that the Cat map permutes an S x S grid.
pub fn validate_cat(cat: &CatParams, s: usize) -> Result<(), CipherError> {
    let det = cat.a.wrapping_mul(cat.d).wrapping_sub(cat.b.wrapping_mul(cat.c));
    if gcd(det.rem_euclid(s as i64), s as i64) != 1 {
        return Err(CipherError::Key(format!(
            "cat determinant {det} is not invertible modulo {s}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatDirection {
    Forward,
    Inverse,
}

/// One permutation round of the nonlinear Cat map over the S x S grid:
/// the byte at (x, y) moves to x' = (a x + b y) mod S,
/// y' = (c x + d y + e ((x')^2 + 1)) mod S; the inverse undoes it.
pub fn cat_round(
    grid: &[u8],
    s: usize,
    cat: &CatParams,
    direction: CatDirection,
) -> Result<Vec<u8>, CipherError> {
    assert_eq!(grid.len(), s * s);
    validate_cat(cat, s)?;
    let m = s as i128;
    let (a, b, c, d, e) = (
        cat.a as i128,
        cat.b as i128,
        cat.c as i128,
        cat.d as i128,
        cat.e as i128,
    );
    let mut out = vec![0u8; grid.len()];
    match direction {
        CatDirection::Forward => {
            for x in 0..s as i128 {
                for y in 0..s as i128 {
                    let xp = (a * x + b * y).rem_euclid(m);
                    let yp = (c * x + d * y + e * (xp * xp + 1)).rem_euclid(m);
                    out[(xp * m + yp) as usize] = grid[(x * m + y) as usize];
                }
            }
        }
        CatDirection::Inverse => {
            let det = (a * d - b * c).rem_euclid(m) as i64;
            let inv = mod_inverse(det, s as i64).expect("validated above") as i128;
            for xp in 0..s as i128 {
                for yp in 0..s as i128 {
                    let t = (yp - e * (xp * xp + 1)).rem_euclid(m);
                    let x = (inv * (d * xp - b * t)).rem_euclid(m);
                    let y = (inv * (a * t - c * xp)).rem_euclid(m);
                    out[(x * m + y) as usize] = grid[(xp * m + yp) as usize];
                }
            }
        }
    }
    Ok(out)
}

/// Diffusion round count for a session counter.
pub fn diffusion_rounds(cnt: u16) -> u32 {
    4 + (cnt & 0x0F) as u32
}

/// Padded cipher grid plus the encrypted size register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherEnvelope {
    pub side: u16,
    pub r_encrypted: u16,
    pub pixels: Vec<u8>,
}

/// Encrypts one image under (key, cnt).
pub fn encrypt(img: &GrayImage, key: &SecretKey, cnt: u16) -> Result<CipherEnvelope, CipherError> {
    key.validate()?;
    validate_cnt(cnt)?;
    let s = padded_side(img.rows, img.cols);
    let n = img.rows.min(img.cols);
    validate_cat(&key.cat, s)?;
    let bundle = keystream(key, cnt, s, n)?;
    let (mut grid, register) = pad_image(img, &bundle.f_prime)?;
    for (cell, mask) in grid.iter_mut().zip(&bundle.g) {
        *cell ^= mask;
    }
    for _ in 0..diffusion_rounds(cnt) {
        grid = cat_round(&grid, s, &key.cat, CatDirection::Forward)?;
    }
    Ok(CipherEnvelope {
        side: s as u16,
        r_encrypted: register ^ bundle.mask16,
        pixels: grid,
    })
}

fn dims_from_register(register: u16, s: usize) -> Option<(usize, usize, usize)> {
    let n_field = (register & 0x7FFF) as usize;
    let orientation = register >> 15;
    if n_field == 0 {
        if orientation != 0 || s < 3 {
            return None;
        }
        return Some((s - 1, s - 1, s - 1));
    }
    if n_field < 2 || n_field >= s {
        return None;
    }
    let (rows, cols) = if orientation == 0 {
        (n_field, s)
    } else {
        (s, n_field)
    };
    Some((rows, cols, n_field))
}

fn attempt_decrypt(
    env: &CipherEnvelope,
    key: &SecretKey,
    cnt: u16,
    lenient: bool,
) -> Result<Result<GrayImage, ()>, CipherError> {
    let s = env.side as usize;
    let mask16 = keystream_mask16(key, cnt)?;
    let register = env.r_encrypted ^ mask16;
    let Some((rows, cols, n)) = dims_from_register(register, s) else {
        return Ok(Err(()));
    };
    let bundle = keystream(key, cnt, s, n)?;
    let mut grid = env.pixels.clone();
    for _ in 0..diffusion_rounds(cnt) {
        grid = cat_round(&grid, s, &key.cat, CatDirection::Inverse)?;
    }
    let hi = grid[s * s - 2] ^ bundle.g[s * s - 2];
    let lo = grid[s * s - 1] ^ bundle.g[s * s - 1];
    let counter_ok = hi & 0x0F == 0 && ((hi as u16 >> 4) << 8 | lo as u16) == cnt;
    if !counter_ok && !lenient {
        return Ok(Err(()));
    }
    for (cell, mask) in grid.iter_mut().zip(&bundle.g) {
        *cell ^= mask;
    }
    grid.truncate(rows * cols);
    Ok(Ok(GrayImage::new(rows, cols, grid)?))
}

/// Best-effort counter recovery after a failed decrypt: nearby counter
/// values are tried with their implied round counts until one reproduces
/// its own embedded bytes.
fn recover_counter(env: &CipherEnvelope, key: &SecretKey, cnt_d: u16) -> Option<u16> {
    let s = env.side as usize;
    let wrap = |v: i32| -> u16 { v.rem_euclid(COUNTER_MAX as i32 + 1) as u16 };
    let mut inverted: std::collections::HashMap<u32, Vec<u8>> = std::collections::HashMap::new();
    for step in 1..=16i32 {
        for delta in [step, -step] {
            let cand = wrap(cnt_d as i32 + delta);
            if cand == cnt_d {
                continue;
            }
            let rounds = diffusion_rounds(cand);
            let grid = match inverted.entry(rounds) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(slot) => {
                    let mut g = env.pixels.clone();
                    for _ in 0..rounds {
                        g = match cat_round(&g, s, &key.cat, CatDirection::Inverse) {
                            Ok(g) => g,
                            Err(_) => return None,
                        };
                    }
                    slot.insert(g)
                }
            };
            let Ok(mask16) = keystream_mask16(key, cand) else {
                continue;
            };
            let register = env.r_encrypted ^ mask16;
            let Some((_, _, n)) = dims_from_register(register, s) else {
                continue;
            };
            let Ok(bundle) = keystream(key, cand, s, n) else {
                continue;
            };
            let hi = grid[s * s - 2] ^ bundle.g[s * s - 2];
            let lo = grid[s * s - 1] ^ bundle.g[s * s - 1];
            if hi & 0x0F == 0 && ((hi as u16 >> 4) << 8 | lo as u16) == cand {
                return Some(cand);
            }
        }
    }
    None
}

fn validate_envelope(env: &CipherEnvelope) -> Result<(), CipherError> {
    let s = env.side as usize;
    if s < 3 {
        return Err(CipherError::Format(format!("padded side {s} below minimum 3")));
    }
    if env.pixels.len() != s * s {
        return Err(CipherError::Format(format!(
            "envelope holds {} pixels, expected {}",
            env.pixels.len(),
            s * s
        )));
    }
    Ok(())
}

/// Decrypts an envelope with the receiver counter `cnt_d`. A counter
/// mismatch yields [`CipherError::Desync`] carrying the best-effort
/// recovered counter so the caller can resynchronize and retry.
pub fn decrypt(env: &CipherEnvelope, key: &SecretKey, cnt_d: u16) -> Result<GrayImage, CipherError> {
    key.validate()?;
    validate_cnt(cnt_d)?;
    validate_envelope(env)?;
    validate_cat(&key.cat, env.side as usize)?;
    match attempt_decrypt(env, key, cnt_d, false)? {
        Ok(img) => Ok(img),
        Err(()) => Err(CipherError::Desync {
            recovered: recover_counter(env, key, cnt_d),
        }),
    }
}

/// Decrypt that trusts `cnt` even when the embedded counter bytes disagree
/// (they sit in the grid like any other cell and can be corrupted in
/// transit). Noise-robust recovery uses this with the known-good counter.
pub fn decrypt_lenient(
    env: &CipherEnvelope,
    key: &SecretKey,
    cnt: u16,
) -> Result<GrayImage, CipherError> {
    key.validate()?;
    validate_cnt(cnt)?;
    validate_envelope(env)?;
    validate_cat(&key.cat, env.side as usize)?;
    match attempt_decrypt(env, key, cnt, true)? {
        Ok(img) => Ok(img),
        Err(()) => Err(CipherError::Desync {
            recovered: recover_counter(env, key, cnt),
        }),
    }
}

const MAGIC: [u8; 4] = *b"AHN1";
const VERSION: u8 = 1;

/// Byte-exact envelope encoding: magic "AHN1", version byte, big-endian
/// side and register, then the S^2 grid bytes row-major.
pub fn serialize(env: &CipherEnvelope) -> Vec<u8> {
    let mut out = Vec::with_capacity(9 + env.pixels.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&env.side.to_be_bytes());
    out.extend_from_slice(&env.r_encrypted.to_be_bytes());
    out.extend_from_slice(&env.pixels);
    out
}

pub fn deserialize(bytes: &[u8]) -> Result<CipherEnvelope, CipherError> {
    if bytes.len() < 9 {
        return Err(CipherError::Format("envelope shorter than header".into()));
    }
    if bytes[..4] != MAGIC {
        return Err(CipherError::Format("bad envelope magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(CipherError::Format(format!(
            "unsupported envelope version {}",
            bytes[4]
        )));
    }
    let side = u16::from_be_bytes([bytes[5], bytes[6]]);
    let r_encrypted = u16::from_be_bytes([bytes[7], bytes[8]]);
    let expect = 9 + side as usize * side as usize;
    if bytes.len() != expect {
        return Err(CipherError::Format(format!(
            "envelope length {} does not match side {side} (expected {expect})",
            bytes.len()
        )));
    }
    let env = CipherEnvelope {
        side,
        r_encrypted,
        pixels: bytes[9..].to_vec(),
    };
    validate_envelope(&env)?;
    Ok(env)
}
