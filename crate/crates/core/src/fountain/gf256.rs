//! GF(2^8) arithmetic modulo x^8 + x^4 + x^3 + x + 1 (0x11B).
//!
//! Scalar ops go through exp/log tables built at compile time. The bulk
//! multiply-accumulate used by the codec has an AVX2 nibble-shuffle path and a
//! table-driven scalar fallback.

use super::FountainError;

/// Reduction polynomial, including the x^8 term.
pub const POLY: u16 = 0x11B;

/// 0x03 generates the multiplicative group for 0x11B (0x02 does not).
const GENERATOR: u8 = 0x03;

const fn xtime_mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        let carry = a & 0x80;
        a <<= 1;
        if carry != 0 {
            a ^= (POLY & 0xFF) as u8;
        }
        b >>= 1;
    }
    p
}

const fn build_exp_log() -> ([u8; 512], [u8; 256]) {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x = 1u8;
    let mut i = 0;
    while i < 255 {
        exp[i] = x;
        log[x as usize] = i as u8;
        x = xtime_mul(x, GENERATOR);
        i += 1;
    }
    while i < 512 {
        exp[i] = exp[i - 255];
        i += 1;
    }
    (exp, log)
}

const EXP_LOG: ([u8; 512], [u8; 256]) = build_exp_log();
static EXP: [u8; 512] = EXP_LOG.0;
static LOG: [u8; 256] = EXP_LOG.1;

const fn table_mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        0
    } else {
        EXP_LOG.0[EXP_LOG.1[a as usize] as usize + EXP_LOG.1[b as usize] as usize]
    }
}

const fn build_mul_table() -> [[u8; 256]; 256] {
    let mut t = [[0u8; 256]; 256];
    let mut a = 0;
    while a < 256 {
        let mut b = 0;
        while b < 256 {
            t[a][b] = table_mul(a as u8, b as u8);
            b += 1;
        }
        a += 1;
    }
    t
}

const fn build_nibble_tables() -> ([[u8; 16]; 256], [[u8; 16]; 256]) {
    let mut lo = [[0u8; 16]; 256];
    let mut hi = [[0u8; 16]; 256];
    let mut c = 0;
    while c < 256 {
        let mut i = 0;
        while i < 16 {
            lo[c][i] = table_mul(c as u8, i as u8);
            hi[c][i] = table_mul(c as u8, (i as u8) << 4);
            i += 1;
        }
        c += 1;
    }
    (lo, hi)
}

static MUL: [[u8; 256]; 256] = build_mul_table();
const NIBBLES: ([[u8; 16]; 256], [[u8; 16]; 256]) = build_nibble_tables();
static NIB_LO: [[u8; 16]; 256] = NIBBLES.0;
static NIB_HI: [[u8; 16]; 256] = NIBBLES.1;

#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        0
    } else {
        EXP[LOG[a as usize] as usize + LOG[b as usize] as usize]
    }
}

pub fn inv(a: u8) -> Result<u8, FountainError> {
    if a == 0 {
        return Err(FountainError::InverseOfZero);
    }
    Ok(EXP[255 - LOG[a as usize] as usize])
}

pub fn div(a: u8, b: u8) -> Result<u8, FountainError> {
    Ok(mul(a, inv(b)?))
}

/// `dst[i] ^= c · src[i]`
pub fn mul_add_slice(dst: &mut [u8], src: &[u8], c: u8) {
    assert_eq!(dst.len(), src.len());
    match c {
        0 => {}
        1 => dst.iter_mut().zip(src).for_each(|(d, s)| *d ^= s),
        _ => {
            #[cfg(target_arch = "x86_64")]
            if dst.len() >= 32 && std::arch::is_x86_feature_detected!("avx2") {
                // SAFETY: AVX2 availability was checked at runtime.
                unsafe { mul_add_avx2(dst, src, c) };
                return;
            }
            mul_add_scalar(dst, src, c);
        }
    }
}

fn mul_add_scalar(dst: &mut [u8], src: &[u8], c: u8) {
    let row = &MUL[c as usize];
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= row[*s as usize];
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn mul_add_avx2(dst: &mut [u8], src: &[u8], c: u8) {
    use std::arch::x86_64::*;

    let lo = _mm256_broadcastsi128_si256(_mm_loadu_si128(NIB_LO[c as usize].as_ptr().cast()));
    let hi = _mm256_broadcastsi128_si256(_mm_loadu_si128(NIB_HI[c as usize].as_ptr().cast()));
    let mask = _mm256_set1_epi8(0x0f);
    let whole = dst.len() / 32 * 32;
    let mut i = 0;
    while i < whole {
        let s = _mm256_loadu_si256(src.as_ptr().add(i).cast());
        let d = _mm256_loadu_si256(dst.as_ptr().add(i).cast());
        let l = _mm256_and_si256(s, mask);
        let h = _mm256_and_si256(_mm256_srli_epi64::<4>(s), mask);
        let p = _mm256_xor_si256(_mm256_shuffle_epi8(lo, l), _mm256_shuffle_epi8(hi, h));
        _mm256_storeu_si256(dst.as_mut_ptr().add(i).cast(), _mm256_xor_si256(d, p));
        i += 32;
    }
    mul_add_scalar(&mut dst[whole..], &src[whole..], c);
}

/// `buf[i] = c · buf[i]`
pub fn scale_slice(buf: &mut [u8], c: u8) {
    if c == 1 {
        return;
    }
    let row = &MUL[c as usize];
    for b in buf.iter_mut() {
        *b = row[*b as usize];
    }
}
