//! Airy function Ai and its derivative on the real line.
//!
//! Four regimes: a recentred Taylor march for -10 < x < -3, the Maclaurin
//! series on [-3, 3^(2/3)], the modified Bessel representation
//! `Ai(x) = (1/π) sqrt(x/3) K_{1/3}(ζ)` beyond, and the oscillatory
//! asymptotic expansion for x <= -10.

use std::f64::consts::PI;

pub const AI0: f64 = 0.355_028_053_887_817_239_260;
pub const AIP0: f64 = -0.258_819_403_792_806_798_405;

/// Above this point Ai underflows to zero in double precision.
pub const UNDERFLOW_X: f64 = 108.0;

const MACLAURIN_LO: f64 = -3.0;
const ASYMPTOTIC_LO: f64 = -10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Airy {
    pub ai: f64,
    pub aip: f64,
    /// Set when the argument is past [`UNDERFLOW_X`] and zeros were returned.
    pub underflow: bool,
}

/// Ai(x) and Ai'(x).
pub fn airy_ai(x: f64) -> Airy {
    let (ai, aip) = if x > UNDERFLOW_X {
        return Airy {
            ai: 0.0,
            aip: 0.0,
            underflow: true,
        };
    } else if x <= ASYMPTOTIC_LO {
        oscillatory(-x)
    } else if x < MACLAURIN_LO {
        let (a, ap) = maclaurin(MACLAURIN_LO);
        march(MACLAURIN_LO, a, ap, x)
    } else if x <= 9f64.cbrt() {
        maclaurin(x)
    } else {
        bessel_k(x)
    };
    Airy {
        ai,
        aip,
        underflow: false,
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    // a_n = a_{n-3} / ((n-1) n) from Ai'' = x Ai
    let mut a = [AI0, AIP0, 0.0];
    let mut val = AI0 + AIP0 * x;
    let mut der = AIP0;
    let mut pw = x * x; // x^(n-1)
    for n in 3..400usize {
        let an = a[n % 3] / ((n - 1) * n) as f64;
        a[n % 3] = an;
        let term_d = n as f64 * an * pw;
        pw *= x;
        let term = an * pw;
        val += term;
        der += term_d;
        if n > 10 && n % 3 != 2 && term.abs() <= 1e-18 * val.abs() && term_d.abs() <= 1e-18 * der.abs() {
            break;
        }
    }
    (val, der)
}

/// Steps the Taylor series of Ai from `x0` toward `x` in increments of at
/// most one.
fn march(mut x0: f64, mut a: f64, mut ap: f64, x: f64) -> (f64, f64) {
    while x0 != x {
        let h = if (x - x0).abs() <= 1.0 { x - x0 } else { (x - x0).signum() };
        let (na, nap) = taylor_step(x0, a, ap, h);
        a = na;
        ap = nap;
        x0 = if (x - x0).abs() <= 1.0 { x } else { x0 + h };
    }
    (a, ap)
}

fn taylor_step(x0: f64, a: f64, ap: f64, h: f64) -> (f64, f64) {
    // b_{k+2} = (x0 b_k + b_{k-1}) / ((k+1)(k+2))
    let mut b_prev = 0.0; // b_{k-1}
    let mut b_k = a;
    let mut b_k1 = ap;
    let mut val = a + ap * h;
    let mut der = ap;
    let mut hk = h; // h^(k+1) after the shift below
    let mut k = 0usize;
    loop {
        let b_k2 = (x0 * b_k + b_prev) / ((k + 1) * (k + 2)) as f64;
        let term_d = (k + 2) as f64 * b_k2 * hk;
        hk *= h;
        let term = b_k2 * hk;
        val += term;
        der += term_d;
        b_prev = b_k;
        b_k = b_k1;
        b_k1 = b_k2;
        k += 1;
        if k > 8 && term.abs() <= 1e-18 * (val.abs() + der.abs()) && term_d.abs() <= 1e-18 * (val.abs() + der.abs()) {
            break;
        }
        if k > 200 {
            break;
        }
    }
    (val, der)
}

/// Asymptotic expansion of Ai(-z), Ai'(-z) for large positive z.
fn oscillatory(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (mut p, mut q, mut r, mut s) = (0.0, 0.0, 0.0, 0.0);
    let mut u = 1.0;
    let mut zk = 1.0; // zeta^-k
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        if k > 0 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0));
            zk /= zeta;
        }
        let v = if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u };
        let tu = u * zk;
        let tv = v * zk;
        let mag = tu.abs().max(tv.abs());
        if mag > last {
            break;
        }
        last = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * tu;
            r += sign * tv;
        } else {
            q += sign * tu;
            s += sign * tv;
        }
        if mag < 1e-17 {
            break;
        }
    }
    let theta = zeta + PI / 4.0;
    let (sn, cs) = theta.sin_cos();
    let pref = 1.0 / PI.sqrt();
    let z4 = z.powf(0.25);
    let ai = pref / z4 * (sn * p - cs * q);
    let aip = -pref * z4 * (cs * r + sn * s);
    (ai, aip)
}

/// Ai via `K_{1/3}` and `K_{2/3}` of ζ = (2/3) x^(3/2), using Steed's
/// continued fraction (valid for ζ >= 2).
fn bessel_k(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (k13, k43) = scaled_k(1.0 / 3.0, zeta);
    let k23 = k43 - 2.0 / (3.0 * zeta) * k13;
    let decay = (-zeta).exp();
    let ai = (x / 3.0).sqrt() / PI * k13 * decay;
    let aip = -x / (PI * 3f64.sqrt()) * k23 * decay;
    (ai, aip)
}

/// `e^x K_mu(x)` and `e^x K_{mu+1}(x)` for |mu| <= 1/2, x >= 2.
fn scaled_k(mu: f64, x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000usize {
        a -= 2.0 * (i - 1) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (mu + x + 0.5 - h) / x;
    (kmu, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, Ai, Ai') from a 30-digit reference evaluation
    const TABLE: &[(f64, f64, f64)] = &[
        (-12.0, -0.066555175054373129474, 1.0231104533679707299),
        (-10.5, -0.31192603505105060085, 0.090957487390681672879),
        (-9.0, -0.022133721547341403674, -0.97566398092633159471),
        (-7.3, 0.33577037051514727697, -0.18009580448329365985),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-3.2, -0.41744342056415137673, 0.065031146995262914081),
        (-2.0, 0.22740742820168557599, 0.61825902074169104141),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (-0.5, 0.4757280916105395888, -0.20408167033954738614),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (0.5, 0.23169360648083348977, -0.22491053266468389314),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.0, 0.034924130423274379135, -0.053090384433653631704),
        (2.08, 0.030894392489319441285, -0.047727576240678392779),
        (2.5, 0.015725923380470489995, -0.026250881035903230365),
        (3.7, 0.0017455720006099785209, -0.0034669407490276270702),
        (4.5, 0.00033025032351430898366, -0.00071786656755750888869),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
        (12.0, 1.393184688875360839e-13, -4.854736554985308463e-13),
        (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
        (50.0, 4.5849417240748284783e-104, -3.2443318198287992961e-103),
    ];

    #[test]
    fn reference_values() {
        for &(x, ai, aip) in TABLE {
            let got = airy_ai(x);
            assert!(!got.underflow);
            let tol = if x.abs() <= 12.0 { 1e-12 } else { 1e-11 };
            assert!((got.ai - ai).abs() <= tol * ai.abs(), "Ai({x}) = {} vs {ai}", got.ai);
            assert!((got.aip - aip).abs() <= tol * aip.abs(), "Ai'({x}) = {} vs {aip}", got.aip);
        }
    }

    #[test]
    fn origin_constants() {
        let a = airy_ai(0.0);
        assert!((a.ai - 0.355028053887817).abs() < 1e-15);
        assert!((a.aip + 0.258819403792807).abs() < 1e-15);
    }

    #[test]
    fn regimes_agree_at_switch_points() {
        let (a0, ap0) = maclaurin(MACLAURIN_LO);
        let pairs = [
            (oscillatory(-ASYMPTOTIC_LO), march(MACLAURIN_LO, a0, ap0, ASYMPTOTIC_LO)),
            (maclaurin(9f64.cbrt()), bessel_k(9f64.cbrt())),
            (maclaurin(-2.0), march(MACLAURIN_LO, a0, ap0, -2.0)),
        ];
        for ((a, ap), (b, bp)) in pairs {
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} vs {b}");
            assert!((ap - bp).abs() <= 1e-12 * ap.abs(), "{ap} vs {bp}");
        }
    }

    #[test]
    fn monotone_decay_right_of_one() {
        let mut prev = airy_ai(1.0).ai;
        let mut x = 1.0;
        while x < 100.0 {
            x += 0.25;
            let a = airy_ai(x).ai;
            assert!(a < prev && a >= 0.0, "x={x}");
            prev = a;
        }
    }

    #[test]
    fn underflow_flag() {
        let a = airy_ai(150.0);
        assert!(a.underflow);
        assert_eq!((a.ai, a.aip), (0.0, 0.0));
    }

    #[test]
    fn wronskian_style_identity() {
        // d/dx (Ai'^2 - x Ai^2) = -Ai^2
        let h = 1e-4;
        for x in [-8.0, -2.5, 0.7, 3.3] {
            let g = |t: f64| {
                let a = airy_ai(t);
                a.aip * a.aip - t * a.ai * a.ai
            };
            let d = (g(x + h) - g(x - h)) / (2.0 * h);
            let a = airy_ai(x).ai;
            assert!((d + a * a).abs() < 1e-7, "x={x}");
        }
    }
}
