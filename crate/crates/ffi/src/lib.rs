//! C ABI over `landen-kdv`.
//!
//! Every function returns an [`LkStatus`]; results go through out-pointers. On failure
//! the message is kept per thread and can be read with [`lk_last_error`]. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use landen_kdv::verify;
use landen_kdv::waves::{PlusMinusWave, SuperposedWave};
use landen_kdv::{
    DnWaveParams, Error, LandenMap, PeriodicGrid, PmWaveParams, Sign, VelocityScaling, WaveFamily,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LkStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Consistency = 3,
    PeriodMismatch = 4,
    Grid = 5,
    Config = 6,
    Instability = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LkSign {
    Plus = 0,
    Minus = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LkScaling {
    /// Time enters as `q1·α²·t`.
    Standard = 0,
    /// Time enters as `q1·α·t`.
    AsWritten = 1,
}

/// Opaque Landen map for a fixed `(p, m)`.
pub struct LkLandenMap(LandenMap);

/// Opaque exact wave (`u1`, `u_p` or `u±`).
pub struct LkWave(Box<dyn WaveFamily>);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> LkStatus {
    match err {
        Error::Domain(_) => LkStatus::Domain,
        Error::Consistency(_) => LkStatus::Consistency,
        Error::PeriodMismatch { .. } => LkStatus::PeriodMismatch,
        Error::Grid(_) => LkStatus::Grid,
        Error::Config(_) => LkStatus::Config,
        Error::Instability { .. } => LkStatus::Instability,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Buffer(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LkStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("{name} is null"));
            LkStatus::NullPointer
        }
        Ok(Err(Fail::Buffer(needed))) => {
            set_error(format!("buffer too small, need {needed} elements"));
            LkStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".into());
            LkStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

/// Copies the last error message of this thread into `buf` as a NUL-terminated string,
/// truncating if needed. Returns the full message length in bytes, excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lk_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn lk_status_name(status: LkStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        LkStatus::Ok => b"ok\0",
        LkStatus::NullPointer => b"null pointer\0",
        LkStatus::Domain => b"domain error\0",
        LkStatus::Consistency => b"consistency error\0",
        LkStatus::PeriodMismatch => b"period mismatch\0",
        LkStatus::Grid => b"grid error\0",
        LkStatus::Config => b"configuration error\0",
        LkStatus::Instability => b"instability\0",
        LkStatus::BufferTooSmall => b"buffer too small\0",
        LkStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Complete elliptic integral `K(m)` for `0 ≤ m < 1`.
///
/// # Safety
/// `k` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_complete_k(m: f64, k: *mut f64) -> LkStatus {
    guard(|| {
        *out(k, "k")? = landen_kdv::complete_k(m)?;
        Ok(())
    })
}

/// `sn`, `cn`, `dn` of `(x | m)` for `0 ≤ m ≤ 1`.
///
/// # Safety
/// Each output pointer must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_jacobi(x: f64, m: f64, sn: *mut f64, cn: *mut f64, dn: *mut f64) -> LkStatus {
    guard(|| {
        let (sn, cn, dn) = (out(sn, "sn")?, out(cn, "cn")?, out(dn, "dn")?);
        let t = landen_kdv::jacobi(x, m)?;
        (*sn, *cn, *dn) = (t.sn, t.cn, t.dn);
        Ok(())
    })
}

/// Builds the order-`p` Landen map for `0 < m < 1`.
///
/// # Safety
/// `map` must be null or valid for writes. The handle is freed with [`lk_landen_map_free`].
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_new(p: usize, m: f64, map: *mut *mut LkLandenMap) -> LkStatus {
    guard(|| {
        let slot = out(map, "map")?;
        *slot = Box::into_raw(Box::new(LkLandenMap(LandenMap::new(p, m)?)));
        Ok(())
    })
}

/// # Safety
/// `map` must be null or a handle from [`lk_landen_map_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_free(map: *mut LkLandenMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle; `gamma` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_gamma(map: *const LkLandenMap, gamma: *mut f64) -> LkStatus {
    guard(|| {
        *out(gamma, "gamma")? = handle(map, "map")?.0.gamma();
        Ok(())
    })
}

/// # Safety
/// `map` must be a live handle; `m_tilde` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_m_tilde(map: *const LkLandenMap, m_tilde: *mut f64) -> LkStatus {
    guard(|| {
        *out(m_tilde, "m_tilde")? = handle(map, "map")?.0.m_tilde();
        Ok(())
    })
}

/// Velocity constant `A(p, m)` from the closed-form relation.
///
/// # Safety
/// `map` must be a live handle; `a` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_velocity_constant(map: *const LkLandenMap, a: *mut f64) -> LkStatus {
    guard(|| {
        *out(a, "a")? = handle(map, "map")?.0.velocity_constant();
        Ok(())
    })
}

/// Number of cyclic constants, `p − 1`.
///
/// # Safety
/// `map` must be a live handle; `count` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_cyclic_count(map: *const LkLandenMap, count: *mut usize) -> LkStatus {
    guard(|| {
        *out(count, "count")? = handle(map, "map")?.0.cyclic_constants().len();
        Ok(())
    })
}

/// Copies `a_p(1), …, a_p(p − 1)` into `values`.
///
/// # Safety
/// `map` must be a live handle; `values` null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lk_landen_map_cyclic_constants(
    map: *const LkLandenMap,
    values: *mut f64,
    len: usize,
) -> LkStatus {
    guard(|| {
        let constants = handle(map, "map")?.0.cyclic_constants();
        if constants.is_empty() {
            return Ok(());
        }
        if values.is_null() {
            return Err(Fail::Null("values"));
        }
        if len < constants.len() {
            return Err(Fail::Buffer(constants.len()));
        }
        ptr::copy_nonoverlapping(constants.as_ptr(), values, constants.len());
        Ok(())
    })
}

/// `A(p, m)` after the closed form and the residual fit agree.
///
/// # Safety
/// `a` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_a_constant(p: usize, m: f64, a: *mut f64) -> LkStatus {
    guard(|| {
        *out(a, "a")? = landen_kdv::a_constant(p, m)?;
        Ok(())
    })
}

unsafe fn store_wave(wave: *mut *mut LkWave, w: Box<dyn WaveFamily>) -> Result<(), Fail> {
    *out(wave, "wave")? = Box::into_raw(Box::new(LkWave(w)));
    Ok(())
}

/// Superposed wave `u_p`; `p = 1` gives the cnoidal wave `u1`.
///
/// # Safety
/// `wave` must be null or valid for writes. Free the handle with [`lk_wave_free`].
#[no_mangle]
pub unsafe extern "C" fn lk_wave_up(alpha: f64, beta: f64, m: f64, p: usize, wave: *mut *mut LkWave) -> LkStatus {
    guard(|| {
        out(wave, "wave")?;
        let w = SuperposedWave::new(DnWaveParams::new(alpha, beta, m, p)?)?;
        store_wave(wave, Box::new(w))
    })
}

/// The `u±` wave.
///
/// # Safety
/// `wave` must be null or valid for writes. Free the handle with [`lk_wave_free`].
#[no_mangle]
pub unsafe extern "C" fn lk_wave_upm(
    alpha: f64,
    m: f64,
    sign: LkSign,
    scaling: LkScaling,
    wave: *mut *mut LkWave,
) -> LkStatus {
    guard(|| {
        out(wave, "wave")?;
        let sign = match sign {
            LkSign::Plus => Sign::Plus,
            LkSign::Minus => Sign::Minus,
        };
        let scaling = match scaling {
            LkScaling::Standard => VelocityScaling::Standard,
            LkScaling::AsWritten => VelocityScaling::AsWritten,
        };
        let w = PlusMinusWave::new(PmWaveParams::new(alpha, m, sign)?, scaling)?;
        store_wave(wave, Box::new(w))
    })
}

/// # Safety
/// `wave` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lk_wave_free(wave: *mut LkWave) {
    if !wave.is_null() {
        drop(Box::from_raw(wave));
    }
}

/// # Safety
/// `wave` must be a live handle; `value` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_wave_value(wave: *const LkWave, x: f64, t: f64, value: *mut f64) -> LkStatus {
    guard(|| {
        *out(value, "value")? = handle(wave, "wave")?.0.value(x, t);
        Ok(())
    })
}

/// # Safety
/// `wave` must be a live handle; `velocity` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_wave_velocity(wave: *const LkWave, velocity: *mut f64) -> LkStatus {
    guard(|| {
        *out(velocity, "velocity")? = handle(wave, "wave")?.0.velocity();
        Ok(())
    })
}

/// Spatial period; `LK_STATUS_DOMAIN` when the wave is aperiodic (`m = 1`).
///
/// # Safety
/// `wave` must be a live handle; `period` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_wave_period(wave: *const LkWave, period: *mut f64) -> LkStatus {
    guard(|| {
        let slot = out(period, "period")?;
        *slot = handle(wave, "wave")?
            .0
            .spatial_period()
            .ok_or_else(|| Error::Domain("wave has no finite period".into()))?;
        Ok(())
    })
}

/// Normalized KdV residual of the wave on `n` points over one period at time `t`.
/// `aliasing` (optional) receives 1 when the top third of the spectrum holds too much energy.
///
/// # Safety
/// `wave` must be a live handle; `normalized` null or valid for writes; `aliasing` null or valid.
#[no_mangle]
pub unsafe extern "C" fn lk_wave_residual(
    wave: *const LkWave,
    n: usize,
    t: f64,
    normalized: *mut f64,
    aliasing: *mut c_int,
) -> LkStatus {
    guard(|| {
        let slot = out(normalized, "normalized")?;
        let w = &handle(wave, "wave")?.0;
        let period = w.spatial_period().ok_or_else(|| Error::Domain("wave has no finite period".into()))?;
        let report = verify::kdv_residual(w.as_ref(), &PeriodicGrid::new(period, n)?, t)?;
        *slot = report.normalized;
        if let Some(a) = aliasing.as_mut() {
            *a = c_int::from(report.aliasing_warning);
        }
        Ok(())
    })
}

/// Max deviation between `u_p` and its single-`dn²` Landen form over `n` points of one
/// `dn` period `2K/α`, at each of the `count` times.
///
/// # Safety
/// `times` must point to `count` readable values; `deviation` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lk_equivalence_check(
    alpha: f64,
    beta: f64,
    m: f64,
    p: usize,
    n: usize,
    times: *const f64,
    count: usize,
    deviation: *mut f64,
) -> LkStatus {
    guard(|| {
        let slot = out(deviation, "deviation")?;
        if times.is_null() && count > 0 {
            return Err(Fail::Null("times"));
        }
        let times = if count == 0 { &[][..] } else { std::slice::from_raw_parts(times, count) };
        let map = LandenMap::new(p, m)?;
        let params = DnWaveParams::with_map(alpha, beta, &map)?;
        let period = 2.0 * map.modulus().quarter_period()? / alpha;
        *slot = verify::equivalence_check(&params, &map, &PeriodicGrid::new(period, n)?, times)?;
        Ok(())
    })
}
