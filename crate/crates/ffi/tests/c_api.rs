use std::ffi::CStr;
use std::ptr;

use landen_kdv_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe {
        lk_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn complete_k_and_jacobi() {
    let mut k = 0.0;
    assert_eq!(unsafe { lk_complete_k(0.5, &mut k) }, LkStatus::Ok);
    assert!((k - 1.8540746773013719).abs() < 1e-15);

    let (mut sn, mut cn, mut dn) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { lk_jacobi(0.5, 0.3, &mut sn, &mut cn, &mut dn) }, LkStatus::Ok);
    assert!((sn - 0.4742156227118206).abs() < 1e-15);
    assert!((cn - 0.8804087364264624).abs() < 1e-15);
    assert!((dn - 0.9656789647459512).abs() < 1e-15);
}

#[test]
fn errors_carry_status_and_message() {
    let mut k = 0.0;
    assert_eq!(unsafe { lk_complete_k(1.5, &mut k) }, LkStatus::Domain);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { lk_complete_k(0.5, ptr::null_mut()) }, LkStatus::NullPointer);
    assert_eq!(last_error(), "k is null");

    let mut map = ptr::null_mut();
    assert_eq!(unsafe { lk_landen_map_new(0, 0.5, &mut map) }, LkStatus::Domain);
    assert!(map.is_null());
    let name = unsafe { CStr::from_ptr(lk_status_name(LkStatus::Domain)) };
    assert_eq!(name.to_str().unwrap(), "domain error");
}

#[test]
fn error_message_truncates() {
    let mut k = 0.0;
    unsafe { lk_complete_k(f64::NAN, &mut k) };
    let full = unsafe { lk_last_error(ptr::null_mut(), 0) };
    let mut buf = [1 as std::ffi::c_char; 4];
    assert_eq!(unsafe { lk_last_error(buf.as_mut_ptr(), buf.len()) }, full);
    assert_eq!(buf[3], 0);
}

#[test]
fn landen_map_handle() {
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { lk_landen_map_new(3, 0.9, &mut map) }, LkStatus::Ok);
    let (mut gamma, mut m_tilde, mut a) = (0.0, 0.0, 0.0);
    let mut count = 0usize;
    unsafe {
        assert_eq!(lk_landen_map_gamma(map, &mut gamma), LkStatus::Ok);
        assert_eq!(lk_landen_map_m_tilde(map, &mut m_tilde), LkStatus::Ok);
        assert_eq!(lk_landen_map_velocity_constant(map, &mut a), LkStatus::Ok);
        assert_eq!(lk_landen_map_cyclic_count(map, &mut count), LkStatus::Ok);
    }
    assert!((gamma - 0.54111043038466705).abs() < 1e-14);
    assert!((m_tilde - 0.043110658701228278).abs() < 1e-14);
    assert!((a + 0.19458101828867695).abs() < 1e-12);
    assert_eq!(count, 2);

    let mut small = [0.0; 1];
    assert_eq!(
        unsafe { lk_landen_map_cyclic_constants(map, small.as_mut_ptr(), small.len()) },
        LkStatus::BufferTooSmall
    );
    let mut values = [0.0; 2];
    assert_eq!(unsafe { lk_landen_map_cyclic_constants(map, values.as_mut_ptr(), 2) }, LkStatus::Ok);
    for v in values {
        assert!((v - 1.0278494878841858).abs() < 1e-13);
    }
    unsafe { lk_landen_map_free(map) };
    unsafe { lk_landen_map_free(ptr::null_mut()) };

    let mut dual = 0.0;
    assert_eq!(unsafe { lk_a_constant(3, 0.9, &mut dual) }, LkStatus::Ok);
    assert!((dual - a).abs() < 1e-15);
}

#[test]
fn wave_handles() {
    let mut wave = ptr::null_mut();
    assert_eq!(unsafe { lk_wave_up(1.0, 0.0, 0.5, 1, &mut wave) }, LkStatus::Ok);
    let (mut u, mut v, mut period, mut res) = (0.0, 0.0, 0.0, 1.0);
    let mut aliasing = -1;
    unsafe {
        assert_eq!(lk_wave_value(wave, 0.0, 0.0, &mut u), LkStatus::Ok);
        assert_eq!(lk_wave_velocity(wave, &mut v), LkStatus::Ok);
        assert_eq!(lk_wave_period(wave, &mut period), LkStatus::Ok);
        assert_eq!(lk_wave_residual(wave, 256, 0.0, &mut res, &mut aliasing), LkStatus::Ok);
        assert_eq!(lk_wave_residual(wave, 100, 0.0, &mut res, ptr::null_mut()), LkStatus::Grid);
        lk_wave_free(wave);
    }
    assert_eq!(u, -2.0);
    assert_eq!(v, 6.0);
    assert!((period - 2.0 * 1.8540746773013719).abs() < 1e-14);
    assert_eq!(aliasing, 0);

    let mut pm = ptr::null_mut();
    assert_eq!(unsafe { lk_wave_upm(1.5, 0.5, LkSign::Minus, LkScaling::Standard, &mut pm) }, LkStatus::Ok);
    let mut res = 1.0;
    assert_eq!(unsafe { lk_wave_residual(pm, 256, 0.3, &mut res, ptr::null_mut()) }, LkStatus::Ok);
    assert!(res < 1e-7, "{res}");
    unsafe { lk_wave_free(pm) };

    let mut soliton = ptr::null_mut();
    assert_eq!(unsafe { lk_wave_up(1.0, 0.0, 1.0, 1, &mut soliton) }, LkStatus::Ok);
    assert_eq!(unsafe { lk_wave_period(soliton, &mut period) }, LkStatus::Domain);
    unsafe { lk_wave_free(soliton) };
}

#[test]
fn equivalence() {
    let times = [0.0, 0.1, 0.5];
    let mut dev = 1.0;
    let status = unsafe { lk_equivalence_check(1.7, -0.4, 0.9, 5, 256, times.as_ptr(), times.len(), &mut dev) };
    assert_eq!(status, LkStatus::Ok);
    assert!(dev < 1e-9, "{dev}");
    let status = unsafe { lk_equivalence_check(1.0, 0.0, 0.5, 2, 256, ptr::null(), 0, &mut dev) };
    assert_eq!(status, LkStatus::Config);
}
