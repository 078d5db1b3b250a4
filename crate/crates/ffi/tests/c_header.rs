//! Compiles a small C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "landen_kdv.h"

int main(void) {
    double k = 0.0;
    if (lk_complete_k(0.5, &k) != LK_STATUS_OK || fabs(k - 1.8540746773013719) > 1e-15) return 1;

    LkLandenMap *map = NULL;
    if (lk_landen_map_new(2, 0.5, &map) != LK_STATUS_OK) return 2;
    double gamma = 0.0, a = 1.0;
    lk_landen_map_gamma(map, &gamma);
    lk_landen_map_velocity_constant(map, &a);
    lk_landen_map_free(map);
    if (fabs(gamma - 0.58578643762690495) > 1e-15 || fabs(a) > 1e-13) return 3;

    if (lk_landen_map_new(1, 2.0, &map) != LK_STATUS_DOMAIN) return 4;
    char msg[128];
    if (lk_last_error(msg, sizeof msg) == 0) return 5;

    LkWave *wave = NULL;
    double u = 0.0;
    if (lk_wave_upm(1.5, 0.5, LK_SIGN_PLUS, LK_SCALING_STANDARD, &wave) != LK_STATUS_OK) return 6;
    lk_wave_value(wave, 0.0, 0.0, &u);
    lk_wave_free(wave);
    printf("%.17g %.17g\n", gamma, u);
    return 0;
}
"#;

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    let lib = profile_dir().join("liblanden_kdv_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke program exited with {:?}", run.status.code());
    let text = String::from_utf8(run.stdout).unwrap();
    let mut fields = text.split_whitespace().map(|f| f.parse::<f64>().unwrap());
    assert_eq!(fields.next(), Some(0.58578643762690495));
    assert!(fields.next().unwrap().is_finite());
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}
