//! Text formatting of floats with 15 significant digits (C's `%.15g`).

const DIGITS: i32 = 15;

pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(0.5), "0.5");
        assert_eq!(sig15(-2.0), "-2");
        assert_eq!(sig15(0.029437251522859414), "0.0294372515228594");
        assert_eq!(sig15(1.8540746773013719), "1.85407467730137");
        assert_eq!(sig15(3.940759742227115e-6), "3.94075974222712e-06");
        assert_eq!(sig15(1e20), "1e+20");
        assert_eq!(sig15(123456.0), "123456");
        assert_eq!(sig15(f64::NAN), "NaN");
    }
}
