//! Value parsers for clap: complex numbers, windows, resolutions, lists.

use kleinian::exclusion::Window;
use kleinian::C64;

/// Accepts `2`, `-1.5+0.60666i`, `0.5i`, `-i`, `1e-3-2e-1i` or `re,im`.
pub fn complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some((re, im)) = t.split_once(',') {
        return Ok(C64::new(real(re)?, real(im)?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(real(&t)?, 0.0));
    };
    // Split at the last sign that is not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x)?,
    };
    Ok(C64::new(re, im))
}

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("not finite: {s:?}"));
    }
    Ok(v)
}

/// `re_min,re_max,im_min,im_max`.
pub fn window(s: &str) -> Result<Window, String> {
    let v = list_f64(s)?;
    let [re_min, re_max, im_min, im_max] = v[..] else {
        return Err("window needs four numbers re_min,re_max,im_min,im_max".into());
    };
    Ok(Window { re_min, re_max, im_min, im_max })
}

/// `WIDTHxHEIGHT`.
pub fn resolution(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("resolution must look like 800x600")?;
    let w: usize = w.parse().map_err(|_| format!("bad width {w:?}"))?;
    let h: usize = h.parse().map_err(|_| format!("bad height {h:?}"))?;
    if w == 0 || h == 0 || w * h > 50_000_000 {
        return Err("resolution out of range".into());
    }
    Ok((w, h))
}

pub fn list_f64(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(real).collect()
}

/// `p,q,r` orders, each at least 2.
pub fn orders(s: &str) -> Result<[u32; 3], String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| format!("bad order {x:?}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [p, q, r] if p >= 2 && q >= 2 && r >= 2 => Ok([p, q, r]),
        _ => Err("orders must be three integers ≥ 2".into()),
    }
}

/// Three angles, each a decimal or a `kpi/n` form.
pub fn angles(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| kleinian::tables::parse_angle(x, None).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "need three angles".to_string())
}

/// Four complex matrix entries `a;b;c;d`.
pub fn matrix(s: &str) -> Result<[C64; 4], String> {
    let v: Vec<C64> = s.split(';').map(complex).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "matrix needs four entries a;b;c;d".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(complex("-1.5+0.60666i").unwrap(), C64::new(-1.5, 0.60666));
        assert_eq!(complex("0.5i").unwrap(), C64::new(0.0, 0.5));
        assert_eq!(complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(complex("1e-3-2e-1i").unwrap(), C64::new(1e-3, -0.2));
        assert_eq!(complex("-3,4").unwrap(), C64::new(-3.0, 4.0));
        assert!(complex("abc").is_err());
        assert!(complex("").is_err());
    }

    #[test]
    fn other_forms() {
        assert_eq!(window("-4,4,-3,3").unwrap().im_min, -3.0);
        assert!(window("1,2,3").is_err());
        assert_eq!(resolution("800x600").unwrap(), (800, 600));
        assert!(resolution("0x5").is_err());
        assert_eq!(orders("2,3,7").unwrap(), [2, 3, 7]);
        assert!(orders("1,3,7").is_err());
        let a = angles("pi/3,pi/2,0.5").unwrap();
        assert!((a[0] - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
        assert_eq!(matrix("1;1;0;1").unwrap()[1], C64::new(1.0, 0.0));
    }
}
