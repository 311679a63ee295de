use super::{OracleError, PrimeField, DEFAULT_BUDGET};

fn det_mod(f: PrimeField, n: usize, m: &[u64]) -> u64 {
    match n {
        1 => m[0],
        2 => f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])),
        3 => {
            let minor = |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(m[a], m[d]), f.mul(m[b], m[c]));
            let t0 = f.mul(m[0], minor(4, 5, 7, 8));
            let t1 = f.mul(m[1], minor(3, 5, 6, 8));
            let t2 = f.mul(m[2], minor(3, 4, 6, 7));
            f.add(f.sub(t0, t1), t2)
        }
        _ => unreachable!(),
    }
}

/// Histogram of determinants over all `n×n` matrices over `F_p`.
fn scan(n: u32, p: u64, budget: u64) -> Result<Vec<u64>, OracleError> {
    if !(1..=3).contains(&n) {
        return Err(OracleError::UnsupportedSize(n));
    }
    let f = PrimeField::new(p)?;
    let cells = (n * n) as usize;
    let work = (p as u128).pow(cells as u32);
    if work > budget as u128 {
        return Err(OracleError::TooLarge { work, budget });
    }
    let mut hist = vec![0u64; p as usize];
    let mut m = vec![0u64; cells];
    loop {
        hist[det_mod(f, n as usize, &m) as usize] += 1;
        // odometer increment
        let mut i = 0;
        loop {
            if i == cells {
                return Ok(hist);
            }
            m[i] += 1;
            if m[i] < p {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// `#GL_n(F_p)` by scanning all matrices.
pub fn enumerate_gl(n: u32, p: u64) -> Result<u64, OracleError> {
    enumerate_gl_with_budget(n, p, DEFAULT_BUDGET)
}

pub fn enumerate_gl_with_budget(n: u32, p: u64, budget: u64) -> Result<u64, OracleError> {
    let hist = scan(n, p, budget)?;
    Ok(hist[1..].iter().sum())
}

/// `#SL_n(F_p)` by scanning all matrices.
pub fn enumerate_sl(n: u32, p: u64) -> Result<u64, OracleError> {
    enumerate_sl_with_budget(n, p, DEFAULT_BUDGET)
}

pub fn enumerate_sl_with_budget(n: u32, p: u64, budget: u64) -> Result<u64, OracleError> {
    let hist = scan(n, p, budget)?;
    Ok(hist[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_gl(1, 5).unwrap(), 4);
        assert_eq!(enumerate_gl(2, 3).unwrap(), 48);
        assert_eq!(enumerate_sl(2, 3).unwrap(), 24);
        assert_eq!(enumerate_gl(2, 2).unwrap(), 6);
        assert_eq!(enumerate_gl(3, 2).unwrap(), 168);
    }

    #[test]
    fn budget_and_size_limits() {
        assert_eq!(enumerate_gl_with_budget(3, 7, 1000).unwrap_err().code(), "TooLarge");
        assert_eq!(enumerate_gl(4, 2).unwrap_err().code(), "UnsupportedSize");
        assert_eq!(enumerate_gl(2, 4).unwrap_err().code(), "NotPrime");
    }
}
