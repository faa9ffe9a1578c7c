//! Integer combinatorics shared by the state counts and the amplitudes.

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    num_integer::binomial(n as u128, k as u128)
}

/// The `n`-th Catalan number.
pub fn catalan(n: usize) -> u128 {
    let n = n as i64;
    binomial(2 * n, n) / (n as u128 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(3, 5), 0);
        let c: Vec<u128> = (0..8).map(catalan).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132, 429]);
    }
}
