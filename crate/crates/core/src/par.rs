//! Row-wise evaluation of 2D fields. With the `parallel` feature rows are
//! distributed over the rayon pool; each row is computed by the same code
//! either way, so the output does not depend on scheduling.

use alloc::vec::Vec;

#[cfg(feature = "parallel")]
pub(crate) fn rows<T, F>(ny: usize, nx: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync,
{
    use rayon::prelude::*;
    let rows: Vec<Vec<T>> = (0..ny)
        .into_par_iter()
        .map(|j| (0..nx).map(|i| f(i, j)).collect())
        .collect();
    rows.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn rows<T, F>(ny: usize, nx: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync,
{
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(f(i, j));
        }
    }
    out
}

/// Ordered map over independent items.
#[cfg(feature = "parallel")]
pub(crate) fn map<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync,
{
    use rayon::prelude::*;
    items.par_iter().map(&f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn row_major_order() {
        let v = super::rows(3, 4, |i, j| 10 * j + i);
        assert_eq!(v, [0, 1, 2, 3, 10, 11, 12, 13, 20, 21, 22, 23]);
        assert_eq!(super::map(&[1, 2, 3], |x| x * x), [1, 4, 9]);
    }
}
