//! Exact squared Euclidean distance transform by lower envelopes of
//! parabolas, one dimension at a time.

/// 1-d transform of `f` (in squared cell units) into `d`. `v` and `z` are
/// scratch buffers of length `n` and `n + 1`.
fn envelope(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k: usize = 0;
    let mut first = None;
    for q in 0..n {
        if f[q].is_finite() {
            first = Some(q);
            break;
        }
    }
    let Some(q0) = first else {
        d.iter_mut().for_each(|x| *x = f64::INFINITY);
        return;
    };
    v[0] = q0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in q0 + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        let qf = q as f64;
        let cut = |p: usize| {
            let pf = p as f64;
            ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * (qf - pf))
        };
        let mut s = cut(v[k]);
        while s <= z[k] {
            k -= 1;
            s = cut(v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    let mut k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let p = v[k] as f64;
        *out = (qf - p) * (qf - p) + f[v[k]];
    }
}

/// Squared distance (in cell units) from each cell to the nearest on-cell.
/// Row-major `nx × ny`; infinite everywhere when no cell is on.
pub(crate) fn squared_edt(mask: &[bool], nx: usize, ny: usize) -> Vec<f64> {
    let mut g = vec![f64::INFINITY; nx * ny];
    let n = nx.max(ny);
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for i in 0..nx {
        for j in 0..ny {
            f[j] = if mask[j * nx + i] { 0.0 } else { f64::INFINITY };
        }
        envelope(&f[..ny], &mut d[..ny], &mut v[..ny], &mut z[..ny + 1]);
        for j in 0..ny {
            g[j * nx + i] = d[j];
        }
    }
    for j in 0..ny {
        let row = &mut g[j * nx..(j + 1) * nx];
        f[..nx].copy_from_slice(row);
        envelope(&f[..nx], &mut d[..nx], &mut v[..nx], &mut z[..nx + 1]);
        row.copy_from_slice(&d[..nx]);
    }
    g
}
