use super::Scalar;

/// Determinant of a small square matrix given as rows.
pub fn det<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    match n {
        0 => return T::one(),
        1 => return m[0][0].clone(),
        2 => return m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        3 => {
            let t = |i: usize, j: usize| m[i][j].clone();
            return t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1))
                - t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0))
                + t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0));
        }
        _ => {}
    }
    let mut acc = T::one();
    for c in 0..n {
        let Some(p) =
            (c..n).filter(|&i| !m[i][c].is_zero()).max_by(|&i, &j| m[i][c].magnitude().total_cmp(&m[j][c].magnitude()))
        else {
            return T::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let piv = m[c][c].clone();
        acc = acc * piv.clone();
        let (top, bottom) = m.split_at_mut(c + 1);
        for row in bottom {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone() / piv.clone();
            for j in c + 1..n {
                let v = row[j].clone() - f.clone() * top[c][j].clone();
                row[j] = v;
            }
        }
    }
    acc
}

/// Greedy maximal linearly independent subset of `vectors`, as indices in
/// input order. A vector counts as dependent when elimination against the
/// earlier picks leaves it exactly zero (rational mode) or leaves a residual
/// below `rel_tol` times its original size (float mode).
pub fn independent_columns<T: Scalar>(vectors: &[Vec<T>], rel_tol: f64) -> Vec<usize> {
    // reduced rows: (pivot position, row normalised to 1 at the pivot)
    let mut basis: Vec<(usize, Vec<T>)> = Vec::new();
    let mut picked = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let size = v.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
        let mut w = v.clone();
        for (p, b) in &basis {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (wi, bi) in w.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *wi = wi.clone() - f.clone() * bi.clone();
                }
            }
        }
        let Some(p) =
            (0..w.len()).filter(|&i| !w[i].is_zero()).max_by(|&i, &j| w[i].magnitude().total_cmp(&w[j].magnitude()))
        else {
            continue;
        };
        if T::MODE == super::Mode::Float && w[p].magnitude() <= rel_tol * size {
            continue;
        }
        let inv = T::one() / w[p].clone();
        for x in w.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        basis.push((p, w));
        picked.push(idx);
    }
    picked
}
