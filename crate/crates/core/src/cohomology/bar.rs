//! Inhomogeneous bar cochains. Only practical for very small groups and
//! degrees; kept as an independent check on the resolution-based complex.

use num_bigint::BigInt;

use crate::gmodules::GModule;
use crate::linalg::IntMatrix;

fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &g| acc * n + g)
}

fn tuple_of(mut idx: usize, len: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

/// `δ: C^i → C^{i+1}` with `C^i = M^{|H|^i}`, for a module over `H`:
///
/// `(δf)(g_1..g_{i+1}) = g_1 f(g_2..) + Σ_j (-1)^j f(..g_j g_{j+1}..) + (-1)^{i+1} f(g_1..g_i)`
pub fn bar_differential(m: &GModule, i: usize) -> IntMatrix {
    let grp = m.group();
    let n = grp.order();
    let k = m.gens();
    let src = n.pow(i as u32);
    let dst = n.pow(i as u32 + 1);
    let mut d = IntMatrix::zeros(dst * k, src * k);
    let id = IntMatrix::identity(k);
    for row in 0..dst {
        let t = tuple_of(row, i + 1, n);
        d.add_block(row * k, tuple_index(&t[1..], n) * k, m.action(t[0]));
        for j in 0..i {
            let mut s = Vec::with_capacity(i);
            s.extend_from_slice(&t[..j]);
            s.push(grp.mul(t[j], t[j + 1]));
            s.extend_from_slice(&t[j + 2..]);
            let sign = if j % 2 == 0 { -1 } else { 1 };
            d.add_block(row * k, tuple_index(&s, n) * k, &id.scaled(&BigInt::from(sign)));
        }
        let sign = if i.is_multiple_of(2) { -1 } else { 1 };
        d.add_block(row * k, tuple_index(&t[..i], n) * k, &id.scaled(&BigInt::from(sign)));
    }
    d
}
