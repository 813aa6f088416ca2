use super::FiniteGroup;
use crate::error::{Error, Result};

pub const PRESET_NAMES: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "V4", "S3", "D4",
    "Q8", "C2xC2xC2", "C2xC4", "A4",
];

fn cycle(degree: usize, points: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for (i, &x) in points.iter().enumerate() {
        p[x] = points[(i + 1) % points.len()];
    }
    p
}

fn product(degree: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for c in cycles {
        let q = cycle(degree, c);
        p = p.iter().map(|&x| q[x]).collect();
    }
    p
}

/// Generating permutations of a catalog group.
pub fn preset_generators(name: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=12).contains(&n) {
            let gens = if n == 1 {
                vec![vec![0]]
            } else {
                vec![cycle(n, &(0..n).collect::<Vec<_>>())]
            };
            return Ok((n, gens));
        }
    }
    let out = match name {
        "V4" => (4, vec![product(4, &[&[0, 1], &[2, 3]]), product(4, &[&[0, 2], &[1, 3]])]),
        "S3" => (3, vec![cycle(3, &[0, 1]), cycle(3, &[0, 1, 2])]),
        "D4" => (4, vec![cycle(4, &[0, 1, 2, 3]), cycle(4, &[0, 2])]),
        // Left-regular action of {1,-1,i,-i,j,-j,k,-k} on itself.
        "Q8" => (
            8,
            vec![vec![2, 3, 1, 0, 6, 7, 5, 4], vec![4, 5, 7, 6, 1, 0, 2, 3]],
        ),
        "C2xC2xC2" => (
            6,
            vec![cycle(6, &[0, 1]), cycle(6, &[2, 3]), cycle(6, &[4, 5])],
        ),
        "C2xC4" => (6, vec![cycle(6, &[0, 1]), cycle(6, &[2, 3, 4, 5])]),
        "A4" => (4, vec![cycle(4, &[0, 1, 2]), product(4, &[&[0, 1], &[2, 3]])]),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(out)
}

/// A catalog group by name. See [`PRESET_NAMES`].
pub fn preset(name: &str) -> Result<FiniteGroup> {
    let (degree, gens) = preset_generators(name)?;
    Ok(FiniteGroup::from_generators(degree, &gens)?.with_label(name))
}
