use crate::error::{Error, Result};
use crate::scalar::int;

use super::{TruncatedTensor, Word};

/// First homology of `Σ_{g,r}` with basis `A1,B1,…,Ag,Bg,C2,…,Cr`.
///
/// Letter indices: `A_i ↦ 2(i-1)`, `B_i ↦ 2i-1`, `C_j ↦ 2g + j - 2`.
/// The pairing is fixed by `A_i·B_i = +1`, `B_i·A_i = -1`, all others 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Homology {
    genus: usize,
    boundary: usize,
}

impl Homology {
    pub fn new(genus: usize, boundary: usize) -> Result<Self> {
        if boundary == 0 {
            return Err(Error::Config("boundary count must be at least 1".into()));
        }
        if 2 * genus + boundary - 1 > 250 {
            return Err(Error::Config("homology rank too large".into()));
        }
        Ok(Homology { genus, boundary })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn rank(&self) -> usize {
        2 * self.genus + self.boundary - 1
    }

    /// Letter `A_i` (1-based).
    pub fn a(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.genus, "A{i} out of range");
        (2 * (i - 1)) as u8
    }

    /// Letter `B_i` (1-based).
    pub fn b(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.genus, "B{i} out of range");
        (2 * i - 1) as u8
    }

    /// Letter `C_j`, `2 ≤ j ≤ r`.
    pub fn c(&self, j: usize) -> u8 {
        assert!(j >= 2 && j <= self.boundary, "C{j} out of range");
        (2 * self.genus + j - 2) as u8
    }

    pub fn label(&self, x: u8) -> String {
        let x = x as usize;
        if x < 2 * self.genus {
            let i = x / 2 + 1;
            if x % 2 == 0 {
                format!("A{i}")
            } else {
                format!("B{i}")
            }
        } else {
            format!("C{}", x - 2 * self.genus + 2)
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<u8> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown homology label `{s}`"));
        let (head, idx) = s.split_at(s.char_indices().nth(1).map(|p| p.0).unwrap_or(s.len()));
        let idx: usize = idx.parse().map_err(|_| bad())?;
        match head {
            "A" if idx >= 1 && idx <= self.genus => Ok(self.a(idx)),
            "B" if idx >= 1 && idx <= self.genus => Ok(self.b(idx)),
            "C" if idx >= 2 && idx <= self.boundary => Ok(self.c(idx)),
            _ => Err(bad()),
        }
    }

    /// Intersection pairing `x·y` of basis letters.
    pub fn pairing(&self, x: u8, y: u8) -> i64 {
        let (x, y) = (x as usize, y as usize);
        let g2 = 2 * self.genus;
        if x >= g2 || y >= g2 || x / 2 != y / 2 {
            return 0;
        }
        match (x % 2, y % 2) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        }
    }

    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|x| (0..n).map(|y| self.pairing(x as u8, y as u8)).collect())
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.boundary == 1
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "intersection pairing is degenerate for r = {}",
                self.boundary
            )))
        }
    }

    /// The functional `Y ↦ Y·X`, as its values on the basis.
    pub fn dualize(&self, x: u8) -> Result<Vec<i64>> {
        self.require_nondegenerate()?;
        Ok((0..self.rank()).map(|y| self.pairing(y as u8, x)).collect())
    }

    /// The vector `h` with `Y·h = δ_{XY}`, returned as `(letter, sign)`.
    pub fn dual_vector(&self, x: u8) -> Result<(u8, i64)> {
        self.require_nondegenerate()?;
        if x % 2 == 0 {
            Ok((x + 1, 1))
        } else {
            Ok((x - 1, -1))
        }
    }

    /// `ω = Σ_i (A_i B_i − B_i A_i)` over all handles.
    pub fn omega(&self, trunc: usize) -> TruncatedTensor {
        self.omega_partial(self.genus, trunc)
    }

    /// `Σ_{i ≤ h} (A_i B_i − B_i A_i)`.
    pub fn omega_partial(&self, h: usize, trunc: usize) -> TruncatedTensor {
        let mut terms = Vec::new();
        if trunc >= 2 {
            for i in 1..=h {
                terms.push((Word::from_slice(&[self.a(i), self.b(i)]), int(1)));
                terms.push((Word::from_slice(&[self.b(i), self.a(i)]), int(-1)));
            }
        }
        TruncatedTensor::from_terms(*self, trunc, terms)
    }
}

/// `Σ_{g,r}` together with the truncation degree `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceSignature {
    pub genus: usize,
    pub boundary: usize,
    pub trunc: usize,
}

impl SurfaceSignature {
    pub fn new(genus: usize, boundary: usize, trunc: usize) -> Result<Self> {
        Homology::new(genus, boundary)?;
        if trunc == 0 {
            return Err(Error::Config("truncation must be at least 1".into()));
        }
        Ok(SurfaceSignature { genus, boundary, trunc })
    }

    pub fn homology(&self) -> Homology {
        Homology {
            genus: self.genus,
            boundary: self.boundary,
        }
    }

    pub fn rank(&self) -> usize {
        self.homology().rank()
    }

    pub fn with_trunc(&self, trunc: usize) -> Self {
        SurfaceSignature { trunc, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let h = Homology::new(2, 3).unwrap();
        assert_eq!(h.rank(), 6);
        for x in 0..h.rank() as u8 {
            assert_eq!(h.parse_label(&h.label(x)).unwrap(), x);
        }
        assert_eq!(h.label(4), "C2");
        assert!(h.parse_label("C1").is_err());
        assert!(h.parse_label("A3").is_err());
    }

    #[test]
    fn pairing_is_antisymmetric() {
        let h = Homology::new(2, 2).unwrap();
        let m = h.pairing_matrix();
        for i in 0..m.len() {
            for j in 0..m.len() {
                assert_eq!(m[i][j], -m[j][i]);
            }
        }
        assert_eq!(h.pairing(h.a(1), h.b(1)), 1);
        assert_eq!(h.pairing(h.b(2), h.a(2)), -1);
        assert_eq!(h.pairing(h.c(2), h.a(1)), 0);
    }

    #[test]
    fn dualize_convention() {
        let h = Homology::new(1, 1).unwrap();
        let da = h.dualize(h.a(1)).unwrap();
        assert_eq!(da[h.b(1) as usize], -1);
        assert_eq!(da[h.a(1) as usize], 0);
        assert_eq!(h.dualize(h.b(1)).unwrap()[h.a(1) as usize], 1);
        assert!(Homology::new(1, 2).unwrap().dualize(0).is_err());
        for x in 0..2u8 {
            let (hx, s) = h.dual_vector(x).unwrap();
            for y in 0..2u8 {
                let expect = if x == y { 1 } else { 0 };
                assert_eq!(s * h.pairing(y, hx), expect);
            }
        }
    }
}
