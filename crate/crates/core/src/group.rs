//! Concrete finite groups with dense integer element indices.
//!
//! Four families are supported: cyclic `Z(n)`, dihedral `D(n)` (order `2n`),
//! symmetric `S(n)` (order `n!`, elements ranked by Lehmer code) and direct
//! products `P(a,b)`. Multiplication uses a precomputed table for orders up
//! to [`TABLE_CAP`] and kind-specific arithmetic above that. A group is
//! immutable after construction and safe to share across threads.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Orders up to this get a dense multiplication table (O(1) hot-loop mul).
pub const TABLE_CAP: usize = 4096;
/// Default cap on group order, overridable through [`FiniteGroup::parse_with_cap`].
pub const DEFAULT_ORDER_CAP: usize = 50_000;
/// Cap for dense |G| x |G| matrix construction.
pub const DENSE_CAP: usize = 2000;
/// Symmetric groups stop at S_8 (40320 elements).
pub const SYMMETRIC_CAP: usize = 8;

#[derive(Debug, Clone)]
pub enum GroupKind {
    Cyclic {
        n: usize,
    },
    Dihedral {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    Product {
        left: Arc<FiniteGroup>,
        right: Arc<FiniteGroup>,
    },
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic { n } => write!(f, "Z({n})"),
            GroupKind::Dihedral { n } => write!(f, "D({n})"),
            GroupKind::Symmetric { n } => write!(f, "S({n})"),
            GroupKind::Product { left, right } => write!(f, "P({},{})", left.kind, right.kind),
        }
    }
}

/// Breadth-first traversal of the Cayley graph over the generator set.
///
/// Nodes are grouped by level; each node records its parent's slot in the
/// previous level and the generator used, so `g = parent * generator`.
#[derive(Debug)]
pub struct CayleyBfs {
    pub levels: Vec<Vec<BfsNode>>,
    /// parent element per element (identity maps to itself)
    pub parent: Vec<u32>,
    /// generator slot used to reach each element from its parent
    pub gen_of: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
pub struct BfsNode {
    pub element: usize,
    pub parent_slot: usize,
    pub generator: usize,
}

#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    kind: GroupKind,
    generators: Vec<usize>,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    bfs: OnceLock<CayleyBfs>,
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

// Lehmer-code ranking for permutations (symmetric groups).
mod perm {
    pub const FACT: [usize; 13] = [
        1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600,
    ];

    pub fn rank(p: &[u8]) -> usize {
        let n = p.len();
        let mut r = 0;
        for i in 0..n {
            let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
            r += smaller * FACT[n - 1 - i];
        }
        r
    }

    pub fn unrank(mut r: usize, n: usize, out: &mut Vec<u8>) {
        out.clear();
        let mut avail: Vec<u8> = (0..n as u8).collect();
        for i in 0..n {
            let f = FACT[n - 1 - i];
            let d = r / f;
            r %= f;
            out.push(avail.remove(d));
        }
    }

    /// (a o b)(i) = a(b(i))
    pub fn compose(a: &[u8], b: &[u8], out: &mut Vec<u8>) {
        out.clear();
        for &bi in b {
            out.push(a[bi as usize]);
        }
    }

    pub fn invert(p: &[u8], out: &mut Vec<u8>) {
        out.clear();
        out.resize(p.len(), 0);
        for (i, &pi) in p.iter().enumerate() {
            out[pi as usize] = i as u8;
        }
    }
}

impl FiniteGroup {
    /// Z_n: addition mod n, generator {1}.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group needs n >= 1".into()));
        }
        check_order(n)?;
        let generators = vec![if n > 1 { 1 } else { 0 }];
        let inv = (0..n).map(|a| ((n - a) % n) as u32).collect();
        Ok(Self::finish(n, GroupKind::Cyclic { n }, generators, inv))
    }

    /// D_n (order 2n): elements (r, s) indexed as s*n + r, with
    /// (r1,s1)(r2,s2) = (r1 + (-1)^{s1} r2 mod n, s1 xor s2).
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "dihedral group needs n >= 3, got {n}"
            )));
        }
        check_order(2 * n)?;
        let order = 2 * n;
        let generators = vec![1, n]; // rotation-by-1 = (1,0), flip = (0,1)
        let inv = (0..order)
            .map(|a| {
                let (r, s) = (a % n, a / n);
                if s == 0 {
                    ((n - r) % n) as u32
                } else {
                    a as u32 // reflections are involutions
                }
            })
            .collect();
        Ok(Self::finish(
            order,
            GroupKind::Dihedral { n },
            generators,
            inv,
        ))
    }

    /// S_n (order n!): elements ranked by Lehmer code, generated by the
    /// adjacent transpositions (i, i+1).
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "symmetric group needs n >= 1".into(),
            ));
        }
        if n > SYMMETRIC_CAP {
            return Err(Error::SizeLimit(format!(
                "symmetric group capped at S({SYMMETRIC_CAP}), got S({n})"
            )));
        }
        let order = perm::FACT[n];
        check_order(order)?;
        let mut generators = Vec::new();
        if n == 1 {
            generators.push(0);
        } else {
            let mut p: Vec<u8> = (0..n as u8).collect();
            for i in 0..n - 1 {
                p.swap(i, i + 1);
                generators.push(perm::rank(&p));
                p.swap(i, i + 1);
            }
        }
        let mut buf = Vec::new();
        let mut ibuf = Vec::new();
        let inv = (0..order)
            .map(|a| {
                perm::unrank(a, n, &mut buf);
                perm::invert(&buf, &mut ibuf);
                perm::rank(&ibuf) as u32
            })
            .collect();
        Ok(Self::finish(
            order,
            GroupKind::Symmetric { n },
            generators,
            inv,
        ))
    }

    /// A x B with componentwise multiplication; element (a, b) indexed as
    /// a * |B| + b. Generators are (gen_a, e) followed by (e, gen_b).
    pub fn product(a: FiniteGroup, b: FiniteGroup) -> Result<Self> {
        Self::product_with_cap(a, b, DEFAULT_ORDER_CAP)
    }

    pub fn product_with_cap(a: FiniteGroup, b: FiniteGroup, cap: usize) -> Result<Self> {
        let order = a
            .order
            .checked_mul(b.order)
            .ok_or_else(|| Error::SizeLimit("product order overflows".into()))?;
        if order > cap {
            return Err(Error::SizeLimit(format!(
                "product order {order} exceeds cap {cap}"
            )));
        }
        let nb = b.order;
        let mut generators: Vec<usize> = a.generators.iter().map(|&ga| ga * nb).collect();
        generators.extend(b.generators.iter().copied());
        let inv = (0..order)
            .map(|e| {
                let (ea, eb) = (e / nb, e % nb);
                (a.inv[ea] as usize * nb + b.inv[eb] as usize) as u32
            })
            .collect();
        let kind = GroupKind::Product {
            left: Arc::new(a),
            right: Arc::new(b),
        };
        Ok(Self::finish(order, kind, generators, inv))
    }

    fn finish(order: usize, kind: GroupKind, generators: Vec<usize>, inv: Vec<u32>) -> Self {
        let mut g = FiniteGroup {
            order,
            kind,
            generators,
            inv,
            table: None,
            bfs: OnceLock::new(),
        };
        if order <= TABLE_CAP {
            let mut table = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    table[a * order + b] = g.mul_functional(a, b) as u32;
                }
            }
            g.table = Some(table);
        }
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.mul_functional(a, b),
        }
    }

    fn mul_functional(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic { n } => (a + b) % n,
            GroupKind::Dihedral { n } => {
                let (r1, s1) = (a % n, a / n);
                let (r2, s2) = (b % n, b / n);
                let r = if s1 == 0 {
                    (r1 + r2) % n
                } else {
                    (r1 + n - r2 % n) % n
                };
                (s1 ^ s2) * n + r
            }
            GroupKind::Symmetric { n } => {
                let mut pa = Vec::new();
                let mut pb = Vec::new();
                let mut pc = Vec::new();
                perm::unrank(a, *n, &mut pa);
                perm::unrank(b, *n, &mut pb);
                perm::compose(&pa, &pb, &mut pc);
                perm::rank(&pc)
            }
            GroupKind::Product { left, right } => {
                let nb = right.order;
                left.mul(a / nb, b / nb) * nb + right.mul(a % nb, b % nb)
            }
        }
    }

    /// BFS over the Cayley graph from the identity, generators expanded in
    /// their fixed order. Cached after the first call; the resulting visit
    /// order is the canonical accumulation order for Fourier transforms.
    pub fn bfs(&self) -> &CayleyBfs {
        self.bfs.get_or_init(|| {
            let order = self.order;
            let mut parent = vec![u32::MAX; order];
            let mut gen_of = vec![u32::MAX; order];
            let mut seen = vec![false; order];
            seen[0] = true;
            parent[0] = 0;
            gen_of[0] = 0;
            let mut levels = vec![vec![BfsNode {
                element: 0,
                parent_slot: 0,
                generator: usize::MAX,
            }]];
            loop {
                let last = levels.last().unwrap();
                let mut next = Vec::new();
                for (slot, node) in last.iter().enumerate() {
                    for (gi, &gen) in self.generators.iter().enumerate() {
                        let child = self.mul(node.element, gen);
                        if !seen[child] {
                            seen[child] = true;
                            parent[child] = node.element as u32;
                            gen_of[child] = gi as u32;
                            next.push(BfsNode {
                                element: child,
                                parent_slot: slot,
                                generator: gi,
                            });
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                levels.push(next);
            }
            CayleyBfs {
                levels,
                parent,
                gen_of,
            }
        })
    }

    /// Every element is reachable from the identity over the generators.
    pub fn generates_whole_group(&self) -> bool {
        self.bfs().levels.iter().map(Vec::len).sum::<usize>() == self.order
    }

    /// Generator word for `g` (indices into `generators()`), so that
    /// multiplying the generators left to right yields `g`.
    pub fn word(&self, g: usize) -> Vec<usize> {
        let bfs = self.bfs();
        let mut w = Vec::new();
        let mut cur = g;
        while cur != 0 {
            w.push(bfs.gen_of[cur] as usize);
            cur = bfs.parent[cur] as usize;
        }
        w.reverse();
        w
    }

    /// Dense convolution matrix `P_x = [x(h g^{-1})]_{h,g}`.
    pub fn convolution_matrix(&self, x: &[Complex64]) -> Result<nalgebra::DMatrix<Complex64>> {
        if self.order > DENSE_CAP {
            return Err(Error::SizeLimit(format!(
                "dense convolution matrix capped at order {DENSE_CAP}, group has {}",
                self.order
            )));
        }
        if x.len() != self.order {
            return Err(Error::InvalidParameter(format!(
                "noise length {} != group order {}",
                x.len(),
                self.order
            )));
        }
        let n = self.order;
        Ok(nalgebra::DMatrix::from_fn(n, n, |h, g| {
            x[self.mul(h, self.inv(g))]
        }))
    }

    /// Group convolution `(x * y)(h) = sum_g x(h g^{-1}) y(g)`.
    pub fn convolve(&self, x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.order > DENSE_CAP {
            return Err(Error::SizeLimit("convolve capped at order 2000".into()));
        }
        if x.len() != self.order || y.len() != self.order {
            return Err(Error::InvalidParameter(
                "length mismatch in convolve".into(),
            ));
        }
        let mut out = vec![Complex64::default(); self.order];
        for (h, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for g in 0..self.order {
                acc += x[self.mul(h, self.inv(g))] * y[g];
            }
            *o = acc;
        }
        Ok(out)
    }

    /// Parses the group mini-grammar: `Z(n)`, `D(n)`, `S(n)`, `P(spec,spec)`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::parse_with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn parse_with_cap(spec: &str, cap: usize) -> Result<Self> {
        let mut p = Parser {
            s: spec.as_bytes(),
            pos: 0,
            cap,
        };
        let g = p.group()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::InvalidParameter(format!(
                "trailing input after group spec `{spec}`"
            )));
        }
        if g.order > cap {
            return Err(Error::SizeLimit(format!(
                "group order {} exceeds cap {cap}",
                g.order
            )));
        }
        Ok(g)
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > DEFAULT_ORDER_CAP {
        return Err(Error::SizeLimit(format!(
            "group order {order} exceeds cap {DEFAULT_ORDER_CAP}"
        )));
    }
    Ok(())
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    cap: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "expected `{}` at position {} in group spec",
                c as char, self.pos
            )))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::InvalidParameter(format!(
                "expected a number at position {start} in group spec"
            )));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::InvalidParameter("number out of range in group spec".into()))
    }

    fn group(&mut self) -> Result<FiniteGroup> {
        self.skip_ws();
        let tag = self
            .s
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::InvalidParameter("empty group spec".into()))?;
        self.pos += 1;
        match tag {
            b'Z' | b'z' => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                FiniteGroup::cyclic(n)
            }
            b'D' | b'd' => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                FiniteGroup::dihedral(n)
            }
            b'S' | b's' => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                FiniteGroup::symmetric(n)
            }
            b'P' | b'p' => {
                self.expect(b'(')?;
                let a = self.group()?;
                self.expect(b',')?;
                let b = self.group()?;
                self.expect(b')')?;
                FiniteGroup::product_with_cap(a, b, self.cap)
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown group kind `{}`",
                other as char
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{sample_noise, NoiseSpec};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cyclic_basics() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.mul(2, 3), 1);
        let t = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.identity(), 0);
        assert!(FiniteGroup::cyclic(0).is_err());
        assert!(FiniteGroup::cyclic(12).is_ok());
    }

    #[test]
    fn dihedral_semidirect_rule() {
        let n = 5;
        let g = FiniteGroup::dihedral(n).unwrap();
        assert_eq!(g.order(), 10);
        // inv((1,0)) = (n-1, 0)
        assert_eq!(g.inv(1), n - 1);
        // (0,1)*(1,0) = (n-1, 1)
        let flip = n;
        let rot = 1;
        assert_eq!(g.mul(flip, rot), n + (n - 1));
        assert!(FiniteGroup::dihedral(2).is_err());
    }

    #[test]
    fn symmetric_basics() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(FiniteGroup::symmetric(5).unwrap().order(), 120);
        // (1 2) then (2 3) has order 3: s0 * s1 is a 3-cycle
        let s0 = g.generators()[0];
        let s1 = g.generators()[1];
        let t = g.mul(s0, s1);
        let t2 = g.mul(t, t);
        let t3 = g.mul(t2, t);
        assert_ne!(t, g.identity());
        assert_ne!(t2, g.identity());
        assert_eq!(t3, g.identity());
        assert!(matches!(
            FiniteGroup::symmetric(9),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn product_orders_and_klein() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let p = FiniteGroup::product(s3, z4).unwrap();
        assert_eq!(p.order(), 24);

        // Klein group: every element self-inverse
        let k = FiniteGroup::product(
            FiniteGroup::cyclic(2).unwrap(),
            FiniteGroup::cyclic(2).unwrap(),
        )
        .unwrap();
        assert_eq!(k.order(), 4);
        for e in 0..4 {
            assert_eq!(k.inv(e), e);
            assert_eq!(k.mul(e, e), k.identity());
        }
    }

    #[test]
    fn trivial_factor_is_isomorphic() {
        let z1 = FiniteGroup::cyclic(1).unwrap();
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let p = FiniteGroup::product(z1, d4).unwrap();
        let d4b = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(p.order(), d4b.order());
        for a in 0..p.order() {
            for b in 0..p.order() {
                assert_eq!(p.mul(a, b), d4b.mul(a, b));
            }
        }
    }

    #[test]
    fn group_axioms_sampled() {
        let groups = [
            FiniteGroup::cyclic(7).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::parse("P(D(4),Z(5))").unwrap(),
        ];
        for g in &groups {
            let n = g.order();
            let e = g.identity();
            for a in 0..n {
                assert_eq!(g.mul(a, e), a);
                assert_eq!(g.mul(e, a), a);
                assert_eq!(g.mul(a, g.inv(a)), e);
                assert_eq!(g.mul(g.inv(a), a), e);
            }
            // anti-homomorphism of inversion, exhaustive (orders <= 500 here)
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(g.mul(g.inv(b), g.inv(a)), g.inv(g.mul(a, b)));
                }
            }
            // associativity on a triple sample
            for k in 0..200usize {
                let a = (k * 7919) % n;
                let b = (k * 104729 + 1) % n;
                let c = (k * 1299709 + 2) % n;
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            }
            assert!(g.generates_whole_group());
        }
    }

    #[test]
    fn inversion_antihomomorphism_sampled_on_s7() {
        // order 5040 > TABLE_CAP, so this exercises the functional mul path
        let g = FiniteGroup::symmetric(7).unwrap();
        assert!(g.table.is_none());
        let n = g.order();
        let mut state = 0x5eed_u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as usize % n
        };
        for _ in 0..10_000 {
            let a = next();
            let b = next();
            assert_eq!(g.mul(g.inv(b), g.inv(a)), g.inv(g.mul(a, b)));
        }
        assert_eq!(g.mul(3129, g.inv(3129)), g.identity());
    }

    #[test]
    fn functional_path_matches_table_on_symmetric_5() {
        // order 120 <= TABLE_CAP, so rebuild mul functionally and compare
        let g = FiniteGroup::symmetric(5).unwrap();
        for a in (0..120).step_by(7) {
            for b in (0..120).step_by(11) {
                assert_eq!(g.mul(a, b), g.mul_functional(a, b));
            }
        }
    }

    #[test]
    fn convolution_matrix_small_cases() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let m = z2.convolution_matrix(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 1)], c(2.0, 0.0));
        assert_eq!(m[(1, 0)], c(2.0, 0.0));
        assert_eq!(m[(1, 1)], c(1.0, 0.0));

        // delta at identity gives the identity matrix
        let d6 = FiniteGroup::dihedral(3).unwrap();
        let mut x = vec![c(0.0, 0.0); 6];
        x[0] = c(1.0, 0.0);
        let m = d6.convolution_matrix(&x).unwrap();
        assert_eq!(crate::linalg::identity_deviation(&m), 0.0);

        // Z_3 circulant: first row (a, c, b) under the h g^{-1} convention
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let (a, b, cc) = (c(1.0, 2.0), c(3.0, -1.0), c(-2.0, 0.5));
        let m = z3.convolution_matrix(&[a, b, cc]).unwrap();
        let expect = [[a, cc, b], [b, a, cc], [cc, b, a]];
        for h in 0..3 {
            for g in 0..3 {
                assert_eq!(m[(h, g)], expect[h][g]);
            }
        }
    }

    #[test]
    fn convolution_rows_and_columns_are_permutations() {
        let g = FiniteGroup::parse("P(S(3),Z(4))").unwrap();
        let n = g.order();
        let x: Vec<Complex64> = (0..n).map(|k| c(k as f64, (k * k) as f64)).collect();
        let m = g.convolution_matrix(&x).unwrap();
        for h in 0..n {
            let mut row: Vec<usize> = (0..n).map(|gg| g.mul(h, g.inv(gg))).collect();
            row.sort_unstable();
            assert_eq!(row, (0..n).collect::<Vec<_>>());
            let mut col: Vec<usize> = (0..n).map(|hh| g.mul(hh, g.inv(h))).collect();
            col.sort_unstable();
            assert_eq!(col, (0..n).collect::<Vec<_>>());
        }
        let _ = m;
    }

    #[test]
    fn convolution_is_matrix_product() {
        // P_x P_y = P_{x*y} to 1e-10
        for spec in ["Z(12)", "D(6)", "S(4)", "P(S(3),Z(5))"] {
            let g = FiniteGroup::parse(spec).unwrap();
            let n = g.order();
            let xs = sample_noise(&NoiseSpec::gaussian(11), n, 0).values;
            let ys = sample_noise(&NoiseSpec::gaussian(11), n, 1).values;
            let px = g.convolution_matrix(&xs).unwrap();
            let py = g.convolution_matrix(&ys).unwrap();
            let pxy = g
                .convolution_matrix(&g.convolve(&xs, &ys).unwrap())
                .unwrap();
            let diff = (&px * &py) - pxy;
            assert!(diff.iter().all(|z| z.norm() < 1e-10), "{spec}");
        }
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(FiniteGroup::parse("Z(4)").unwrap().order(), 4);
        assert_eq!(
            FiniteGroup::parse(" P( S(3) , Z(100) ) ").unwrap().order(),
            600
        );
        assert!(matches!(
            FiniteGroup::parse("Q(3)"),
            Err(Error::InvalidParameter(msg)) if msg.contains("unknown group kind")
        ));
        assert!(FiniteGroup::parse("Z(4)x").is_err());
        assert!(FiniteGroup::parse("").is_err());
        assert!(matches!(
            FiniteGroup::parse_with_cap("Z(600)", 500),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn bfs_reaches_everything_in_levels() {
        let g = FiniteGroup::symmetric(5).unwrap();
        let bfs = g.bfs();
        let total: usize = bfs.levels.iter().map(Vec::len).sum();
        assert_eq!(total, 120);
        // every non-root node's parent is in the previous level
        for (li, level) in bfs.levels.iter().enumerate().skip(1) {
            for node in level {
                let parent = bfs.levels[li - 1][node.parent_slot].element;
                assert_eq!(g.mul(parent, g.generators()[node.generator]), node.element);
            }
        }
        // words multiply out to their element
        for e in (0..120).step_by(13) {
            let w = g.word(e);
            let mut acc = g.identity();
            for gi in w {
                acc = g.mul(acc, g.generators()[gi]);
            }
            assert_eq!(acc, e);
        }
    }
}
