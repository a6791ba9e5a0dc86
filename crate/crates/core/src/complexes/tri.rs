use crate::algebra::{preset, Alg, Preset};
use crate::error::{Error, Result};
use crate::exactla::{Mat, Prime};
use crate::modcat::{direct_sum, hom_basis};

use super::homcx::{k_inverse, null_homotopy, HomComplex};
use super::maps::{CMap, GMap, Htp, KIso};
use super::{induced_map, stalk, Cx};

/// Why a triangle is exact.
#[derive(Debug, Clone)]
pub enum TriCert {
    /// `Z` is the cone of `f` and `g`, `h` are the canonical maps.
    ByCone,
    /// A verified isomorphism of triangles onto the cone triangle of `f`.
    IsoToCone(Box<ConeIso>),
}

#[derive(Debug, Clone)]
pub struct ConeIso {
    pub cone: Tri,
    /// Isomorphisms in K on `X`, `Y`, `Z`.
    pub maps: [KIso; 3],
    /// `b f ~ f' a`, `c g ~ g' b`, `Σa h ~ h' c`.
    pub squares: [Htp; 3],
}

/// A candidate triangle `X -f-> Y -g-> Z -h-> ΣX` with homotopies
/// `g f ~ 0`, `h g ~ 0`, `Σf h ~ 0` and an exactness certificate.
#[derive(Debug, Clone)]
pub struct Tri {
    pub x: Cx,
    pub y: Cx,
    pub z: Cx,
    pub f: CMap,
    pub g: CMap,
    pub h: CMap,
    pub htps: [Htp; 3],
    pub cert: TriCert,
}

/// Block matrix from `(row block, col block, matrix)` entries.
fn blocks(p: Prime, rows: &[usize], cols: &[usize], entries: &[(usize, usize, &Mat)]) -> Mat {
    let offs = |v: &[usize]| -> Vec<usize> {
        v.iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect()
    };
    let (ro, co) = (offs(rows), offs(cols));
    let mut m = Mat::zeros(p, rows.iter().sum(), cols.iter().sum());
    for (r, c, b) in entries {
        debug_assert_eq!(b.shape(), (rows[*r], cols[*c]));
        m.set_block(ro[*r], co[*c], b);
    }
    m
}

fn composite_htp(phi: &CMap, what: &str) -> Result<Htp> {
    let zero = CMap::zero(phi.src(), phi.dst());
    null_homotopy(phi, &zero)?.ok_or_else(|| Error::Certificate(format!("{what} is not null-homotopic")))
}

impl Tri {
    /// Triangle from maps, solving for the three composite homotopies; the
    /// certificate is found by comparison with the cone of `f`.
    pub fn from_maps(f: &CMap, g: &CMap, h: &CMap) -> Result<Tri> {
        let htps = [
            composite_htp(&g.compose(f), "g ∘ f")?,
            composite_htp(&h.compose(g), "h ∘ g")?,
            composite_htp(&f.shift(1).compose(h), "Σf ∘ h")?,
        ];
        let raw = Tri {
            x: f.src().clone(),
            y: f.dst().clone(),
            z: g.dst().clone(),
            f: f.clone(),
            g: g.clone(),
            h: h.clone(),
            htps,
            cert: TriCert::ByCone,
        };
        raw.check_shape()?;
        certify_against_cone(&raw)
    }

    fn check_shape(&self) -> Result<()> {
        let sx = self.x.shift(1);
        let ok = *self.f.src() == self.x
            && *self.f.dst() == self.y
            && *self.g.src() == self.y
            && *self.g.dst() == self.z
            && *self.h.src() == self.z
            && *self.h.dst() == sx;
        if !ok {
            return Err(Error::InvalidChainMap("triangle maps are not composable as X → Y → Z → ΣX".into()));
        }
        Ok(())
    }

    /// Re-verifies maps, composite homotopies and the certificate.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        self.f.validate()?;
        self.g.validate()?;
        self.h.validate()?;
        let composites = [
            self.g.compose(&self.f),
            self.h.compose(&self.g),
            self.f.shift(1).compose(&self.h),
        ];
        for (t, c) in self.htps.iter().zip(&composites) {
            t.verify()?;
            if t.phi != *c || !t.psi.is_zero() {
                return Err(Error::Certificate("composite homotopy does not match the triangle".into()));
            }
        }
        match &self.cert {
            TriCert::ByCone => {
                let (_, c) = cone(&self.f);
                if c.z != self.z || c.g != self.g || c.h != self.h {
                    return Err(Error::Certificate("triangle is not the cone triangle of f".into()));
                }
            }
            TriCert::IsoToCone(iso) => {
                let c = &iso.cone;
                if !matches!(c.cert, TriCert::ByCone) {
                    return Err(Error::Certificate("comparison triangle is not a cone triangle".into()));
                }
                c.validate()?;
                let [a, b, cc] = &iso.maps;
                for (m, (s, t)) in iso.maps.iter().zip([(&self.x, &c.x), (&self.y, &c.y), (&self.z, &c.z)]) {
                    m.verify()?;
                    if m.fwd.src() != s || m.fwd.dst() != t {
                        return Err(Error::Certificate("triangle isomorphism has wrong endpoints".into()));
                    }
                }
                let expected = [
                    (b.fwd.compose(&self.f), c.f.compose(&a.fwd)),
                    (cc.fwd.compose(&self.g), c.g.compose(&b.fwd)),
                    (a.fwd.shift(1).compose(&self.h), c.h.compose(&cc.fwd)),
                ];
                for (sq, (l, r)) in iso.squares.iter().zip(&expected) {
                    sq.verify()?;
                    if sq.phi != *l || sq.psi != *r {
                        return Err(Error::Certificate("square homotopy does not match the maps".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> [&Cx; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Image equals kernel at each joint of `H X -> H Y -> H Z -> H ΣX`.
    pub fn les_is_exact(&self) -> bool {
        let lo = self.x.lo().min(self.y.lo()).min(self.z.lo()) - 1;
        let hi = self.x.hi().max(self.y.hi()).max(self.z.hi()) + 1;
        (lo..=hi).all(|n| {
            let maps = [induced_map(&self.f, n), induced_map(&self.g, n), induced_map(&self.h, n)];
            let next_f = induced_map(&self.f.shift(1), n);
            let seq = [&maps[0], &maps[1], &maps[2], &next_f];
            seq.windows(2).all(|w| {
                let (a, b) = (w[0], w[1]);
                b.mul(a).is_zero() && a.rank() == b.cols() - b.rank()
            })
        })
    }
}

/// The mapping cone of `f: X -> Y`, `C^n = X^(n+1) ⊕ Y^n`, and its
/// triangle `X -> Y -> C -> ΣX`.
pub fn cone(f: &CMap) -> (Cx, Tri) {
    let (x, y) = (f.src(), f.dst());
    let alg = x.alg();
    let p = x.prime();
    let nonempty: Vec<(i64, i64)> = [(x.lo() - 1, x.hi() - 1), (y.lo(), y.hi())]
        .into_iter()
        .zip([x.is_empty(), y.is_empty()])
        .filter(|(_, e)| !e)
        .map(|(r, _)| r)
        .collect();
    let lo = nonempty.iter().map(|r| r.0).min().unwrap_or(0);
    let hi = nonempty.iter().map(|r| r.1).max().unwrap_or(-1);
    let objects = (lo..=hi)
        .map(|n| direct_sum(alg, &[x.obj(n + 1).clone(), y.obj(n).clone()]).expect("same algebra").module)
        .collect();
    let diffs = (lo..hi)
        .map(|n| {
            let dx = x.d(n + 1).neg();
            let (fx, dy) = (f.comp(n + 1), y.d(n));
            blocks(
                p,
                &[x.dim(n + 2), y.dim(n + 1)],
                &[x.dim(n + 1), y.dim(n)],
                &[(0, 0, &dx), (1, 0, &fx), (1, 1, &dy)],
            )
        })
        .collect();
    let c = Cx::build(alg, lo, objects, diffs).expect("cone");
    let sx = x.shift(1);
    let g = CMap::from_fn(y, &c, |n| {
        blocks(p, &[x.dim(n + 1), y.dim(n)], &[y.dim(n)], &[(1, 0, &Mat::identity(p, y.dim(n)))])
    });
    let h = CMap::from_fn(&c, &sx, |n| {
        blocks(p, &[x.dim(n + 1)], &[x.dim(n + 1), y.dim(n)], &[(0, 0, &Mat::identity(p, x.dim(n + 1)))])
    });
    // g f = d k + k d with k^n = [1; 0] : X^n -> X^n ⊕ Y^(n-1).
    let k1 = GMap::from_fn(x, &c, -1, |n| {
        blocks(p, &[x.dim(n), y.dim(n - 1)], &[x.dim(n)], &[(0, 0, &Mat::identity(p, x.dim(n)))])
    });
    // Σf h = d k + k d with k^n = [0, 1] : X^(n+1) ⊕ Y^n -> Y^n.
    let sy = y.shift(1);
    let k3 = GMap::from_fn(&c, &sy, -1, |n| {
        blocks(p, &[y.dim(n)], &[x.dim(n + 1), y.dim(n)], &[(0, 1, &Mat::identity(p, y.dim(n)))])
    });
    let gf = g.compose(f);
    let sfh = f.shift(1).compose(&h);
    let htps = [
        Htp::new(&gf, &CMap::zero(x, &c), k1).expect("cone homotopy"),
        Htp::reflexive(&h.compose(&g)),
        Htp::new(&sfh, &CMap::zero(&c, &sy), k3).expect("cone homotopy"),
    ];
    let t = Tri {
        x: x.clone(),
        y: y.clone(),
        z: c.clone(),
        f: f.clone(),
        g,
        h,
        htps,
        cert: TriCert::ByCone,
    };
    (c, t)
}

/// A morphism of triangles completing `(phi1, phi2)`, with the square
/// homotopies.
#[derive(Debug, Clone)]
pub struct FillIn {
    pub phi3: CMap,
    /// `phi2 f ~ f' phi1`, `phi3 g ~ g' phi2`, `h' phi3 ~ Σphi1 h`.
    pub squares: [Htp; 3],
}

struct Maps<'a> {
    f: &'a CMap,
    g: &'a CMap,
    h: &'a CMap,
}

impl<'a> From<&'a Tri> for Maps<'a> {
    fn from(t: &'a Tri) -> Maps<'a> {
        Maps {
            f: &t.f,
            g: &t.g,
            h: &t.h,
        }
    }
}

/// The linear system for `(phi3, h1, h2)`: `D phi3 = 0`,
/// `phi3 g - D h1 = g' phi2`, `h' phi3 - D h2 = Σphi1 h`.
struct FillSystem {
    zz: HomComplex,
    yz: HomComplex,
    zx: HomComplex,
    matrix: Mat,
    rhs: Mat,
    dims: [usize; 3],
}

fn fill_system(a: &Maps, b: &Maps, phi1: &CMap, phi2: &CMap) -> Result<FillSystem> {
    let p = a.f.src().prime();
    let (y, z) = (a.g.src(), a.g.dst());
    let (z2, sx2) = (b.g.dst(), b.h.dst());
    let zz = HomComplex::new(z, z2)?;
    let yz = HomComplex::new(y, z2)?;
    let zx = HomComplex::new(z, sx2)?;
    let opg = zz.operator(0, &yz, 0, |u| u.compose(a.g.graded()));
    let oph = zz.operator(0, &zx, 0, |u| b.h.graded().compose(u));
    let dims = [zz.dim(0), yz.dim(-1), zx.dim(-1)];
    let rows = [zz.dim(1), yz.dim(0), zx.dim(0)];
    let d0 = zz.d_matrix(0);
    let dy = yz.d_matrix(-1).neg();
    let dz = zx.d_matrix(-1).neg();
    let matrix = blocks(p, &rows, &dims, &[(0, 0, &d0), (1, 0, &opg), (1, 1, &dy), (2, 0, &oph), (2, 2, &dz)]);
    let r1 = yz.column(b.g.compose(phi2).graded());
    let r2 = zx.column(phi1.shift(1).compose(a.h).graded());
    let rhs = blocks(p, &rows, &[1], &[(1, 0, &r1), (2, 0, &r2)]);
    Ok(FillSystem {
        zz,
        yz,
        zx,
        matrix,
        rhs,
        dims,
    })
}

fn fill_from_solution(sys: &FillSystem, a: &Maps, b: &Maps, phi1: &CMap, phi2: &CMap, sq1: Htp, s: &[u64]) -> Result<FillIn> {
    let [d0, d1, _] = sys.dims;
    let phi3 = CMap::from_graded(sys.zz.element(0, &s[..d0]));
    phi3.validate()?;
    let h1 = sys.yz.element(-1, &s[d0..d0 + d1]);
    let h2 = sys.zx.element(-1, &s[d0 + d1..]);
    let sq2 = Htp::new(&phi3.compose(a.g), &b.g.compose(phi2), h1)?;
    let sq3 = Htp::new(&b.h.compose(&phi3), &phi1.shift(1).compose(a.h), h2)?;
    Ok(FillIn {
        phi3,
        squares: [sq1, sq2, sq3],
    })
}

fn first_square(a: &Maps, b: &Maps, phi1: &CMap, phi2: &CMap) -> Result<Htp> {
    if phi1.src() != a.f.src() || phi1.dst() != b.f.src() || phi2.src() != a.f.dst() || phi2.dst() != b.f.dst() {
        return Err(Error::InvalidChainMap("fill-in data has wrong endpoints".into()));
    }
    null_homotopy(&phi2.compose(a.f), &b.f.compose(phi1))?
        .ok_or_else(|| Error::Unsolvable("the square phi2 f ~ f' phi1 does not commute up to homotopy".into()))
}

fn fill_in_maps(a: &Maps, b: &Maps, phi1: &CMap, phi2: &CMap) -> Result<FillIn> {
    let sq1 = first_square(a, b, phi1, phi2)?;
    let sys = fill_system(a, b, phi1, phi2)?;
    let sol = sys
        .matrix
        .solve(&sys.rhs)?
        .ok_or_else(|| Error::Unsolvable("no third map makes both squares commute up to homotopy".into()))?;
    fill_from_solution(&sys, a, b, phi1, phi2, sq1, &sol.col(0))
}

/// A third map `phi3` completing `(phi1, phi2)` to a morphism of triangles.
pub fn fill_in(d1: &Tri, d2: &Tri, phi1: &CMap, phi2: &CMap) -> Result<FillIn> {
    fill_in_maps(&d1.into(), &d2.into(), phi1, phi2)
}

/// `Σ^-1 k -0-> k -> k ⊕ k -> k` over the ground field at `p = 2`, the
/// triangle on which [`fillin_ambiguity`] finds two fill-ins.
pub fn ambiguity_triangle() -> Result<Tri> {
    let k = preset(Preset::GroundField, Prime::new(2)?)?;
    let s = crate::modcat::simple(&k, 0);
    Ok(cone(&CMap::zero(&stalk(&s, 1), &stalk(&s, 0))).1)
}

const AMBIGUITY_MAX_DIM: usize = 8;

/// Two fill-ins of `(id, id)` on `t` that differ and are not homotopic, by
/// exhaustive search over `Hom^0(Z, Z)` at `p = 2`.
pub fn fillin_ambiguity(t: &Tri) -> Result<Option<(FillIn, FillIn)>> {
    let p = t.x.prime();
    if p.get() != 2 {
        return Err(Error::Refused(format!("the fill-in search runs at p = 2, not {}", p.get())));
    }
    let m: Maps = t.into();
    let (id1, id2) = (CMap::identity(&t.x), CMap::identity(&t.y));
    let sq1 = first_square(&m, &m, &id1, &id2)?;
    let sys = fill_system(&m, &m, &id1, &id2)?;
    let d0 = sys.dims[0];
    if d0 > AMBIGUITY_MAX_DIM {
        return Err(Error::Refused(format!("Hom^0(Z, Z) has dimension {d0} > {AMBIGUITY_MAX_DIM}")));
    }
    let mut found: Vec<FillIn> = Vec::new();
    for bits in 0u32..(1 << d0) {
        let c: Vec<u64> = (0..d0).map(|k| u64::from(bits >> k & 1)).collect();
        // Fix phi3 and solve for the homotopies.
        let fixed = Mat::column_vector(p, &c);
        let rest: Vec<usize> = (d0..sys.matrix.cols()).collect();
        let lhs = sys.matrix.select_cols(&rest);
        let first: Vec<usize> = (0..d0).collect();
        let rhs = sys.rhs.sub(&sys.matrix.select_cols(&first).mul(&fixed));
        let Some(h) = lhs.solve(&rhs)? else { continue };
        let mut s = c.clone();
        s.extend(h.col(0));
        let fill = fill_from_solution(&sys, &m, &m, &id1, &id2, sq1.clone(), &s)?;
        for other in &found {
            if null_homotopy(&fill.phi3, &other.phi3)?.is_none() {
                return Ok(Some((other.clone(), fill)));
            }
        }
        found.push(fill);
    }
    Ok(None)
}

/// The cone-comparison certificate for a triangle: fill `(id, id)` into
/// the cone triangle of `f` and invert the third map in K.
pub fn certify_against_cone(t: &Tri) -> Result<Tri> {
    let (_, c) = cone(&t.f);
    let (idx, idy) = (CMap::identity(&t.x), CMap::identity(&t.y));
    let fill = fill_in_maps(&t.into(), &(&c).into(), &idx, &idy)?;
    let third = k_inverse(&fill.phi3)?
        .ok_or_else(|| Error::Certificate("comparison map to the cone is not a homotopy equivalence".into()))?;
    let [s1, s2, s3] = fill.squares;
    let out = Tri {
        cert: TriCert::IsoToCone(Box::new(ConeIso {
            cone: c,
            maps: [KIso::identity(&t.x), KIso::identity(&t.y), third],
            squares: [s1, s2, s3],
        })),
        ..t.clone()
    };
    out.validate()?;
    Ok(out)
}

/// `(Y, Z, ΣX, g, h, -Σf)`.
pub fn rotate(t: &Tri) -> Result<Tri> {
    let sf = t.f.shift(1).neg();
    let sx = t.x.shift(1);
    let h2 = t.htps[2].neg();
    let g3 = t.htps[0].shift(1).neg();
    let htps = [
        t.htps[1].clone(),
        Htp::new(&sf.compose(&t.h), &CMap::zero(&t.z, &t.y.shift(1)), h2.h)?,
        Htp::new(&t.g.shift(1).compose(&sf), &CMap::zero(&sx, &t.z.shift(1)), g3.h)?,
    ];
    let raw = Tri {
        x: t.y.clone(),
        y: t.z.clone(),
        z: sx,
        f: t.g.clone(),
        g: t.h.clone(),
        h: sf,
        htps,
        cert: TriCert::ByCone,
    };
    certify_against_cone(&raw)
}

/// Degreewise direct sum of triangles with blockwise homotopies.
pub fn sum_triangles(alg: &Alg, ts: &[Tri]) -> Result<Tri> {
    if ts.len() == 1 {
        return Ok(ts[0].clone());
    }
    let sum = |pick: &dyn Fn(&Tri) -> Cx| -> Result<Cx> {
        let parts: Vec<Cx> = ts.iter().map(pick).collect();
        Ok(Cx::direct_sum(alg, &parts)?.0)
    };
    let x = sum(&|t| t.x.clone())?;
    let y = sum(&|t| t.y.clone())?;
    let z = sum(&|t| t.z.clone())?;
    let sx = x.shift(1);
    let sy = y.shift(1);
    let diag = |src: &Cx, dst: &Cx, deg: i64, pick: &dyn Fn(&Tri) -> GMap| -> GMap {
        let parts: Vec<GMap> = ts.iter().map(pick).collect();
        let refs: Vec<&GMap> = parts.iter().collect();
        GMap::block_diag(src, dst, deg, &refs)
    };
    let f = CMap::from_graded(diag(&x, &y, 0, &|t| t.f.graded().clone()));
    let g = CMap::from_graded(diag(&y, &z, 0, &|t| t.g.graded().clone()));
    let h = CMap::from_graded(diag(&z, &sx, 0, &|t| t.h.graded().clone()));
    let htps = [
        Htp::new(&g.compose(&f), &CMap::zero(&x, &z), diag(&x, &z, -1, &|t| t.htps[0].h.clone()))?,
        Htp::new(&h.compose(&g), &CMap::zero(&y, &sx), diag(&y, &sx, -1, &|t| t.htps[1].h.clone()))?,
        Htp::new(&f.shift(1).compose(&h), &CMap::zero(&z, &sy), diag(&z, &sy, -1, &|t| t.htps[2].h.clone()))?,
    ];
    let raw = Tri {
        x,
        y,
        z,
        f,
        g,
        h,
        htps,
        cert: TriCert::ByCone,
    };
    certify_against_cone(&raw)
}

/// The octahedron over `X -f-> Y -g-> Z`.
#[derive(Debug, Clone)]
pub struct Oct {
    pub on_f: Tri,
    pub on_g: Tri,
    pub on_gf: Tri,
    /// `C_f -u-> C_gf -v-> C_g -w-> ΣC_f`.
    pub third: Tri,
    /// `u ι_f ~ ι_gf g`, `π_gf u ~ π_f`, `v ι_gf ~ ι_g`, `π_g v ~ Σf π_gf`,
    /// `w ~ Σι_f π_g`.
    pub squares: Vec<Htp>,
}

impl Oct {
    pub fn validate(&self) -> Result<()> {
        for t in [&self.on_f, &self.on_g, &self.on_gf, &self.third] {
            t.validate()?;
        }
        let (tf, tg, tgf, t4) = (&self.on_f, &self.on_g, &self.on_gf, &self.third);
        let expected = [
            (t4.f.compose(&tf.g), tgf.g.compose(&tg.f)),
            (tgf.h.compose(&t4.f), tf.h.clone()),
            (t4.g.compose(&tgf.g), tg.g.clone()),
            (tg.h.compose(&t4.g), tf.f.shift(1).compose(&tgf.h)),
            (t4.h.clone(), tf.g.shift(1).compose(&tg.h)),
        ];
        if self.squares.len() != expected.len() {
            return Err(Error::Certificate("octahedron needs five square certificates".into()));
        }
        for (sq, (l, r)) in self.squares.iter().zip(&expected) {
            sq.verify()?;
            if sq.phi != *l || sq.psi != *r {
                return Err(Error::Certificate("octahedron square does not match its maps".into()));
            }
        }
        Ok(())
    }
}

pub fn octahedron(f: &CMap, g: &CMap) -> Result<Oct> {
    if f.dst() != g.src() {
        return Err(Error::InvalidChainMap("octahedron needs composable maps".into()));
    }
    let p = f.src().prime();
    let (x, y, z) = (f.src(), f.dst(), g.dst());
    let (cf, tf) = cone(f);
    let (cg, tg) = cone(g);
    let gf = g.compose(f);
    let (cgf, tgf) = cone(&gf);
    // u(x', y) = (x', g y), v(x', z) = (f x', z), w(y', z) = (0, y').
    let u = CMap::from_fn(&cf, &cgf, |n| {
        let (ix, gy) = (Mat::identity(p, x.dim(n + 1)), g.comp(n));
        blocks(p, &[x.dim(n + 1), z.dim(n)], &[x.dim(n + 1), y.dim(n)], &[(0, 0, &ix), (1, 1, &gy)])
    });
    let v = CMap::from_fn(&cgf, &cg, |n| {
        let (fx, iz) = (f.comp(n + 1), Mat::identity(p, z.dim(n)));
        blocks(p, &[y.dim(n + 1), z.dim(n)], &[x.dim(n + 1), z.dim(n)], &[(0, 0, &fx), (1, 1, &iz)])
    });
    let scf = cf.shift(1);
    let w = CMap::from_fn(&cg, &scf, |n| {
        let iy = Mat::identity(p, y.dim(n + 1));
        blocks(p, &[x.dim(n + 2), y.dim(n + 1)], &[y.dim(n + 1), z.dim(n)], &[(1, 0, &iy)])
    });
    u.validate()?;
    v.validate()?;
    w.validate()?;
    let third = Tri::from_maps(&u, &v, &w)?;
    let pairs = [
        (u.compose(&tf.g), tgf.g.compose(&tg.f)),
        (tgf.h.compose(&u), tf.h.clone()),
        (v.compose(&tgf.g), tg.g.clone()),
        (tg.h.compose(&v), f.shift(1).compose(&tgf.h)),
        (w.clone(), tf.g.shift(1).compose(&tg.h)),
    ];
    let mut squares = Vec::new();
    for (l, r) in &pairs {
        squares.push(null_homotopy(l, r)?.ok_or_else(|| Error::Internal("octahedron square fails".into()))?);
    }
    let oct = Oct {
        on_f: tf,
        on_g: tg,
        on_gf: tgf,
        third,
        squares,
    };
    oct.validate()?;
    Ok(oct)
}

/// A degreewise split short exact sequence turned into a triangle, with its
/// comparison to the cone of the inclusion.
#[derive(Debug, Clone)]
pub struct SplitTriangle {
    pub tri: Tri,
    /// Degreewise sections `s^n` of the projection.
    pub sections: Vec<Mat>,
    /// Degreewise retractions `r^n` of the inclusion, `i r + s q = 1`.
    pub retractions: Vec<Mat>,
    /// `Z -> C(i)`, `z -> (-r d s z, s z)`.
    pub comparison: CMap,
}

/// Triangle `X -i-> Y -q-> Z -δ-> ΣX` with `δ = -r d_Y s` for a degreewise
/// split exact `0 -> X -> Y -> Z -> 0`.
pub fn split_seq_to_triangle(i: &CMap, q: &CMap) -> Result<SplitTriangle> {
    if i.dst() != q.src() {
        return Err(Error::InvalidChainMap("split sequence maps are not composable".into()));
    }
    let (x, y, z) = (i.src(), i.dst(), q.dst());
    let p = x.prime();
    let lo = x.lo().min(y.lo()).min(z.lo());
    let hi = x.hi().max(y.hi()).max(z.hi());
    let mut sections = Vec::new();
    let mut retractions = Vec::new();
    for n in lo..=hi {
        let (iv, qv) = (i.comp(n), q.comp(n));
        let exact = iv.rank() == x.dim(n)
            && qv.rank() == z.dim(n)
            && qv.mul(&iv).is_zero()
            && x.dim(n) + z.dim(n) == y.dim(n);
        if !exact {
            return Err(Error::Unsolvable(format!("sequence is not short exact in degree {n}")));
        }
        let hb = hom_basis(z.obj(n), y.obj(n))?;
        let id = Mat::identity(p, z.dim(n));
        let cols: Vec<Vec<u64>> = hb.matrices().iter().map(|b| qv.mul(b).flatten()).collect();
        let sys = Mat::from_cols(p, id.rows() * id.cols(), &cols);
        let c = sys
            .solve(&Mat::column_vector(p, &id.flatten()))?
            .ok_or_else(|| Error::Unsolvable(format!("no module section of the projection in degree {n}")))?;
        let s = hb.combine(&c.col(0));
        let left = iv.left_inverse().unwrap_or_else(|| Mat::zeros(p, 0, y.dim(n)));
        let r = left.mul(&Mat::identity(p, y.dim(n)).sub(&s.mul(&qv)));
        sections.push(s);
        retractions.push(r);
    }
    let at = |v: &Vec<Mat>, n: i64, rows: usize, cols: usize| -> Mat {
        if n < lo || n > hi {
            Mat::zeros(p, rows, cols)
        } else {
            v[(n - lo) as usize].clone()
        }
    };
    let sx = x.shift(1);
    let delta = CMap::from_fn(z, &sx, |n| {
        let r = at(&retractions, n + 1, x.dim(n + 1), y.dim(n + 1));
        let s = at(&sections, n, y.dim(n), z.dim(n));
        r.mul(&y.d(n)).mul(&s).neg()
    });
    delta.validate()?;
    let (c, ct) = cone(i);
    let comparison = CMap::from_fn(z, &c, |n| {
        let r = at(&retractions, n + 1, x.dim(n + 1), y.dim(n + 1));
        let s = at(&sections, n, y.dim(n), z.dim(n));
        let top = r.mul(&y.d(n)).mul(&s).neg();
        Mat::vstack(p, z.dim(n), &[&top, &s])
    });
    comparison.validate()?;
    let htps = [
        composite_htp(&q.compose(i), "q ∘ i")?,
        composite_htp(&delta.compose(q), "δ ∘ q")?,
        composite_htp(&i.shift(1).compose(&delta), "Σi ∘ δ")?,
    ];
    let third = k_inverse(&comparison)?
        .ok_or_else(|| Error::Certificate("comparison with the cone is not a homotopy equivalence".into()))?;
    let squares = [
        Htp::reflexive(&i.clone()),
        null_homotopy(&comparison.compose(q), &ct.g)?
            .ok_or_else(|| Error::Certificate("comparison square Y → C(i) fails".into()))?,
        null_homotopy(&delta, &ct.h.compose(&comparison))?
            .ok_or_else(|| Error::Certificate("comparison square Z → ΣX fails".into()))?,
    ];
    let tri = Tri {
        x: x.clone(),
        y: y.clone(),
        z: z.clone(),
        f: i.clone(),
        g: q.clone(),
        h: delta.clone(),
        htps,
        cert: TriCert::IsoToCone(Box::new(ConeIso {
            cone: ct,
            maps: [KIso::identity(x), KIso::identity(y), third],
            squares,
        })),
    };
    tri.validate()?;
    Ok(SplitTriangle {
        tri,
        sections,
        retractions,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::complexes::stalk;
    use crate::exactla::Prime;
    use crate::modcat::{hom_space, is_isomorphic, proj, simple};

    fn l1() -> Alg {
        preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap()
    }

    fn inclusion_p2_p1(a: &Alg) -> CMap {
        let m = hom_space(&proj(a, 1), &proj(a, 0)).unwrap().remove(0);
        let (x, y) = (stalk(&proj(a, 1), 0), stalk(&proj(a, 0), 0));
        CMap::new(&x, &y, vec![m.into_matrix()]).unwrap()
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let a = l1();
        let f = inclusion_p2_p1(&a);
        let (c, t) = cone(&CMap::identity(f.dst()));
        t.validate().unwrap();
        assert!(c.is_acyclic());
        assert!(null_homotopy(&CMap::identity(&c), &CMap::zero(&c, &c)).unwrap().is_some());
    }

    #[test]
    fn cone_of_zero_and_of_the_inclusion() {
        let a = l1();
        let f = inclusion_p2_p1(&a);
        let (c0, _) = cone(&CMap::zero(f.src(), f.dst()));
        assert_eq!((c0.lo(), c0.dims()), (-1, vec![2, 3]));
        let (c, t) = cone(&f);
        t.validate().unwrap();
        assert!(t.les_is_exact());
        assert_eq!(c.cohomology_at(-1).module.dim(), 0);
        assert!(is_isomorphic(&c.cohomology_at(0).module, &simple(&a, 0)).is_some());
    }

    #[test]
    fn rotation_and_sums() {
        let a = l1();
        let f = inclusion_p2_p1(&a);
        let (_, t) = cone(&f);
        let r3 = rotate(&rotate(&rotate(&t).unwrap()).unwrap()).unwrap();
        r3.validate().unwrap();
        assert_eq!(r3.x, t.x.shift(1));
        assert_eq!(r3.y, t.y.shift(1));
        assert_eq!(r3.z, t.z.shift(1));
        let one = sum_triangles(&a, std::slice::from_ref(&t)).unwrap();
        assert_eq!(one.z, t.z);
        let (_, t2) = cone(&CMap::identity(f.src()));
        let s = sum_triangles(&a, &[t.clone(), t2]).unwrap();
        s.validate().unwrap();
        assert!(s.les_is_exact());
    }

    #[test]
    fn fill_ins() {
        let a = l1();
        let f = inclusion_p2_p1(&a);
        let (_, t) = cone(&f);
        let fill = fill_in(&t, &t, &CMap::identity(&t.x), &CMap::identity(&t.y)).unwrap();
        assert!(k_inverse(&fill.phi3).unwrap().is_some());
        // The square must commute up to homotopy.
        let bad = fill_in(&t, &t, &CMap::zero(&t.x, &t.x), &CMap::identity(&t.y));
        assert!(matches!(bad, Err(Error::Unsolvable(_))));
    }

    #[test]
    fn fill_in_ambiguity() {
        let k = preset(Preset::GroundField, Prime::new(2).unwrap()).unwrap();
        let s = simple(&k, 0);
        // Σ^-1 S -0-> S -> S ⊕ S -> S.
        let x = stalk(&s, 1);
        let y = stalk(&s, 0);
        let (_, t) = cone(&CMap::zero(&x, &y));
        let (p1, p2) = fillin_ambiguity(&t).unwrap().unwrap();
        assert_ne!(p1.phi3, p2.phi3);
        assert!(null_homotopy(&p1.phi3, &p2.phi3).unwrap().is_none());
        // S -0-> S -> ΣS ⊕ S -> ΣS has a unique fill-in.
        let (_, lit) = cone(&CMap::zero(&y, &y));
        assert!(fillin_ambiguity(&lit).unwrap().is_none());
        let k3 = preset(Preset::GroundField, Prime::new(3).unwrap()).unwrap();
        let (_, t3) = cone(&CMap::identity(&stalk(&simple(&k3, 0), 0)));
        assert!(matches!(fillin_ambiguity(&t3), Err(Error::Refused(_))));
    }

    #[test]
    fn octahedra() {
        let a = l1();
        let f = inclusion_p2_p1(&a);
        let y = f.dst().clone();
        // P1 -> P1 / soc.
        let soc = crate::modcat::socle(&proj(&a, 0)).1;
        let (q, qm) = proj(&a, 0).quotient(soc.matrix()).unwrap();
        let g = CMap::new(&y, &stalk(&q, 0), vec![qm.into_matrix()]).unwrap();
        let oct = octahedron(&f, &g).unwrap();
        oct.validate().unwrap();
        for t in [&oct.on_f, &oct.on_g, &oct.on_gf, &oct.third] {
            assert!(t.les_is_exact());
        }
        let oid = octahedron(&CMap::identity(f.src()), &f).unwrap();
        assert!(k_inverse(&oid.third.g).unwrap().is_some());
        let oid2 = octahedron(&f, &CMap::identity(&y)).unwrap();
        assert!(k_inverse(&oid2.third.f).unwrap().is_some());
    }

    #[test]
    fn split_sequences() {
        let a = l1();
        let (x, z) = (stalk(&proj(&a, 1), 0), stalk(&simple(&a, 2), -1));
        let (_, incs, projs) = Cx::direct_sum(&a, &[x.clone(), z.clone()]).unwrap();
        let st = split_seq_to_triangle(&incs[0], &projs[1]).unwrap();
        assert!(st.tri.h.is_zero());
        st.tri.validate().unwrap();
        // 0 -> S3 -> P2 -> S2 -> 0 is exact but not split.
        let p2 = proj(&a, 1);
        let (s3, inc) = crate::modcat::socle(&p2);
        let (s2, q) = p2.quotient(inc.matrix()).unwrap();
        let i = CMap::new(&stalk(&s3, 0), &stalk(&p2, 0), vec![inc.into_matrix()]).unwrap();
        let qq = CMap::new(&stalk(&p2, 0), &stalk(&s2, 0), vec![q.into_matrix()]).unwrap();
        assert!(matches!(split_seq_to_triangle(&i, &qq), Err(Error::Unsolvable(_))));
        // Y -> C(f) -> ΣX is degreewise split with connecting map -Σf.
        let f = inclusion_p2_p1(&a);
        let (_, t) = cone(&f);
        let st = split_seq_to_triangle(&t.g, &t.h).unwrap();
        assert_eq!(st.tri.h, f.shift(1).neg());
    }
}
