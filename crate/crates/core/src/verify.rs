//! Per-exercise verification suites and their reports.

use std::fmt::Debug;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{preset, Alg, Preset};
use crate::complexes::{
    ambiguity_triangle, cone, fill_in, fillin_ambiguity, induced_map, k_inverse, null_homotopy, octahedron,
    random_chain_map, random_complex, rotate, semisimple_split, split_seq_to_triangle, stalk, sum_triangles, CMap, Cx,
    HomComplex, RandomSpec,
};
use crate::derived::{
    dg_end, ext, hom_derived, inj_resolution, is_iso_in_d, khom_agreement, proj_resolution, resolve_complex,
    tilting_check, tilting_module, Side, Slice,
};
use crate::error::{Error, Result};
use crate::exactla::Prime;
use crate::frobenius::{
    assert_self_injective, complete_resolution, stable_hom, stable_hom_via_cr, stable_indecomposables, syzygy, z0,
};
use crate::modcat::{
    ar_quiver, classify_indecomposables, direct_sum, hom_basis, indecomposables, injective, is_isomorphic,
    is_projective, module_label, regular, simple, Mod,
};

/// One row of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub exercise: String,
    pub algebra: String,
    pub prime: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
    /// Wall time in milliseconds, only with `timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    /// `None` means the default of each exercise.
    pub prime: Option<u64>,
    pub seed: u64,
    pub window: (i64, i64),
    pub cap: usize,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            prime: None,
            seed: 0,
            window: (-6, 6),
            cap: 12,
            timing: false,
        }
    }
}

pub const DEFAULT_PRIME: u64 = 101;

/// How an exercise picks its prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    /// `--prime`, default 101.
    Any,
    /// 2, or 3 when `--prime 3` is given.
    Classification,
    /// Always this prime.
    Fixed(u64),
}

impl Field {
    fn resolve(self, requested: Option<u64>) -> u64 {
        match self {
            Field::Any => requested.unwrap_or(DEFAULT_PRIME),
            Field::Classification => {
                if requested == Some(3) {
                    3
                } else {
                    2
                }
            }
            Field::Fixed(p) => p,
        }
    }
}

struct Exercise {
    id: &'static str,
    field: Field,
    run: fn(&mut Suite) -> Result<()>,
}

const EXERCISES: &[Exercise] = &[
    Exercise { id: "1.2.1", field: Field::Any, run: ex_1_2_1 },
    Exercise { id: "1.4.1", field: Field::Any, run: ex_1_4_1 },
    Exercise { id: "1.5.1", field: Field::Any, run: ex_1_5_1 },
    Exercise { id: "1.5.2", field: Field::Any, run: ex_1_5_2 },
    Exercise { id: "1.6.1", field: Field::Any, run: ex_1_6_1 },
    Exercise { id: "1.6.3", field: Field::Classification, run: ex_1_6_3 },
    Exercise { id: "1.6.3-counts", field: Field::Classification, run: ex_1_6_3_counts },
    Exercise { id: "1.6.3-ext", field: Field::Classification, run: ex_1_6_3_ext },
    Exercise { id: "1.6.3-hereditary", field: Field::Classification, run: ex_1_6_3_hereditary },
    Exercise { id: "1.6.3-quiver", field: Field::Classification, run: ex_1_6_3_quiver },
    Exercise { id: "1.7.1", field: Field::Any, run: ex_1_7_1 },
    Exercise { id: "1.7.2", field: Field::Any, run: ex_1_7_2 },
    Exercise { id: "1.7.3", field: Field::Any, run: ex_1_7_3 },
    Exercise { id: "2.1.1", field: Field::Any, run: ex_2_1_1 },
    Exercise { id: "2.4.1", field: Field::Fixed(2), run: ex_2_4_1 },
    Exercise { id: "2.5.1", field: Field::Any, run: ex_2_5_1 },
    Exercise { id: "3.1.1", field: Field::Any, run: ex_3_1_1 },
    Exercise { id: "3.3.2", field: Field::Any, run: ex_3_3_2 },
    Exercise { id: "3.5.1", field: Field::Any, run: ex_3_5_1 },
    Exercise { id: "5.1.1", field: Field::Any, run: ex_5_1_1 },
    Exercise { id: "5.3.1", field: Field::Any, run: ex_5_3_1 },
    Exercise { id: "6.1.1", field: Field::Any, run: ex_6_1_1 },
    Exercise { id: "7.4.1", field: Field::Any, run: ex_7_4_1 },
    Exercise { id: "7.5.1", field: Field::Any, run: ex_7_5_1 },
];

/// Every exercise id accepted by [`run_exercise`], without `all`.
pub fn exercise_ids() -> Vec<&'static str> {
    EXERCISES.iter().map(|e| e.id).collect()
}

fn unknown(id: &str) -> Error {
    let mut ids = exercise_ids();
    ids.push("all");
    Error::UnknownExercise {
        id: id.into(),
        available: ids.join(", "),
    }
}

/// Runs one exercise suite, or every suite for `all`. Failing checks are
/// reported, not raised; errors are reserved for bad ids and options.
pub fn run_exercise(id: &str, opts: &Options) -> Result<Report> {
    if opts.prime.is_some_and(|p| Prime::new(p).is_err()) {
        return Err(Error::NotPrime(opts.prime.unwrap_or(0)));
    }
    if opts.window.0 > opts.window.1 {
        return Err(Error::Usage(format!("empty window [{}, {}]", opts.window.0, opts.window.1)));
    }
    if id == "all" {
        return Ok(run_all(opts));
    }
    let ex = EXERCISES.iter().find(|e| e.id == id).ok_or_else(|| unknown(id))?;
    Ok(run_one(ex, opts))
}

fn run_one(ex: &Exercise, opts: &Options) -> Report {
    let start = Instant::now();
    let prime = ex.field.resolve(opts.prime);
    let mut suite = Suite {
        opts: opts.clone(),
        prime,
        algebras: Vec::new(),
        checks: Vec::new(),
    };
    if let Err(e) = (ex.run)(&mut suite) {
        suite.checks.push(Check {
            name: "suite completes".into(),
            expected: "no error".into(),
            got: e.to_string(),
            pass: false,
        });
    }
    let pass = !suite.checks.is_empty() && suite.checks.iter().all(|c| c.pass);
    Report {
        exercise: ex.id.into(),
        algebra: suite.algebras.join(", "),
        prime,
        checks: suite.checks,
        pass,
        runtime_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

fn run_all(opts: &Options) -> Report {
    let start = Instant::now();
    let reports: Vec<Report> = EXERCISES.par_iter().map(|ex| run_one(ex, opts)).collect();
    let mut algebras: Vec<String> = Vec::new();
    let mut checks = Vec::new();
    for r in &reports {
        for a in r.algebra.split(", ") {
            if !algebras.iter().any(|b| b == a) {
                algebras.push(a.into());
            }
        }
        for c in &r.checks {
            checks.push(Check {
                name: format!("{} (p = {}): {}", r.exercise, r.prime, c.name),
                ..c.clone()
            });
        }
    }
    Report {
        exercise: "all".into(),
        algebra: algebras.join(", "),
        prime: opts.prime.unwrap_or(DEFAULT_PRIME),
        pass: reports.iter().all(|r| r.pass),
        checks,
        runtime_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Accumulates checks for one exercise.
struct Suite {
    opts: Options,
    prime: u64,
    algebras: Vec<String>,
    checks: Vec<Check>,
}

impl Suite {
    fn alg(&mut self, p: Preset) -> Result<Alg> {
        let a = preset(p, Prime::new(self.prime)?)?;
        if !self.algebras.contains(&a.name()) {
            self.algebras.push(a.name());
        }
        Ok(a)
    }

    fn eq<T: PartialEq + Debug>(&mut self, name: impl Into<String>, expected: T, got: Result<T>) {
        let (got, pass) = match got {
            Ok(g) => (format!("{g:?}"), g == expected),
            Err(e) => (format!("error: {e}"), false),
        };
        self.checks.push(Check {
            name: name.into(),
            expected: format!("{expected:?}"),
            got,
            pass,
        });
    }

    fn ok(&mut self, name: impl Into<String>, got: Result<()>) {
        self.eq(name, true, got.map(|()| true));
    }

    fn rng(&self, sample: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(sample))
    }
}

fn dims_in(x: &Cx, range: std::ops::RangeInclusive<i64>) -> Vec<usize> {
    range.map(|n| x.cohomology_at(n).module.dim()).collect()
}

/// No cohomology strictly inside the degree range; a window of a complete
/// resolution has truncation cohomology at its ends.
fn exact_inside(x: &Cx) -> bool {
    (x.lo() + 1..x.hi()).all(|n| x.cohomology_at(n).module.dim() == 0)
}

fn random_map(alg: &Alg, catalog: &[Mod], rng: &mut ChaCha8Rng) -> Result<CMap> {
    let spec = RandomSpec::default();
    let x = random_complex(alg, catalog, &spec, rng)?;
    let y = random_complex(alg, catalog, &spec, rng)?;
    random_chain_map(&x, &y, rng)
}

/// `Hom(M ⊕ N, -)` and `Hom(-, M ⊕ N)` are additive; the biproduct maps
/// satisfy `p_i e_j = δ_ij` and `Σ e_i p_i = 1`.
fn ex_1_2_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let ind = indecomposables(&a)?;
    let hom = |x: &Mod, y: &Mod| hom_basis(x, y).map(|h| h.dim());
    for i in 0..ind.len() {
        for j in i..ind.len() {
            let (m, n) = (&ind[i], &ind[j]);
            let sum = direct_sum(&a, &[m.clone(), n.clone()])?;
            let name = format!("{} + {}", module_label(m), module_label(n));
            let want: Result<Vec<usize>> = ind.iter().map(|l| Ok(hom(m, l)? + hom(n, l)?)).collect();
            let got: Result<Vec<usize>> = ind.iter().map(|l| hom(&sum.module, l)).collect();
            s.eq(format!("dim Hom({name}, L) over indecomposables L"), want?, got);
            let want: Result<Vec<usize>> = ind.iter().map(|l| Ok(hom(l, m)? + hom(l, n)?)).collect();
            let got: Result<Vec<usize>> = ind.iter().map(|l| hom(l, &sum.module)).collect();
            s.eq(format!("dim Hom(L, {name}) over indecomposables L"), want?, got);
            let p = a.prime();
            let mut total = crate::exactla::Mat::zeros(p, sum.module.dim(), sum.module.dim());
            let mut deltas = true;
            for (k, e) in sum.injections.iter().enumerate() {
                total = total.add(&e.compose(&sum.projections[k]).into_matrix());
                for (l, q) in sum.projections.iter().enumerate() {
                    let c = q.compose(e);
                    deltas &= if k == l { c.is_iso() && c.matrix().is_square() } else { c.is_zero() };
                }
            }
            let id = total == crate::exactla::Mat::identity(p, sum.module.dim());
            s.eq(format!("biproduct identities for {name}"), true, Ok(deltas && id));
        }
    }
    Ok(())
}

/// Homotopic chain maps agree on cohomology and give the same class in
/// `Hom_D(X, Y) = H^0 Hom•(P_X, Y)`.
fn ex_1_4_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let cat = indecomposables(&a)?;
    let cap = s.opts.cap;
    for i in 0..20u64 {
        let mut rng = s.rng(i);
        let f = random_map(&a, &cat, &mut rng)?;
        let (x, y) = (f.src().clone(), f.dst().clone());
        let hc = HomComplex::new(&x, &y)?;
        let coeffs: Vec<u64> = (0..hc.dim(-1)).map(|_| rng.random_range(0..a.prime().get())).collect();
        let h = hc.element(-1, &coeffs);
        let g = CMap::new(&x, &y, f.graded().add(&h.differential()).comps().to_vec())?;
        let htp = null_homotopy(&f, &g).and_then(|o| {
            let t = o.ok_or_else(|| Error::Unsolvable("no homotopy".into()))?;
            t.verify()
        });
        s.ok(format!("sample {i:02}: homotopy f ~ f + dh + hd verified"), htp);
        let same_h = (x.lo().min(y.lo())..=x.hi().max(y.hi())).all(|n| induced_map(&f, n) == induced_map(&g, n));
        s.eq(format!("sample {i:02}: H^n(f) = H^n(f') for all n"), true, Ok(same_h));
        let same_d = resolve_complex(&x, cap).map(|r| {
            let hd = HomComplex::new(&r.res, &y).expect("complexes over one algebra");
            let coh = hd.cohomology(0);
            let class = |m: &CMap| coh.class_of(&hd.column(m.compose(&r.comparison).graded()));
            class(&f) == class(&g)
        });
        s.eq(format!("sample {i:02}: same class in Hom_D(X, Y)"), true, same_d);
    }
    Ok(())
}

/// `dim Hom_D(Λ, Σ^n X) = dim H^n X` for random complexes over Λ1.
fn ex_1_5_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let cat = indecomposables(&a)?;
    let cap = s.opts.cap;
    let r = stalk(&regular(&a), 0);
    for i in 0..50u64 {
        let x = random_complex(&a, &cat, &RandomSpec::default(), &mut s.rng(i))?;
        let got: Result<Vec<usize>> = (-2..=2).map(|n| hom_derived(&r, &x, n, cap)).collect();
        s.eq(format!("sample {i:02}: Hom_D(A, X[n]) for n in -2..2"), dims_in(&x, -2..=2), got);
    }
    Ok(())
}

/// Stalks embed `mod Λ1` fully faithfully and have no negative Homs.
fn ex_1_5_2(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let ind = indecomposables(&a)?;
    let cap = s.opts.cap;
    for m in &ind {
        for n in &ind {
            let want = vec![0, 0, hom_basis(m, n)?.dim()];
            let (x, y) = (stalk(m, 0), stalk(n, 0));
            let got: Result<Vec<usize>> = (-2..=0).map(|k| hom_derived(&x, &y, k, cap)).collect();
            s.eq(
                format!("Hom_D({}, {}[n]) for n in -2..0", module_label(m), module_label(n)),
                want,
                got,
            );
        }
    }
    Ok(())
}

/// Complexes of vector spaces split as the sum of their cohomology.
fn ex_1_6_1(s: &mut Suite) -> Result<()> {
    let k = s.alg(Preset::GroundField)?;
    let cat = vec![simple(&k, 0)];
    for i in 0..50u64 {
        let x = random_complex(&k, &cat, &RandomSpec::default(), &mut s.rng(i))?;
        let betti: Vec<usize> = x.degrees().map(|n| x.dim(n) - x.d(n).rank() - x.d(n - 1).rank()).collect();
        let split = semisimple_split(&x);
        let got = split.as_ref().map(|sp| x.degrees().map(|n| sp.target.dim(n)).collect::<Vec<_>>());
        s.eq(format!("sample {i:02}: stalk dims equal Betti numbers"), betti, got.map_err(Clone::clone));
        s.ok(
            format!("sample {i:02}: splitting certificate verified"),
            split.and_then(|sp| sp.iso.verify()),
        );
    }
    Ok(())
}

const TRIANGULAR: [Preset; 3] = [Preset::Lambda1, Preset::Lambda2, Preset::Lambda3];

fn ex_1_6_3(s: &mut Suite) -> Result<()> {
    ex_1_6_3_counts(s)?;
    ex_1_6_3_ext(s)?;
    ex_1_6_3_hereditary(s)?;
    ex_1_6_3_quiver(s)
}

fn ex_1_6_3_counts(s: &mut Suite) -> Result<()> {
    for (pre, want) in TRIANGULAR.into_iter().zip([6, 6, 5]) {
        let a = s.alg(pre)?;
        s.eq(
            format!("indecomposables of {}", a.name()),
            want,
            classify_indecomposables(&a).map(|v| v.len()),
        );
    }
    Ok(())
}

/// Largest `dim Ext^n(X, Y)` over indecomposable pairs and `0 <= n <= 4`.
fn max_ext(a: &Alg, cap: usize) -> Result<usize> {
    let ind = classify_indecomposables(a)?;
    let mut best = 0;
    for x in &ind {
        for y in &ind {
            for n in 0..=4 {
                best = best.max(ext(x, y, n, cap)?);
            }
        }
    }
    Ok(best)
}

fn ex_1_6_3_ext(s: &mut Suite) -> Result<()> {
    let cap = s.opts.cap;
    for pre in TRIANGULAR {
        let a = s.alg(pre)?;
        s.eq(
            format!("max dim Ext^n over indecomposable pairs, 0 <= n <= 4, {}", a.name()),
            1,
            max_ext(&a, cap),
        );
    }
    Ok(())
}

/// Number of indecomposable pairs with `Ext^2 != 0`.
fn ext2_support(a: &Alg, cap: usize) -> Result<usize> {
    let ind = classify_indecomposables(a)?;
    let mut count = 0;
    for x in &ind {
        for y in &ind {
            count += usize::from(ext(x, y, 2, cap)? > 0);
        }
    }
    Ok(count)
}

fn ex_1_6_3_hereditary(s: &mut Suite) -> Result<()> {
    let cap = s.opts.cap;
    for pre in TRIANGULAR {
        let a = s.alg(pre)?;
        let hereditary = pre != Preset::Lambda3;
        s.eq(
            format!("{} is hereditary (Ext^2 vanishes on indecomposables)", a.name()),
            hereditary,
            ext2_support(&a, cap).map(|c| c == 0),
        );
        if pre == Preset::Lambda3 {
            s.eq("Ext^2(S1, S3) over lambda3", 1, ext(&simple(&a, 0), &simple(&a, 2), 2, cap));
        }
    }
    Ok(())
}

fn ex_1_6_3_quiver(s: &mut Suite) -> Result<()> {
    for (pre, want) in TRIANGULAR.into_iter().zip([(6, 6), (6, 6), (5, 4)]) {
        let a = s.alg(pre)?;
        s.eq(
            format!("AR quiver of {} (vertices, arrows)", a.name()),
            want,
            ar_quiver(&a).map(|q| (q.vertices.len(), q.arrow_count())),
        );
    }
    Ok(())
}

/// `Hom_D(M, N[n])` through the projective resolution of `M` agrees with
/// `H^n Hom•(M, I_N)` through the injective resolution of `N`.
fn ex_1_7_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let ind = indecomposables(&a)?;
    let cap = s.opts.cap;
    for m in &ind {
        for n in &ind {
            let x = stalk(m, 0);
            let want: Vec<usize> = (0..=2).map(|k| hom_derived(&x, &stalk(n, 0), k, cap)).collect::<Result<_>>()?;
            let got = inj_resolution(n, cap).and_then(|r| {
                let hc = HomComplex::new(&x, &r.res)?;
                Ok((0..=2).map(|k| hc.h_dim(k)).collect::<Vec<_>>())
            });
            s.eq(
                format!("Ext^n({}, {}) by both resolutions, n in 0..2", module_label(m), module_label(n)),
                want,
                got,
            );
        }
    }
    Ok(())
}

/// Complexes with injective components: `Hom_K(I_M, X) = Hom_K(M, X)`.
fn khom_suite(s: &mut Suite, modules: &[Mod], samples: u64) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let cat: Vec<Mod> = (0..a.num_idempotents()).map(|j| injective(&a, j)).collect();
    let cap = s.opts.cap;
    for i in 0..samples {
        let x = random_complex(&a, &cat, &RandomSpec::default(), &mut s.rng(i))?;
        let pairs: Result<Vec<(usize, usize)>> = modules.iter().map(|m| khom_agreement(m, &x, cap)).collect();
        let (want, got) = match pairs {
            Ok(v) => (v.iter().map(|p| p.1).collect(), Ok(v.iter().map(|p| p.0).collect())),
            Err(e) => (Vec::new(), Err(e)),
        };
        s.eq(format!("sample {i:02}: dim Hom_K(I_M, X) = dim Hom_K(M, X)"), want, got);
    }
    Ok(())
}

fn ex_1_7_2(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let ind = indecomposables(&a)?;
    khom_suite(s, &ind, 10)
}

fn ex_5_1_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let simples: Vec<Mod> = (0..a.num_idempotents()).map(|j| simple(&a, j)).collect();
    khom_suite(s, &simples, 20)
}

/// Stable and complete-resolution data over `k[T]/(T^2)`.
fn ex_1_7_3(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::TruncPoly(2))?;
    let cert = assert_self_injective(&a)?;
    let window = s.opts.window;
    let st = stable_indecomposables(&cert)?;
    s.eq("stable indecomposables", 1, Ok(st.modules.len()));
    let sm = simple(&a, 0);
    s.eq("Ω S ≅ S", true, syzygy(&cert, &sm).map(|o| is_isomorphic(&o, &sm).is_some()));
    let cr = complete_resolution(&cert, &sm, window);
    s.eq(
        "complete resolution of S: exact inside the window, every term ≅ A",
        true,
        cr.as_ref().map_err(Clone::clone).map(|c| {
            exact_inside(&c.cx) && c.cx.degrees().all(|n| is_isomorphic(c.cx.obj(n), &regular(&a)).is_some())
        }),
    );
    s.eq(
        "Z^0 of the complete resolution ≅ S",
        true,
        cr.and_then(|c| z0(&c.cx)).map(|z| is_isomorphic(&z, &sm).is_some()),
    );
    s.eq("dim stable Hom(S, S)", 1, stable_hom(&cert, &sm, &sm).map(|h| h.dim));
    s.eq("dim Hom_K(S, S) via complete resolutions", 1, stable_hom_via_cr(&cert, &sm, &sm, window));
    Ok(())
}

/// One coproduct of two random cone triangles.
fn ex_2_1_1(s: &mut Suite) -> Result<()> {
    for pre in [Preset::Lambda1, Preset::GroundField] {
        let a = s.alg(pre)?;
        let cat = indecomposables(&a)?;
        for i in 0..20u64 {
            let mut rng = s.rng(i);
            let t1 = cone(&random_map(&a, &cat, &mut rng)?).1;
            let t2 = cone(&random_map(&a, &cat, &mut rng)?).1;
            let sum = sum_triangles(&a, &[t1, t2]);
            s.eq(
                format!("{} sample {i:02}: sum of triangles is exact with exact LES", a.name()),
                true,
                sum.and_then(|t| t.validate().map(|()| t.les_is_exact())),
            );
        }
    }
    Ok(())
}

/// Two distinct, non-homotopic fill-ins of the identity square.
fn ex_2_4_1(s: &mut Suite) -> Result<()> {
    s.alg(Preset::GroundField)?;
    let t = ambiguity_triangle()?;
    s.ok("designated triangle validates", t.validate());
    let pair = fillin_ambiguity(&t)?;
    s.eq("witness pair found", true, Ok(pair.is_some()));
    if let Some((a, b)) = pair {
        let verify = |f: &crate::complexes::FillIn| f.phi3.validate().and_then(|()| f.squares.iter().try_for_each(|h| h.verify()));
        s.ok("first fill-in verified", verify(&a));
        s.ok("second fill-in verified", verify(&b));
        s.eq(
            "fill-ins are not homotopic",
            true,
            null_homotopy(&a.phi3, &b.phi3).map(|h| h.is_none()),
        );
    }
    Ok(())
}

/// TR1 to TR4 on random maps and composable pairs.
fn ex_2_5_1(s: &mut Suite) -> Result<()> {
    for pre in [Preset::Lambda1, Preset::GroundField] {
        let a = s.alg(pre)?;
        let cat = indecomposables(&a)?;
        for i in 0..50u64 {
            let mut rng = s.rng(i);
            let spec = RandomSpec::default();
            let x = random_complex(&a, &cat, &spec, &mut rng)?;
            let y = random_complex(&a, &cat, &spec, &mut rng)?;
            let z = random_complex(&a, &cat, &spec, &mut rng)?;
            let f = random_chain_map(&x, &y, &mut rng)?;
            let g = random_chain_map(&y, &z, &mut rng)?;
            let (_, t) = cone(&f);
            let tr1 = t.validate().map(|()| t.les_is_exact());
            let tr2 = rotate(&t).and_then(|r| r.validate().map(|()| r.les_is_exact()));
            let tr3 = fill_in(&t, &t, &CMap::identity(&x), &CMap::identity(&y))
                .and_then(|fi| Ok(k_inverse(&fi.phi3)?.is_some()));
            let tr4 = octahedron(&f, &g).and_then(|o| o.validate().map(|()| true));
            let name = format!("{} sample {i:02}", a.name());
            s.eq(format!("{name}: cone triangle exact with exact LES"), true, tr1);
            s.eq(format!("{name}: rotation exact with exact LES"), true, tr2);
            s.eq(format!("{name}: fill-in of the identity square is a K-iso"), true, tr3);
            s.eq(format!("{name}: octahedron verified"), true, tr4);
        }
    }
    Ok(())
}

/// `f` is invertible in `D` iff every `H^n(f)` is invertible.
fn ex_3_1_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let cat = indecomposables(&a)?;
    let cap = s.opts.cap;
    for i in 0..50u64 {
        let mut rng = s.rng(i);
        let f = if i % 2 == 0 {
            let x = random_complex(&a, &cat, &RandomSpec::default(), &mut rng)?;
            resolve_complex(&x, cap)?.comparison
        } else {
            random_map(&a, &cat, &mut rng)?
        };
        let (lo, hi) = (f.src().lo().min(f.dst().lo()), f.src().hi().max(f.dst().hi()));
        let want = (lo..=hi).all(|n| {
            let m = induced_map(&f, n);
            m.is_square() && (m.rows() == 0 || m.is_invertible())
        });
        let got = is_iso_in_d(&f, cap).and_then(|d| {
            if let Some(c) = &d.cert {
                c.verify(&f)?;
            }
            if d.is_iso && d.cert.is_none() {
                return Err(Error::Certificate("invertible without a certificate".into()));
            }
            Ok(d.is_iso)
        });
        s.eq(format!("sample {i:02}: invertible in D"), want, got);
    }
    Ok(())
}

/// Stable categories of `k[T]/(T^n)` through complete resolutions.
fn ex_3_3_2(s: &mut Suite) -> Result<()> {
    let window = s.opts.window;
    for n in 2..=5 {
        let a = s.alg(Preset::TruncPoly(n))?;
        let cert = assert_self_injective(&a)?;
        let st = stable_indecomposables(&cert)?;
        s.eq(format!("{}: stable indecomposables", a.name()), n - 1, Ok(st.modules.len()));
        for m in &st.modules {
            let cr = complete_resolution(&cert, m, window).and_then(|c| {
                let projective = c.cx.degrees().all(|k| is_projective(c.cx.obj(k)));
                Ok(projective && exact_inside(&c.cx) && is_isomorphic(&z0(&c.cx)?, m).is_some())
            });
            s.eq(
                format!("{}: {} has a complete resolution exact inside the window with Z^0 ≅ M", a.name(), module_label(m)),
                true,
                cr,
            );
        }
        if n == 3 {
            let q = &st.quiver;
            s.eq("stable AR quiver of truncpoly(3) (vertices, arrows)", (2, 2), Ok((q.vertices.len(), q.arrow_count())));
        }
    }
    Ok(())
}

/// `H^n(X e) = (H^n X) e` for `e = E11`.
fn ex_3_5_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let cat = indecomposables(&a)?;
    let sl = Slice::new(&a, &[0])?;
    for i in 0..50u64 {
        let mut rng = s.rng(i);
        let f = random_map(&a, &cat, &mut rng)?;
        let x = f.src();
        let want: Vec<usize> = x.degrees().map(|n| sl.module(&x.cohomology_at(n).module).map(|m| m.dim())).collect::<Result<_>>()?;
        let got = sl.complex(x).map(|xe| x.degrees().map(|n| xe.cohomology_at(n).module.dim()).collect::<Vec<_>>());
        s.eq(format!("sample {i:02}: dim H^n(X e) = dim (H^n X) e"), want, got);
        s.ok(
            format!("sample {i:02}: sliced chain map is a chain map"),
            sl.chain_map(&f).and_then(|g| g.validate()),
        );
    }
    Ok(())
}

/// `End(B) ≅ Λ2`, `End(C) ≅ Λ3`, and the images of shifted
/// indecomposables are pairwise non-isomorphic.
fn ex_5_3_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let (window, cap) = (s.opts.window, s.opts.cap);
    for (name, target) in [("B", Preset::Lambda2), ("C", Preset::Lambda3)] {
        let t = s.alg(target)?;
        let r = tilting_check(&tilting_module(&a, name)?, &t, window, cap)?;
        s.eq(format!("dim End({name})"), 5, Ok(r.end_dim));
        let side = match r.side {
            Some(Side::End) => "End",
            Some(Side::Opposite) => "End^op",
            None => "none",
        };
        let verified = match (&r.iso, r.side) {
            (Some(f), Some(Side::End)) => f.verify(&crate::derived::end_algebra(&tilting_module(&a, name)?)?.alg, &t),
            (Some(f), Some(Side::Opposite)) => {
                f.verify(&crate::derived::end_algebra(&tilting_module(&a, name)?)?.alg.opposite(), &t)
            }
            _ => false,
        };
        s.eq(format!("End({name}) ≅ {} (matched side: {side})", t.name()), true, Ok(verified));
        s.eq(
            format!("images of indecomposables under RHom({name}, -) distinct over shifts {window:?}"),
            Vec::<String>::new(),
            Ok(r.collisions.iter().map(|c| format!("{c:?}")).collect()),
        );
    }
    Ok(())
}

/// `H^n End•(pS) = ⊕ Ext^n(S_i, S_j)` for `S = S1 ⊕ S2 ⊕ S3`.
fn ex_6_1_1(s: &mut Suite) -> Result<()> {
    let a = s.alg(Preset::Lambda1)?;
    let cap = s.opts.cap;
    let simples: Vec<Mod> = (0..a.num_idempotents()).map(|j| simple(&a, j)).collect();
    let sum = direct_sum(&a, &simples)?.module;
    let dg = dg_end(&proj_resolution(&sum, cap)?.res)?;
    let dims = dg.cohomology_dims();
    let got: Vec<usize> = (0..=3).map(|n| dims.get(&n).copied().unwrap_or(0)).collect();
    s.eq("dim H^n End(pS), n in 0..3", vec![3, 2, 0, 0], Ok(got.clone()));
    let mut via_ext = Vec::new();
    for n in 0..=3 {
        let mut t = 0;
        for x in &simples {
            for y in &simples {
                t += ext(x, y, n, cap)?;
            }
        }
        via_ext.push(t);
    }
    s.eq("sum of dim Ext^n(S_i, S_j), n in 0..3", via_ext, Ok(got));
    s.ok("Leibniz rule", dg.check_leibniz());
    s.ok("associativity", dg.check_associativity());
    s.ok("unit", dg.check_unit());
    Ok(())
}

/// Degreewise split sequences give the same triangles as cones.
fn ex_7_4_1(s: &mut Suite) -> Result<()> {
    for pre in [Preset::Lambda1, Preset::GroundField] {
        let a = s.alg(pre)?;
        let cat = indecomposables(&a)?;
        for i in 0..50u64 {
            let mut rng = s.rng(i);
            let f = random_map(&a, &cat, &mut rng)?;
            let (_, t) = cone(&f);
            let from_cone = split_seq_to_triangle(&t.g, &t.h).and_then(|st| {
                st.tri.validate()?;
                Ok(st.tri.h == f.shift(1).neg())
            });
            let name = format!("{} sample {i:02}", a.name());
            s.eq(format!("{name}: Y -> C(f) -> ΣX is a triangle with connecting map -Σf"), true, from_cone);
            let (x, y) = (f.src().clone(), f.dst().clone());
            let (_, incs, projs) = Cx::direct_sum(&a, &[x, y])?;
            let split = split_seq_to_triangle(&incs[0], &projs[1]).and_then(|st| {
                st.tri.validate()?;
                Ok(st.tri.h.is_zero())
            });
            s.eq(format!("{name}: X -> X + Y -> Y is a triangle with zero connecting map"), true, split);
        }
    }
    Ok(())
}

/// Complete resolutions recover stable Homs over `k[T]/(T^n)`.
fn ex_7_5_1(s: &mut Suite) -> Result<()> {
    let window = s.opts.window;
    for n in 2..=5 {
        let a = s.alg(Preset::TruncPoly(n))?;
        let cert = assert_self_injective(&a)?;
        let mods = stable_indecomposables(&cert)?.modules;
        for m in &mods {
            s.eq(
                format!("{}: Z^0 of the complete resolution of {} ≅ M", a.name(), module_label(m)),
                true,
                complete_resolution(&cert, m, window).and_then(|c| Ok(is_isomorphic(&z0(&c.cx)?, m).is_some())),
            );
        }
        let want: Vec<usize> = mods
            .iter()
            .flat_map(|x| mods.iter().map(move |y| (x, y)))
            .map(|(x, y)| stable_hom(&cert, x, y).map(|h| h.dim))
            .collect::<Result<_>>()?;
        let got: Result<Vec<usize>> = mods
            .iter()
            .flat_map(|x| mods.iter().map(move |y| (x, y)))
            .map(|(x, y)| stable_hom_via_cr(&cert, x, y, window))
            .collect();
        s.eq(format!("{}: stable Hom table via complete resolutions", a.name()), want, got);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_list_the_available_ones() {
        match run_exercise("bogus", &Options::default()) {
            Err(Error::UnknownExercise { id, available }) => {
                assert_eq!(id, "bogus");
                assert!(available.contains("1.5.1") && available.contains("all"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prime_policy() {
        assert_eq!(Field::Any.resolve(None), 101);
        assert_eq!(Field::Classification.resolve(None), 2);
        assert_eq!(Field::Classification.resolve(Some(3)), 3);
        assert_eq!(Field::Classification.resolve(Some(101)), 2);
        assert_eq!(Field::Fixed(2).resolve(Some(5)), 2);
        assert!(run_exercise("1.5.1", &Options { prime: Some(4), ..Options::default() }).is_err());
    }

    #[test]
    fn counts_report() {
        let r = run_exercise("1.6.3-counts", &Options::default()).unwrap();
        assert_eq!(r.prime, 2);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.checks.len(), 3);
        assert!(r.runtime_ms.is_none());
        assert_eq!(r.to_json(), run_exercise("1.6.3-counts", &Options::default()).unwrap().to_json());
    }
}
