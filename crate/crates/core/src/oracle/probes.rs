//! Sampling probes for base points and for separation of length-2 schemes.
//!
//! Every probe is one-sided: a base-locus probe fires when all sections vanish
//! at the probe point, a separation probe fires when the two conditions of a
//! length-2 scheme cut the section space by less than 2.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::curve::residual_point;
use super::geometry::{fixed_quadric, GeometrySetup};
use super::monomials::Point;
use super::SectionSpace;

/// Independent random sections tried by the residual-intersection probes.
const RESIDUAL_SECTIONS: usize = 4;
/// Lines `PᵢPⱼ` are probed among the first this-many points.
const LINE_POINTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeCategory {
    BaseLocus,
    Separation,
}

/// Tally of one named probe within one trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub name: &'static str,
    pub category: ProbeCategory,
    pub tested: usize,
    pub fired: usize,
    pub witness: Option<String>,
}

impl ProbeOutcome {
    fn new(name: &'static str, category: ProbeCategory) -> Self {
        Self { name, category, tested: 0, fired: 0, witness: None }
    }

    fn record(&mut self, fired: bool, witness: impl FnOnce() -> String) {
        self.tested += 1;
        if fired {
            self.fired += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }
}

fn show(x: &Point) -> String {
    format!("({}:{}:{}:{})", x[0], x[1], x[2], x[3])
}

/// `a + t·b` coordinatewise.
fn on_line(geom: &GeometrySetup, a: &Point, b: &Point, t: u64) -> Point {
    let f = &geom.field;
    [0, 1, 2, 3].map(|j| f.mul_add(t, b[j], a[j]))
}

fn line_pairs(r: usize) -> Vec<(usize, usize)> {
    let n = r.min(LINE_POINTS);
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn on_curve(geom: &GeometrySetup, x: &Point) -> bool {
    fixed_quadric(&geom.field, x) == 0 && geom.second(x) == 0
}

/// Base points with their multiplicities that lie on `D` and carry a condition.
fn known_on_curve(space: &SectionSpace, geom: &GeometrySetup) -> Vec<(Point, u32)> {
    geom.points
        .iter()
        .zip(space.multiplicities())
        .filter(|(p, &m)| m > 0 && on_curve(geom, p))
        .map(|(&p, &m)| (p, m))
        .collect()
}

/// Probes the common zero locus of the sections.
pub fn probe_base_locus<R: Rng + ?Sized>(
    space: &SectionSpace,
    geom: &GeometrySetup,
    count: usize,
    rng: &mut R,
) -> Vec<ProbeOutcome> {
    use ProbeCategory::BaseLocus;
    let mut g = geom.clone();
    let mut out = Vec::new();

    let mut generic = ProbeOutcome::new("generic", BaseLocus);
    for _ in 0..count {
        let x = g.sample_generic(rng);
        generic.record(space.vanishes_at(&x), || show(&x));
    }
    out.push(generic);

    let mut curve = ProbeOutcome::new("on-D", BaseLocus);
    for _ in 0..count {
        let Ok(x) = g.sample_on_curve(rng) else { break };
        curve.record(space.vanishes_at(&x), || show(&x));
    }
    out.push(curve);

    // a single residual point of F ∩ D is the only candidate base point on D
    let mut residual = ProbeOutcome::new("residual-on-D", BaseLocus);
    if count > 0 && space.h0() > 0 {
        let known = known_on_curve(space, &g);
        for _ in 0..RESIDUAL_SECTIONS {
            let f = space.random_section(rng);
            if let Some(y) = residual_point(&g, space.basis(), &f, &known) {
                residual.record(space.vanishes_at(&y), || show(&y));
            }
        }
    }
    out.push(residual);

    let mut line = ProbeOutcome::new("on-line", BaseLocus);
    for (i, j) in line_pairs(g.r()) {
        for _ in 0..count {
            let t = g.field.random_nonzero(rng);
            let x = on_line(&g, &g.points[i], &g.points[j], t);
            line.record(space.vanishes_at(&x), || format!("P{}P{} {}", i + 1, j + 1, show(&x)));
        }
    }
    out.push(line);
    out
}

/// Probes separation of point pairs and tangent vectors.
pub fn probe_separation<R: Rng + ?Sized>(
    space: &SectionSpace,
    geom: &GeometrySetup,
    count: usize,
    rng: &mut R,
) -> Vec<ProbeOutcome> {
    use ProbeCategory::Separation;
    let mut g = geom.clone();
    let basis = space.basis();
    let field = g.field;
    let mut out = Vec::new();
    let pair_fires = |x: &Point, y: &Point| {
        space.separation_rank(basis.evaluation(&field, x), basis.evaluation(&field, y)) < 2
    };

    let mut generic = ProbeOutcome::new("pair-generic", Separation);
    for _ in 0..count {
        let (x, y) = (g.sample_generic(rng), g.sample_generic(rng));
        generic.record(pair_fires(&x, &y), || format!("{} {}", show(&x), show(&y)));
    }
    out.push(generic);

    let mut both = ProbeOutcome::new("pair-on-D", Separation);
    for _ in 0..count {
        let (Ok(x), Ok(y)) = (g.sample_on_curve(rng), g.sample_on_curve(rng)) else { break };
        both.record(pair_fires(&x, &y), || format!("{} {}", show(&x), show(&y)));
    }
    out.push(both);

    let mut mixed = ProbeOutcome::new("pair-D-offD", Separation);
    for _ in 0..count {
        let Ok(x) = g.sample_on_curve(rng) else { break };
        let y = g.sample_generic(rng);
        mixed.record(pair_fires(&x, &y), || format!("{} {}", show(&x), show(&y)));
    }
    out.push(mixed);

    // the two points of D cut out together with x by the sections through x
    let mut residual = ProbeOutcome::new("pair-residual-on-D", Separation);
    if count > 0 && space.h0() > 0 {
        let known = known_on_curve(space, &g);
        for _ in 0..RESIDUAL_SECTIONS {
            let Ok(x) = g.sample_on_curve(rng) else { break };
            let Some(f) = space.random_section_through(&x, rng) else {
                residual.record(true, || format!("no section through {}", show(&x)));
                continue;
            };
            let mut with_x = known.clone();
            with_x.push((x, 1));
            if let Some(y) = residual_point(&g, basis, &f, &with_x) {
                residual.record(pair_fires(&x, &y), || format!("{} {}", show(&x), show(&y)));
            }
        }
    }
    out.push(residual);

    let mut line = ProbeOutcome::new("pair-line", Separation);
    for (i, j) in line_pairs(g.r()) {
        for _ in 0..count {
            let (s, t) = (field.random_nonzero(rng), field.random_nonzero(rng));
            let x = on_line(&g, &g.points[i], &g.points[j], s);
            let y = on_line(&g, &g.points[i], &g.points[j], t);
            line.record(pair_fires(&x, &y), || format!("P{}P{} {} {}", i + 1, j + 1, show(&x), show(&y)));
        }
    }
    out.push(line);

    // pairs on a line through P₁ and a general point
    let mut cone = ProbeOutcome::new("pair-cone", Separation);
    if let Some(&p1) = g.points.first() {
        for _ in 0..count {
            let z = g.sample_generic(rng);
            let (s, t) = (field.random_nonzero(rng), field.random_nonzero(rng));
            let x = on_line(&g, &z, &p1, s);
            let y = on_line(&g, &z, &p1, t);
            cone.record(pair_fires(&x, &y), || format!("{} {}", show(&x), show(&y)));
        }
    }
    out.push(cone);

    let tangent_fires = |x: &Point, v: &Point| {
        space.separation_rank(basis.evaluation(&field, x), basis.directional_derivative(&field, x, v)) < 2
    };

    let mut tangent = ProbeOutcome::new("tangent-generic", Separation);
    for _ in 0..count {
        let x = g.sample_generic(rng);
        let v = [(); 4].map(|_| field.random(rng));
        tangent.record(tangent_fires(&x, &v), || format!("{} along {}", show(&x), show(&v)));
    }
    out.push(tangent);

    let mut tangent_d = ProbeOutcome::new("tangent-on-D", Separation);
    for _ in 0..count {
        let Ok(x) = g.sample_on_curve(rng) else { break };
        let Some(v) = g.tangent_direction(&x) else { continue };
        tangent_d.record(tangent_fires(&x, &v), || format!("{} along {}", show(&x), show(&v)));
    }
    out.push(tangent_d);
    out
}
