//! Automorphisms of `W_{k1,k2}` (fiber swap, chart swap), pullback of
//! bivectors, isomorphism certificates, Poisson structures on the local
//! surfaces `Z_k`, and the surface embeddings that generate the module.

use crate::exactpoly::{Monomial, Poly, Scalar, Var};
use crate::linalg;
use crate::sections::{coordinatize, BivectorField, Generator, NotGlobal, SectionKey};
use crate::threefold::ThreefoldSpec;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasicMap {
    /// `s0`: exchange the two fiber directions (needs `k1 = k2`).
    FiberSwap,
    /// `s1`: exchange the charts `U` and `V`.
    ChartSwap,
}

impl fmt::Display for BasicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicMap::FiberSwap => write!(f, "s0"),
            BasicMap::ChartSwap => write!(f, "s1"),
        }
    }
}

/// A composition of basic automorphisms, applied left to right.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThreefoldMap {
    pub spec: ThreefoldSpec,
    pub word: Vec<BasicMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("the fiber swap exists only when k1 = k2, got {0}")]
    FiberSwapUnavailable(ThreefoldSpec),
    #[error("chart swap needs a global bivector: {0}")]
    NotGlobal(NotGlobal),
    #[error("no surface structure catalog for twist {0}")]
    UnsupportedTwist(i64),
    #[error("embedding and surface structure are incompatible: {0}")]
    IncompatibleEmbedding(String),
}

impl ThreefoldMap {
    pub fn fiber_swap(spec: ThreefoldSpec) -> Result<Self, SymmetryError> {
        if spec.k1 != spec.k2 {
            return Err(SymmetryError::FiberSwapUnavailable(spec));
        }
        Ok(ThreefoldMap {
            spec,
            word: vec![BasicMap::FiberSwap],
        })
    }

    pub fn chart_swap(spec: ThreefoldSpec) -> Self {
        ThreefoldMap {
            spec,
            word: vec![BasicMap::ChartSwap],
        }
    }

    pub fn compose(spec: ThreefoldSpec, word: Vec<BasicMap>) -> Result<Self, SymmetryError> {
        if word.contains(&BasicMap::FiberSwap) && spec.k1 != spec.k2 {
            return Err(SymmetryError::FiberSwapUnavailable(spec));
        }
        Ok(ThreefoldMap { spec, word })
    }

    /// Pullback of a bivector along the automorphism.
    pub fn pullback(&self, q: &BivectorField) -> Result<BivectorField, SymmetryError> {
        assert_eq!(self.spec, q.spec, "spec mismatch");
        let mut cur = q.clone();
        for step in &self.word {
            cur = match step {
                BasicMap::FiberSwap => pullback_fiber_swap(&cur),
                BasicMap::ChartSwap => pullback_chart_swap(&cur)?,
            };
        }
        Ok(cur)
    }

    pub fn word_string(&self) -> String {
        self.word
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("∘")
    }
}

/// `s0`: `(z, u1, u2) ↦ (z, u2, u1)` swaps `∂1 ↔ ∂2`, so `b0 ↦ -b0`,
/// `b1 ↦ -b2`, `b2 ↦ -b1`, with arguments swapped.
fn pullback_fiber_swap(q: &BivectorField) -> BivectorField {
    let swap = |p: &Poly| -> Poly {
        let z = Poly::var(Var::Z);
        let u1 = Poly::var(Var::U1);
        let u2 = Poly::var(Var::U2);
        p.substitute([&z, &u2, &u1]).expect("polynomial images")
    };
    let [a, b, c] = &q.u_coeffs;
    BivectorField::new(q.spec, [swap(a).neg(), swap(c).neg(), swap(b).neg()])
}

/// `s1`: the U-chart data of the pullback is the relabeled V-chart data.
fn pullback_chart_swap(q: &BivectorField) -> Result<BivectorField, SymmetryError> {
    let v = q.v_coeffs().map_err(SymmetryError::NotGlobal)?;
    Ok(BivectorField::new(q.spec, v))
}

/// A certified isomorphism: `pullback(word, from) = scale · to`.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub from: String,
    pub to: String,
    pub map: ThreefoldMap,
    pub scale: Scalar,
}

/// Checks proportionality `pullback(word)(from) = λ·to` and returns `λ`.
pub fn certify(
    map: &ThreefoldMap,
    from: &BivectorField,
    to: &BivectorField,
) -> Option<Scalar> {
    let image = map.pullback(from).ok()?;
    proportionality(&image, to)
}

/// The scalar `λ` with `a = λ·b`, when the triples are proportional.
pub fn proportionality(a: &BivectorField, b: &BivectorField) -> Option<Scalar> {
    if b.is_zero() {
        return a.is_zero().then(Scalar::one);
    }
    let (comp, lead) = (0..3).find_map(|i| b.u_coeffs[i].leading_monomial().map(|m| (i, m)))?;
    let denom = b.u_coeffs[comp].coefficient(&lead);
    let numer = a.u_coeffs[comp].coefficient(&lead);
    let lambda = numer / denom;
    (a.u_coeffs == b.scale(&lambda).u_coeffs).then_some(lambda)
}

/// All isomorphisms among the labeled structures that are certified by
/// words of length ≤ 2 in the available basic maps.
pub fn isomorphism_catalog(spec: ThreefoldSpec, structures: &[BivectorField]) -> Vec<IsoCertificate> {
    let mut words: Vec<Vec<BasicMap>> = vec![vec![BasicMap::ChartSwap]];
    if spec.k1 == spec.k2 {
        words.push(vec![BasicMap::FiberSwap]);
        words.push(vec![BasicMap::FiberSwap, BasicMap::ChartSwap]);
        words.push(vec![BasicMap::ChartSwap, BasicMap::FiberSwap]);
    }
    let mut out = Vec::new();
    for (i, from) in structures.iter().enumerate() {
        for (j, to) in structures.iter().enumerate() {
            if i == j {
                continue;
            }
            for word in &words {
                let map = ThreefoldMap::compose(spec, word.clone()).expect("valid word");
                if let Some(scale) = certify(&map, from, to) {
                    out.push(IsoCertificate {
                        from: from.label.clone().unwrap_or_else(|| format!("#{i}")),
                        to: to.label.clone().unwrap_or_else(|| format!("#{j}")),
                        map,
                        scale,
                    });
                    break;
                }
            }
        }
    }
    out
}

/// A Poisson structure on the surface `Z_k = Tot(O(-k))`, stored as the
/// coefficient pair on `(∂z∧∂u, ∂ξ∧∂v)`. Polynomials use slot 0 for the
/// base and slot 1 for the fiber coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceStructure {
    pub k: i64,
    pub u_coeff: Poly,
    pub v_coeff: Poly,
    pub label: String,
}

/// Rewrites a surface-chart polynomial in the other chart
/// (`z ↦ z^-1`, `u ↦ z^k u`).
pub fn surface_to_other_chart(k: i64, p: &Poly) -> Poly {
    let base = Poly::from_monomial(Monomial::new(-1, 0, 0), Scalar::one());
    let fiber = Poly::from_monomial(Monomial::new(k, 1, 0), Scalar::one());
    let unused = Poly::var(Var::U2);
    p.substitute([&base, &fiber, &unused]).expect("monomial images")
}

impl SurfaceStructure {
    /// The `∂z∧∂u` coefficient transforms by `-z^{k-2}`; the stored pair
    /// must satisfy this exactly to define one global bivector.
    pub fn transition_consistent(&self) -> bool {
        let factor = Poly::from_monomial(Monomial::new(self.k - 2, 0, 0), -Scalar::one());
        let expected = surface_to_other_chart(self.k, &factor.mul(&self.u_coeff));
        expected == self.v_coeff && !self.v_coeff.has_negative_exponent()
    }

    /// Multiplies by a chart-wise function pair (the pair itself need not
    /// be holomorphic on both charts; the product must be).
    pub fn scaled(&self, mult_u: &Poly, mult_v: &Poly, label: &str) -> SurfaceStructure {
        SurfaceStructure {
            k: self.k,
            u_coeff: self.u_coeff.mul(mult_u),
            v_coeff: self.v_coeff.mul(mult_v),
            label: label.to_string(),
        }
    }
}

/// The generating Poisson structures on `Z_k` for the supported twists,
/// each validated against the surface transition.
pub fn surface_catalog(k: i64) -> Result<Vec<SurfaceStructure>, SymmetryError> {
    let table =
        crate::catalog::surface_structure_table(k).ok_or(SymmetryError::UnsupportedTwist(k))?;
    let parse = |s: &str, names: [&str; 3]| crate::exactpoly::parse_poly(s, names).unwrap();
    let out: Vec<SurfaceStructure> = table
        .iter()
        .enumerate()
        .map(|(i, (u, v))| SurfaceStructure {
            k,
            u_coeff: parse(u, ["z", "u", "_"]),
            v_coeff: parse(v, ["xi", "v", "_"]),
            label: format!("pi{}", i),
        })
        .collect();
    for s in &out {
        debug_assert!(s.transition_consistent(), "catalog entry {} on Z_{k}", s.label);
    }
    Ok(out)
}

/// Any bivector on a surface has vanishing self-bracket for degree
/// reasons; kept as a smoke test by embedding into a threefold slot.
pub fn surface_self_bracket(s: &SurfaceStructure) -> Poly {
    let spec = ThreefoldSpec::new(s.k, 2 - s.k);
    let q = BivectorField::new(spec, [Poly::zero(), Poly::zero(), s.u_coeff.clone()]);
    crate::schouten::self_bracket(&q).coeff
}

/// The three embedded surfaces of a threefold.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmbeddingSlot {
    /// `j0`: a fiber plane `C²` at a fixed base point.
    FiberPlane,
    /// `j1`: the first summand surface `u2 = v2 = 0` (`Z_{k1}`).
    FirstSummand,
    /// `j2`: the second summand surface `u1 = v1 = 0` (`Z_{k2}`).
    SecondSummand,
}

impl fmt::Display for EmbeddingSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingSlot::FiberPlane => write!(f, "j0"),
            EmbeddingSlot::FirstSummand => write!(f, "j1"),
            EmbeddingSlot::SecondSummand => write!(f, "j2"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SurfaceEmbedding {
    pub spec: ThreefoldSpec,
    pub slot: EmbeddingSlot,
}

impl SurfaceEmbedding {
    pub fn new(spec: ThreefoldSpec, slot: EmbeddingSlot) -> Self {
        SurfaceEmbedding { spec, slot }
    }

    /// Twist of the embedded surface, `None` for the fiber plane.
    pub fn surface_twist(&self) -> Option<i64> {
        match self.slot {
            EmbeddingSlot::FiberPlane => None,
            EmbeddingSlot::FirstSummand => Some(self.spec.k1),
            EmbeddingSlot::SecondSummand => Some(self.spec.k2),
        }
    }

    /// Base point of the fiber-plane embedding: `z = 1` on `W(2,0)`
    /// (where both charts see it), `z = 0` otherwise.
    pub fn fiber_base_point(&self) -> i64 {
        if self.spec == ThreefoldSpec::new(2, 0) {
            1
        } else {
            0
        }
    }
}

/// Moves `u2`-exponents into the surface fiber slot.
fn reslot_u2(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        assert_eq!(m.u1, 0, "residual normal coordinate");
        out.add_term(Monomial::new(m.z, m.u2, 0), c.clone());
    }
    out
}

/// The induced structure on an embedded summand surface: restrict the
/// tangent slot of the coefficient triple to the surface, in both charts.
pub fn restrict_to_surface(
    q: &BivectorField,
    emb: SurfaceEmbedding,
) -> Result<SurfaceStructure, SymmetryError> {
    assert_eq!(q.spec, emb.spec, "spec mismatch");
    let v = q.v_coeffs().map_err(SymmetryError::NotGlobal)?;
    let k = emb
        .surface_twist()
        .ok_or_else(|| SymmetryError::IncompatibleEmbedding("fiber plane has no Z_k twist".into()))?;
    let (z, u1, u2) = (Poly::var(Var::Z), Poly::var(Var::U1), Poly::var(Var::U2));
    let zero = Poly::zero();
    let (u_coeff, v_coeff) = match emb.slot {
        EmbeddingSlot::FirstSummand => (
            q.u_coeffs[2].substitute([&z, &u1, &zero]).unwrap(),
            v[2].substitute([&z, &u1, &zero]).unwrap(),
        ),
        EmbeddingSlot::SecondSummand => (
            reslot_u2(&q.u_coeffs[1].substitute([&z, &zero, &u2]).unwrap()),
            reslot_u2(&v[1].substitute([&z, &zero, &u2]).unwrap()),
        ),
        EmbeddingSlot::FiberPlane => unreachable!(),
    };
    Ok(SurfaceStructure {
        k,
        u_coeff,
        v_coeff,
        label: String::new(),
    })
}

/// The induced structure on the fiber plane: the `b0`-coefficient at the
/// base point, as a polynomial in the fiber coordinates.
pub fn restrict_to_fiber(q: &BivectorField, emb: SurfaceEmbedding) -> Poly {
    let c = Poly::constant(crate::exactpoly::scalar(emb.fiber_base_point()));
    q.u_coeffs[0]
        .substitute([&c, &Poly::var(Var::U1), &Poly::var(Var::U2)])
        .unwrap()
}

/// Constant extension of a surface structure into its tangent slot of the
/// threefold (U-chart data; the result need not be global).
pub fn embed_structure(emb: SurfaceEmbedding, s: &SurfaceStructure) -> BivectorField {
    let mut coeffs = [Poly::zero(), Poly::zero(), Poly::zero()];
    match emb.slot {
        EmbeddingSlot::FirstSummand => coeffs[2] = s.u_coeff.clone(),
        EmbeddingSlot::SecondSummand => {
            let mut moved = Poly::zero();
            for (m, c) in s.u_coeff.terms() {
                moved.add_term(Monomial::new(m.z, 0, m.u1), c.clone());
            }
            coeffs[1] = moved;
        }
        EmbeddingSlot::FiberPlane => {
            let mut moved = Poly::zero();
            for (m, c) in s.u_coeff.terms() {
                moved.add_term(Monomial::new(0, m.u1, m.u2), c.clone());
            }
            coeffs[0] = moved;
        }
    }
    BivectorField::new(emb.spec, coeffs)
}

/// How a module generator is reached from embedded surface structures.
#[derive(Clone, Debug)]
pub enum Witness {
    /// Restriction to the embedded surface equals a catalog structure.
    Direct {
        slot: EmbeddingSlot,
        structure: String,
    },
    /// Restriction equals a catalog structure scaled by a chart-wise
    /// multiplier pair (holomorphic only upstairs, product global).
    Scaled {
        slot: EmbeddingSlot,
        structure: String,
        mult_u: String,
    },
    /// The `b0`-coefficient restricted to the fiber plane, with vanishing
    /// other components; the generator is the constant extension.
    Fiber { base_z: i64, coeff: String },
    /// Pullback transport of an already-witnessed generator.
    Transport {
        word: String,
        of: String,
        scale: Scalar,
    },
    /// Exact combination `Σ mult_i · gen_i` with U-polynomial multipliers
    /// (global products), over already-witnessed generators.
    Ambient { terms: Vec<(String, String)> },
    Unreached,
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub spec: ThreefoldSpec,
    pub items: Vec<(String, Witness)>,
}

impl GenerationReport {
    pub fn all_reached(&self) -> bool {
        self.items
            .iter()
            .all(|(_, w)| !matches!(w, Witness::Unreached))
    }
}

/// Candidate structures for the embedding witnesses on a spec: the plain
/// surface catalogs plus, when the twist admits no constant structures,
/// the tautological fiber-multiplier scalings.
fn witness_structures(k: i64) -> Vec<(SurfaceStructure, Option<String>)> {
    let mut out = Vec::new();
    if let Ok(cat) = surface_catalog(k) {
        for s in &cat {
            out.push((s.clone(), None));
        }
        // g·π with g = u on U, ξ^{-1}v on V (global only in products).
        let g_u = Poly::var(Var::U1);
        let g_v = Poly::from_monomial(Monomial::new(-1, 1, 0), Scalar::one());
        for s in &cat {
            let scaled = s.scaled(&g_u, &g_v, &format!("g*{}", s.label));
            if !scaled.v_coeff.has_negative_exponent() {
                out.push((scaled.clone(), Some("u".to_string())));
            }
        }
    }
    out
}

/// Finds, for every generator, a witness built from embedded surface
/// structures, transports, or ambient combinations of witnessed ones.
pub fn verify_generation(spec: ThreefoldSpec, generators: &[Generator]) -> GenerationReport {
    let mut items: Vec<(String, Witness)> = Vec::new();
    let mut witnessed: Vec<usize> = Vec::new();

    // Pass 1: direct embedding witnesses.
    for (idx, gen) in generators.iter().enumerate() {
        let mut found: Option<Witness> = None;

        // Fiber-plane witness: pure b0-coefficient in fiber coordinates.
        let emb0 = SurfaceEmbedding::new(spec, EmbeddingSlot::FiberPlane);
        if gen.field.u_coeffs[1].is_zero() && gen.field.u_coeffs[2].is_zero() {
            let restricted = restrict_to_fiber(&gen.field, emb0);
            let fiberwise = gen.field.u_coeffs[0]
                .terms()
                .all(|(m, _)| m.z == 0 || emb0.fiber_base_point() != 0);
            if !restricted.is_zero() && fiberwise {
                found = Some(Witness::Fiber {
                    base_z: emb0.fiber_base_point(),
                    coeff: restricted.render(["_", "u", "v"]),
                });
            }
        }

        for slot in [EmbeddingSlot::FirstSummand, EmbeddingSlot::SecondSummand] {
            if found.is_some() {
                break;
            }
            let emb = SurfaceEmbedding::new(spec, slot);
            let Ok(restricted) = restrict_to_surface(&gen.field, emb) else {
                continue;
            };
            if restricted.u_coeff.is_zero() {
                continue;
            }
            // The witness is exact only when the generator IS the
            // extension of its restriction.
            if embed_structure(emb, &restricted).u_coeffs != gen.field.u_coeffs {
                continue;
            }
            let k = emb.surface_twist().unwrap();
            for (s, mult) in witness_structures(k) {
                if s.u_coeff == restricted.u_coeff && s.v_coeff == restricted.v_coeff {
                    found = Some(match mult {
                        None => Witness::Direct {
                            slot,
                            structure: s.label.clone(),
                        },
                        Some(m) => Witness::Scaled {
                            slot,
                            structure: s.label.clone(),
                            mult_u: m,
                        },
                    });
                    break;
                }
            }
        }

        if found.is_some() {
            witnessed.push(idx);
        }
        items.push((gen.label.clone(), found.unwrap_or(Witness::Unreached)));
    }

    // Pass 2: transports of witnessed generators.
    let words: Vec<Vec<BasicMap>> = if spec.k1 == spec.k2 {
        vec![
            vec![BasicMap::FiberSwap],
            vec![BasicMap::ChartSwap],
            vec![BasicMap::FiberSwap, BasicMap::ChartSwap],
            vec![BasicMap::ChartSwap, BasicMap::FiberSwap],
        ]
    } else {
        vec![vec![BasicMap::ChartSwap]]
    };
    for idx in 0..generators.len() {
        if !matches!(items[idx].1, Witness::Unreached) {
            continue;
        }
        'search: for &src in &witnessed {
            for word in &words {
                let map = ThreefoldMap::compose(spec, word.clone()).unwrap();
                if let Some(scale) = certify(&map, &generators[src].field, &generators[idx].field)
                {
                    items[idx].1 = Witness::Transport {
                        word: map.word_string(),
                        of: generators[src].label.clone(),
                        scale,
                    };
                    break 'search;
                }
            }
        }
        if !matches!(items[idx].1, Witness::Unreached) {
            witnessed.push(idx);
        }
    }

    // Pass 3: ambient combinations of witnessed generators.
    for idx in 0..generators.len() {
        if !matches!(items[idx].1, Witness::Unreached) {
            continue;
        }
        let sources: Vec<&Generator> = witnessed.iter().map(|&i| &generators[i]).collect();
        if let Some(terms) = ambient_express(&generators[idx].field, &sources) {
            items[idx].1 = Witness::Ambient { terms };
            witnessed.push(idx);
        }
    }

    GenerationReport { spec, items }
}

/// Solves `target = Σ m_i · gen_i` with arbitrary U-polynomial monomial
/// multipliers of bounded degree (the products, not the multipliers, are
/// global). Returns (multiplier, generator label) pairs.
pub fn ambient_express(
    target: &BivectorField,
    gens: &[&Generator],
) -> Option<Vec<(String, String)>> {
    let target_grade = target.grade()?;
    let zmax = target
        .u_coeffs
        .iter()
        .filter_map(|p| p.terms().map(|(m, _)| m.z).max())
        .max()
        .unwrap_or(0)
        + 2;
    let mut columns: Vec<BTreeMap<SectionKey, Scalar>> = Vec::new();
    let mut keys: Vec<(usize, Monomial)> = Vec::new();
    for (i, gen) in gens.iter().enumerate() {
        if gen.grade > target_grade {
            continue;
        }
        let d = target_grade - gen.grade;
        for s in 0..=d {
            let t = d - s;
            for r in 0..=zmax {
                let m = Monomial::new(r, s, t);
                let prod = gen.field.mul_poly(&Poly::from_monomial(m, Scalar::one()));
                columns.push(coordinatize(&prod.u_coeffs));
                keys.push((i, m));
            }
        }
    }
    let sol = linalg::solve(&columns, &coordinatize(&target.u_coeffs))?;
    let mut terms = Vec::new();
    for ((i, m), c) in keys.into_iter().zip(sol) {
        if !c.is_zero() {
            let mult = Poly::from_monomial(m, c);
            terms.push((
                mult.to_string(),
                gens[i].label.clone(),
            ));
        }
    }
    Some(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::schouten::is_integrable;
    use crate::threefold::Chart;

    fn gen(spec: ThreefoldSpec, label: &str) -> BivectorField {
        catalog::generator(spec, label).unwrap()
    }

    #[test]
    fn w1_symmetry_diagram() {
        let w1 = catalog::w1();
        let s0 = ThreefoldMap::fiber_swap(w1).unwrap();
        let s1 = ThreefoldMap::chart_swap(w1);
        // e1 = s0*(e2) and e4 = s1*(e2), each up to the sign that the
        // basis orientation picks up.
        assert_eq!(
            certify(&s0, &gen(w1, "e2"), &gen(w1, "e1")),
            Some(-Scalar::one())
        );
        assert_eq!(
            certify(&s1, &gen(w1, "e2"), &gen(w1, "e4")),
            Some(-Scalar::one())
        );
        // The composition lands on e3 with scale +1.
        let comp = ThreefoldMap::compose(w1, vec![BasicMap::FiberSwap, BasicMap::ChartSwap]).unwrap();
        assert_eq!(certify(&comp, &gen(w1, "e2"), &gen(w1, "e3")), Some(Scalar::one()));
    }

    #[test]
    fn pullbacks_are_involutions() {
        let w1 = catalog::w1();
        for label in ["e1", "e2", "e3", "e4"] {
            let q = gen(w1, label);
            let s0 = ThreefoldMap::fiber_swap(w1).unwrap();
            let s1 = ThreefoldMap::chart_swap(w1);
            assert_eq!(s0.pullback(&s0.pullback(&q).unwrap()).unwrap().u_coeffs, q.u_coeffs);
            assert_eq!(s1.pullback(&s1.pullback(&q).unwrap()).unwrap().u_coeffs, q.u_coeffs);
        }
    }

    #[test]
    fn fiber_swap_requires_equal_twists() {
        assert!(matches!(
            ThreefoldMap::fiber_swap(catalog::w2()),
            Err(SymmetryError::FiberSwapUnavailable(_))
        ));
    }

    #[test]
    fn w2_chart_swap_sends_e1_to_minus_e5() {
        let w2 = catalog::w2();
        let s1 = ThreefoldMap::chart_swap(w2);
        let image = s1.pullback(&gen(w2, "e1")).unwrap();
        assert_eq!(image.u_coeffs, gen(w2, "e5").scale(&-Scalar::one()).u_coeffs);
        // And the V-coefficients of e1 are the expected triple.
        let v = gen(w2, "e1").v_coeffs().unwrap();
        assert_eq!(v[0].render(Chart::V.names()), "-2*xi*v1");
        assert_eq!(v[1].render(Chart::V.names()), "-xi^2");
    }

    #[test]
    fn w3_chart_swap_pairs() {
        let w3 = catalog::w3();
        let s1 = ThreefoldMap::chart_swap(w3);
        for (a, b) in [("e3", "e6"), ("e7", "e9"), ("e10", "e12")] {
            assert_eq!(
                certify(&s1, &gen(w3, a), &gen(w3, b)),
                Some(-Scalar::one()),
                "{a} ≃ {b}"
            );
        }
        // The grade-0 companion of e1.
        let image = s1.pullback(&gen(w3, "e1")).unwrap();
        assert_eq!(image.u_coeffs[0], crate::exactpoly::parse_u("z*u1").unwrap());
    }

    #[test]
    fn pullback_preserves_integrability() {
        let w1 = catalog::w1();
        let s1 = ThreefoldMap::chart_swap(w1);
        for label in ["e1", "e2", "e3", "e4"] {
            let q = gen(w1, label);
            assert!(is_integrable(&s1.pullback(&q).unwrap()));
        }
    }

    #[test]
    fn isomorphism_catalog_connects_all_w1_generators() {
        let w1 = catalog::w1();
        let gens: Vec<BivectorField> = catalog::reference_generators(w1).unwrap();
        let cert = isomorphism_catalog(w1, &gens);
        // Every ordered pair among e1..e4 receives a certificate.
        assert_eq!(cert.len(), 12);
        for c in &cert {
            assert!(!c.scale.is_zero());
        }
    }

    #[test]
    fn surface_catalogs_are_transition_consistent() {
        for k in [-1, 0, 1, 2, 3] {
            let cat = surface_catalog(k).unwrap();
            for s in &cat {
                assert!(s.transition_consistent(), "Z_{k} {}", s.label);
                assert!(surface_self_bracket(&s).is_zero());
            }
        }
        assert_eq!(surface_catalog(2).unwrap().len(), 1);
        assert_eq!(surface_catalog(-1).unwrap().len(), 4);
        assert!(matches!(
            surface_catalog(7),
            Err(SymmetryError::UnsupportedTwist(7))
        ));
    }

    #[test]
    fn embedding_witness_equalities() {
        // e4 on W2 restricts to π0 on the first summand Z_2.
        let w2 = catalog::w2();
        let emb = SurfaceEmbedding::new(w2, EmbeddingSlot::FirstSummand);
        let r = restrict_to_surface(&gen(w2, "e4"), emb).unwrap();
        let pi0 = &surface_catalog(2).unwrap()[0];
        assert_eq!(r.u_coeff, pi0.u_coeff);
        assert_eq!(r.v_coeff, pi0.v_coeff);

        // e3 on W3 restricts to π0 on the second summand Z_{-1}.
        let w3 = catalog::w3();
        let emb = SurfaceEmbedding::new(w3, EmbeddingSlot::SecondSummand);
        let r = restrict_to_surface(&gen(w3, "e3"), emb).unwrap();
        let pi0 = &surface_catalog(-1).unwrap()[0];
        assert_eq!((r.u_coeff.clone(), r.v_coeff.clone()), (pi0.u_coeff.clone(), pi0.v_coeff.clone()));

        // e10 on W3 restricts to the u-scaled π0.
        let r = restrict_to_surface(&gen(w3, "e10"), emb).unwrap();
        let g_u = Poly::var(Var::U1);
        let g_v = Poly::from_monomial(Monomial::new(-1, 1, 0), Scalar::one());
        let scaled = pi0.scaled(&g_u, &g_v, "g*pi0");
        assert_eq!(r.u_coeff, scaled.u_coeff);
        assert_eq!(r.v_coeff, scaled.v_coeff);
    }

    #[test]
    fn generation_reports_cover_all_reference_generators() {
        use crate::sections::module_presentation;
        for (spec, bound) in [(catalog::w1(), 3), (catalog::w2(), 3), (catalog::w3(), 7)] {
            let pres = module_presentation(spec, bound).unwrap();
            let report = verify_generation(spec, &pres.generators);
            assert!(
                report.all_reached(),
                "unreached generators on {spec}: {:?}",
                report
                    .items
                    .iter()
                    .filter(|(_, w)| matches!(w, Witness::Unreached))
                    .map(|(l, _)| l)
                    .collect::<Vec<_>>()
            );
        }
    }
}
