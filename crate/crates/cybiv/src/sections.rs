//! Global sections of `Λ²TW` and their structure as a module over global
//! functions.
//!
//! A bivector field is stored by its U-chart coefficient triple
//! `(q⁰, q¹, q²)` in the basis `b0 = ∂1∧∂2, b1 = ∂2∧∂0, b2 = ∂0∧∂1`; it
//! is *global* when the transformed triple is polynomial in `(ξ, v1, v2)`.
//!
//! The section space carries a fiber-degree grading: a homogeneous section
//! of grade `g` has `q¹, q²` of fiber degree `g` and `q⁰` of fiber degree
//! `g + 1` (the transition couples exactly these). Minimal generators and
//! relations over the global function ring are computed grade by grade:
//! new generators are a basis of the grade-`g` space modulo products of
//! lower-grade sections with positive-degree global monomials, and new
//! relations are grade-`g` syzygies modulo multiples of lower relations.
//! All multiplier spaces are finite-dimensional per grade, so bounded
//! computation is exact rather than heuristic.

use crate::catalog;
use crate::exactpoly::{Monomial, Poly, Scalar};
use crate::linalg::{self, SpanSpace};
use crate::threefold::{Chart, ThreefoldSpec};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// A bivector field on `W_{k1,k2}`, stored by U-chart coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct BivectorField {
    pub spec: ThreefoldSpec,
    pub u_coeffs: [Poly; 3],
    pub label: Option<String>,
}

impl BivectorField {
    pub fn new(spec: ThreefoldSpec, u_coeffs: [Poly; 3]) -> Self {
        BivectorField {
            spec,
            u_coeffs,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn zero(spec: ThreefoldSpec) -> Self {
        BivectorField::new(spec, [Poly::zero(), Poly::zero(), Poly::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.u_coeffs.iter().all(|c| c.is_zero())
    }

    /// V-chart coefficients as honest polynomials in `(ξ, v1, v2)`, or the
    /// offending Laurent triple when the field does not extend.
    pub fn v_coeffs(&self) -> Result<[Poly; 3], NotGlobal> {
        let m = self.spec.lambda2_transition();
        let transformed = m.apply(&self.u_coeffs);
        let rewritten = transformed.map(|c| self.spec.to_other_chart(&c));
        if let Some(bad) = rewritten.iter().position(|c| c.has_negative_exponent()) {
            return Err(NotGlobal {
                component: bad,
                laurent: rewritten[bad].render(Chart::V.names()),
            });
        }
        Ok(rewritten)
    }

    pub fn is_global(&self) -> bool {
        self.v_coeffs().is_ok()
    }

    pub fn add(&self, other: &BivectorField) -> BivectorField {
        assert_eq!(self.spec, other.spec, "spec mismatch");
        BivectorField::new(
            self.spec,
            [
                self.u_coeffs[0].add(&other.u_coeffs[0]),
                self.u_coeffs[1].add(&other.u_coeffs[1]),
                self.u_coeffs[2].add(&other.u_coeffs[2]),
            ],
        )
    }

    pub fn sub(&self, other: &BivectorField) -> BivectorField {
        let minus_one: Scalar = -<Scalar as num_traits::One>::one();
        self.add(&other.scale(&minus_one))
    }

    pub fn scale(&self, c: &Scalar) -> BivectorField {
        BivectorField::new(self.spec, self.u_coeffs.clone().map(|q| q.scale(c)))
    }

    /// Multiplication by a function (not necessarily global).
    pub fn mul_poly(&self, f: &Poly) -> BivectorField {
        BivectorField::new(self.spec, self.u_coeffs.clone().map(|q| q.mul(f)))
    }

    /// Grade of a homogeneous section, if the triple is homogeneous:
    /// `q¹, q²` of fiber degree `g`, `q⁰` of degree `g + 1`.
    pub fn grade(&self) -> Option<u64> {
        let mut g: Option<u64> = None;
        for (comp, q) in self.u_coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let d = q.fiber_degree();
            if !q.is_fiber_homogeneous(d) {
                return None;
            }
            let claim = if comp == 0 {
                d.checked_sub(1)?
            } else {
                d
            };
            match g {
                None => g = Some(claim),
                Some(prev) if prev == claim => {}
                _ => return None,
            }
        }
        g.or(Some(0))
    }

    /// Homogeneous graded parts (grade, part), skipping zero parts.
    pub fn graded_parts(&self) -> Vec<(u64, BivectorField)> {
        let mut out: BTreeMap<u64, BivectorField> = BTreeMap::new();
        for (comp, q) in self.u_coeffs.iter().enumerate() {
            for (m, c) in q.terms() {
                let d = m.fiber_degree();
                let g = if comp == 0 {
                    // A fiber-constant b0-coefficient can never be global;
                    // park it at grade 0 so the decomposition is total.
                    d.saturating_sub(1)
                } else {
                    d
                };
                let entry = out
                    .entry(g)
                    .or_insert_with(|| BivectorField::zero(self.spec));
                entry.u_coeffs[comp].add_term(*m, c.clone());
            }
        }
        out.into_iter().collect()
    }

    pub fn render(&self, chart: Chart) -> String {
        let coeffs = match chart {
            Chart::U => self.u_coeffs.clone(),
            Chart::V => match self.v_coeffs() {
                Ok(c) => c,
                Err(_) => {
                    let m = self.spec.lambda2_transition();
                    m.apply(&self.u_coeffs)
                        .map(|c| self.spec.to_other_chart(&c))
                }
            },
        };
        format!(
            "({}, {}, {})",
            coeffs[0].render(chart.names()),
            coeffs[1].render(chart.names()),
            coeffs[2].render(chart.names())
        )
    }
}

impl fmt::Debug for BivectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{} = ", l)?;
        }
        write!(f, "{}", self.render(Chart::U))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bivector does not extend to V: component {component} transforms to {laurent}")]
pub struct NotGlobal {
    pub component: usize,
    pub laurent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SectionsError {
    #[error("neighborhood order must be non-negative, got {0}")]
    NegativeNeighborhood(i64),
}

/// Coordinate key for section vectors: (component, monomial).
pub type SectionKey = (usize, Monomial);

pub fn coordinatize(coeffs: &[Poly; 3]) -> BTreeMap<SectionKey, Scalar> {
    let mut out = BTreeMap::new();
    for (comp, q) in coeffs.iter().enumerate() {
        for (m, c) in q.terms() {
            out.insert((comp, *m), c.clone());
        }
    }
    out
}

/// Which fiber types a component slot ranges over, and the sharp z-degree
/// bound for participation in a global section. Monomials beyond these
/// bounds transform with a strictly negative ξ-power in a row where no
/// cancellation partner can exist.
fn slot_z_bound(spec: ThreefoldSpec, comp: usize, i: u64, s: u64) -> i64 {
    let (k1, k2) = (spec.k1, spec.k2);
    let (i, s) = (i as i64, s as i64);
    match comp {
        0 => k1 * i + k2 * s + (-2i64).max(1 - (k1 + k2)),
        1 => k1 * i + k2 * (s - 1) + 2,
        2 => k1 * (i - 1) + k2 * s + 2,
        _ => unreachable!(),
    }
}

/// Enumerates unknown slots for the given per-component fiber-type filter.
fn slots_for(
    spec: ThreefoldSpec,
    mut fiber_types: impl FnMut(usize) -> Vec<(u64, u64)>,
) -> Vec<SectionKey> {
    let mut slots = Vec::new();
    for comp in 0..3 {
        for (i, s) in fiber_types(comp) {
            let top = slot_z_bound(spec, comp, i, s);
            for l in 0..=top.max(-1) {
                slots.push((comp, Monomial::new(l, i, s)));
            }
        }
    }
    slots.sort();
    slots
}

/// Row key: a V-side monomial recorded by its U-side Laurent exponents and
/// target component.
type RowKey = (usize, i64, u64, u64);

fn holomorphy_rows(
    spec: ThreefoldSpec,
    slots: &[SectionKey],
) -> BTreeMap<RowKey, BTreeMap<usize, Scalar>> {
    use crate::exactpoly::scalar;
    let (k1, k2) = (spec.k1, spec.k2);
    let mut rows: BTreeMap<RowKey, BTreeMap<usize, Scalar>> = BTreeMap::new();
    let mut push = |target: usize, r: i64, s: u64, t: u64, j: usize, c: Scalar| {
        if k1 * s as i64 + k2 * t as i64 - r < 0 {
            let cell = rows
                .entry((target, r, s, t))
                .or_default()
                .entry(j)
                .or_insert_with(Scalar::zero);
            *cell += c;
        }
    };
    for (j, (comp, m)) in slots.iter().enumerate() {
        let (r, s, t) = (m.z, m.u1, m.u2);
        match comp {
            0 => push(0, r + 2, s, t, j, scalar(1)),
            1 => {
                if k1 != 0 {
                    push(0, r + 1, s + 1, t, j, scalar(-k1));
                }
                push(1, r + k2 - 2, s, t, j, scalar(-1));
            }
            2 => {
                if k2 != 0 {
                    push(0, r + 1, s, t + 1, j, scalar(-k2));
                }
                push(2, r + k1 - 2, s, t, j, scalar(-1));
            }
            _ => unreachable!(),
        }
    }
    rows
}

fn kernel_fields(spec: ThreefoldSpec, slots: Vec<SectionKey>) -> Vec<BivectorField> {
    let rows = holomorphy_rows(spec, &slots);
    let dense: Vec<Vec<Scalar>> = rows
        .values()
        .map(|r| {
            let mut v = vec![Scalar::zero(); slots.len()];
            for (&j, c) in r {
                v[j] = c.clone();
            }
            v
        })
        .collect();
    linalg::kernel_basis(dense, slots.len())
        .into_iter()
        .map(|vec| {
            let mut coeffs = [Poly::zero(), Poly::zero(), Poly::zero()];
            for (j, c) in vec.into_iter().enumerate() {
                if !c.is_zero() {
                    let (comp, m) = slots[j];
                    coeffs[comp].add_term(m, c);
                }
            }
            BivectorField::new(spec, coeffs)
        })
        .collect()
}

/// Exact basis of the global sections whose coefficients all have fiber
/// degree at most `neighborhood`. Canonical: the kernel basis of the
/// holomorphy constraints in reduced echelon form over the slot order.
pub fn section_basis(
    spec: ThreefoldSpec,
    neighborhood: i64,
) -> Result<Vec<BivectorField>, SectionsError> {
    if neighborhood < 0 {
        return Err(SectionsError::NegativeNeighborhood(neighborhood));
    }
    let n = neighborhood as u64;
    let types: Vec<(u64, u64)> = (0..=n)
        .flat_map(|d| (0..=d).map(move |s| (d - s, s)))
        .collect();
    let slots = slots_for(spec, |_| types.clone());
    Ok(kernel_fields(spec, slots))
}

/// Basis of the homogeneous grade-`g` sections: `q¹, q²` of fiber degree
/// `g`, `q⁰` of fiber degree `g + 1`.
pub fn graded_section_basis(spec: ThreefoldSpec, grade: u64) -> Vec<BivectorField> {
    let fiber = |d: u64| -> Vec<(u64, u64)> { (0..=d).map(|s| (d - s, s)).collect() };
    let slots = slots_for(spec, |comp| {
        if comp == 0 {
            fiber(grade + 1)
        } else {
            fiber(grade)
        }
    });
    kernel_fields(spec, slots)
}

/// A module generator with its grade and label.
#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub grade: u64,
    pub field: BivectorField,
}

/// A relation among the generators: `Σ coeffs[h] · gen_h = 0`, every
/// coefficient a global function, homogeneous of the stated grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub grade: u64,
    pub coeffs: Vec<Poly>,
}

/// Minimal presentation of the section module over global functions.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub spec: ThreefoldSpec,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub degree_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error(
        "degree bound {bound} too small to certify minimality: new {what} appear at grade {at}"
    )]
    DegreeBoundTooSmall { bound: u64, what: String, at: u64 },
}

type RelKey = (usize, Monomial);

fn relation_vector(coeffs: &[Poly]) -> BTreeMap<RelKey, Scalar> {
    let mut out = BTreeMap::new();
    for (h, p) in coeffs.iter().enumerate() {
        for (m, c) in p.terms() {
            out.insert((h, *m), c.clone());
        }
    }
    out
}

fn vector_to_relation(v: &BTreeMap<RelKey, Scalar>, n: usize) -> Vec<Poly> {
    let mut coeffs = vec![Poly::zero(); n];
    for ((h, m), c) in v {
        coeffs[*h].add_term(*m, c.clone());
    }
    coeffs
}

/// Computes the minimal generators and relations of the section module,
/// grade by grade up to `degree_bound`, verifying internally that grade
/// `degree_bound + 1` adds nothing.
pub fn module_presentation(
    spec: ThreefoldSpec,
    degree_bound: u64,
) -> Result<Presentation, PresentationError> {
    let preferred_gens = catalog::reference_generators(spec);
    let preferred_rels = catalog::reference_relations(spec);

    let mut generators: Vec<Generator> = Vec::new();
    let mut relations: Vec<Relation> = Vec::new();
    let mut extra_gen_counter = 0usize;
    let mut rel_label_counter = 0usize;
    let mut used_rel_labels: std::collections::BTreeSet<String> = preferred_rels
        .iter()
        .flatten()
        .map(|(label, _)| label.clone())
        .collect();
    let mut label_index: BTreeMap<String, usize> = BTreeMap::new();

    for g in 0..=degree_bound + 1 {
        let space = graded_section_basis(spec, g);
        let mut covered: SpanSpace<SectionKey> = SpanSpace::new();

        // Products of lower-grade generators with positive-degree global
        // monomials. Collect the columns for the syzygy pass too.
        let mut syz_columns: Vec<(RelKey, BTreeMap<SectionKey, Scalar>)> = Vec::new();
        for (h, gen) in generators.iter().enumerate() {
            if gen.grade >= g {
                continue;
            }
            for m in spec.global_monomials_of_degree(g - gen.grade) {
                let prod = gen.field.mul_poly(&Poly::from_monomial(m, Scalar::from_integer(1.into())));
                let coords = coordinatize(&prod.u_coeffs);
                covered.insert(coords.clone());
                syz_columns.push(((h, m), coords));
            }
        }

        // New generators: reference representatives first, then echelon
        // vectors of the graded space.
        let mut new_gens: Vec<Generator> = Vec::new();
        if let Some(prefs) = &preferred_gens {
            for f in prefs {
                if f.grade() != Some(g) {
                    continue;
                }
                if covered.insert(coordinatize(&f.u_coeffs)) {
                    let label = f.label.clone().expect("reference generators are labeled");
                    new_gens.push(Generator {
                        label,
                        grade: g,
                        field: f.clone(),
                    });
                }
            }
        }
        for v in &space {
            if covered.insert(coordinatize(&v.u_coeffs)) {
                extra_gen_counter += 1;
                let label = format!("g{}", catalog::reference_generator_count(spec) + extra_gen_counter);
                let mut field = v.clone();
                primitive_normalize(&mut field.u_coeffs);
                new_gens.push(Generator {
                    label: label.clone(),
                    grade: g,
                    field: field.with_label(label),
                });
            }
        }

        // Syzygies at this grade: feed the product columns through an
        // augmented elimination; every column that reduces to zero yields
        // a relation vector.
        let mut section_span: Vec<(BTreeMap<SectionKey, Scalar>, BTreeMap<RelKey, Scalar>)> =
            Vec::new();
        let mut found_syzygies: Vec<BTreeMap<RelKey, Scalar>> = Vec::new();
        for (key, coords) in syz_columns {
            let mut coords = coords;
            let mut aug: BTreeMap<RelKey, Scalar> = BTreeMap::from([(key, Scalar::from_integer(1.into()))]);
            for (row, row_aug) in &section_span {
                let lead = row.keys().next().unwrap();
                if let Some(c) = coords.get(lead).cloned() {
                    sub_scaled_pair(&mut coords, &mut aug, row, row_aug, &c);
                }
            }
            if coords.is_empty() {
                found_syzygies.push(aug);
            } else {
                normalize_pair(&mut coords, &mut aug);
                let at = section_span
                    .partition_point(|(r, _)| r.keys().next().unwrap() < coords.keys().next().unwrap());
                section_span.insert(at, (coords, aug));
            }
        }

        // New relations: those not in the span of lower relations times
        // positive-degree global monomials.
        let mut rel_span: SpanSpace<RelKey> = SpanSpace::new();
        for rel in &relations {
            for m in spec.global_monomials_of_degree(g - rel.grade) {
                let shifted: Vec<Poly> = rel
                    .coeffs
                    .iter()
                    .map(|p| p.mul_monomial(&m, &Scalar::from_integer(1.into())))
                    .collect();
                rel_span.insert(relation_vector(&shifted));
            }
        }
        let mut syzygy_space: SpanSpace<RelKey> = SpanSpace::new();
        for v in &found_syzygies {
            syzygy_space.insert(v.clone());
        }
        let mut new_rels: Vec<Relation> = Vec::new();
        if let Some(prefs) = &preferred_rels {
            for (label, pairs) in prefs {
                let coeffs = remap_reference_relation(pairs, &generators, &label_index);
                let Some(coeffs) = coeffs else { continue };
                let vec = relation_vector(&coeffs);
                if relation_grade(&coeffs, &generators) != Some(g) || !syzygy_space.contains(&vec)
                {
                    continue;
                }
                if rel_span.insert(vec) {
                    used_rel_labels.insert(label.clone());
                    new_rels.push(Relation {
                        label: label.clone(),
                        grade: g,
                        coeffs,
                    });
                }
            }
        }
        for v in &found_syzygies {
            if rel_span.insert(v.clone()) {
                loop {
                    rel_label_counter += 1;
                    if !used_rel_labels.contains(&format!("r{rel_label_counter}")) {
                        break;
                    }
                }
                let label = format!("r{rel_label_counter}");
                used_rel_labels.insert(label.clone());
                let mut coeffs = vector_to_relation(v, generators.len());
                primitive_normalize(&mut coeffs);
                new_rels.push(Relation {
                    label,
                    grade: g,
                    coeffs,
                });
            }
        }

        if g == degree_bound + 1 {
            if !new_gens.is_empty() {
                return Err(PresentationError::DegreeBoundTooSmall {
                    bound: degree_bound,
                    what: "generators".into(),
                    at: g,
                });
            }
            if !new_rels.is_empty() {
                return Err(PresentationError::DegreeBoundTooSmall {
                    bound: degree_bound,
                    what: "relations".into(),
                    at: g,
                });
            }
            break;
        }
        for gen in new_gens {
            label_index.insert(gen.label.clone(), generators.len());
            generators.push(gen);
        }
        relations.extend(new_rels);
    }

    // Pad relation vectors to the final generator count.
    for rel in &mut relations {
        rel.coeffs.resize(generators.len(), Poly::zero());
    }
    Ok(Presentation {
        spec,
        generators,
        relations,
        degree_bound,
    })
}

fn sub_scaled_pair(
    coords: &mut BTreeMap<SectionKey, Scalar>,
    aug: &mut BTreeMap<RelKey, Scalar>,
    row: &BTreeMap<SectionKey, Scalar>,
    row_aug: &BTreeMap<RelKey, Scalar>,
    factor: &Scalar,
) {
    for (k, c) in row {
        let entry = coords.entry(*k).or_insert_with(Scalar::zero);
        *entry -= factor.clone() * c.clone();
        if entry.is_zero() {
            coords.remove(k);
        }
    }
    for (k, c) in row_aug {
        let entry = aug.entry(*k).or_insert_with(Scalar::zero);
        *entry -= factor.clone() * c.clone();
        if entry.is_zero() {
            aug.remove(k);
        }
    }
}

fn normalize_pair(coords: &mut BTreeMap<SectionKey, Scalar>, aug: &mut BTreeMap<RelKey, Scalar>) {
    let lead = coords.values().next().unwrap().clone();
    let inv = lead.recip();
    for c in coords.values_mut() {
        *c *= inv.clone();
    }
    for c in aug.values_mut() {
        *c *= inv.clone();
    }
}

/// Scales a coefficient list to primitive integer form with a positive
/// first coefficient (first = lowest (component, monomial) key present).
fn primitive_normalize(coeffs: &mut [Poly]) {
    use num_bigint::BigInt;
    use num_traits::{One, Signed};
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    let mut first_sign: Option<bool> = None;
    for p in coeffs.iter() {
        for (_, c) in p.terms() {
            denom_lcm = num_integer::lcm(denom_lcm.clone(), c.denom().clone());
            numer_gcd = num_integer::gcd(numer_gcd.clone(), c.numer().clone());
            if first_sign.is_none() {
                first_sign = Some(c.is_negative());
            }
        }
    }
    if numer_gcd.is_zero() {
        return;
    }
    let mut factor = Scalar::new(denom_lcm, numer_gcd.abs());
    if first_sign == Some(true) {
        factor = -factor;
    }
    for p in coeffs.iter_mut() {
        *p = p.scale(&factor);
    }
}

fn relation_grade(coeffs: &[Poly], generators: &[Generator]) -> Option<u64> {
    let mut grade = None;
    for (h, p) in coeffs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = p.fiber_degree();
        if !p.is_fiber_homogeneous(d) {
            return None;
        }
        let claim = d + generators[h].grade;
        match grade {
            None => grade = Some(claim),
            Some(prev) if prev == claim => {}
            _ => return None,
        }
    }
    grade
}

fn remap_reference_relation(
    pairs: &[(String, Poly)],
    generators: &[Generator],
    label_index: &BTreeMap<String, usize>,
) -> Option<Vec<Poly>> {
    let mut coeffs = vec![Poly::zero(); generators.len()];
    for (label, poly) in pairs {
        let &h = label_index.get(label)?;
        coeffs[h] = poly.clone();
    }
    Some(coeffs)
}

/// Evaluates a relation against a generator list; zero iff it holds.
pub fn contract_relation(coeffs: &[Poly], generators: &[Generator]) -> BivectorField {
    let spec = generators
        .first()
        .map(|g| g.field.spec)
        .expect("nonempty generator list");
    let mut acc = BivectorField::zero(spec);
    for (c, gen) in coeffs.iter().zip(generators) {
        acc = acc.add(&gen.field.mul_poly(c));
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpressFailure {
    #[error("bivector is not global: {0}")]
    NotGlobal(NotGlobal),
    #[error("fiber degree of the input exceeds the presentation bound {bound}")]
    DegreeBoundExceeded { bound: u64 },
    #[error("bivector lies outside the module span of the generators")]
    NotInSpan,
}

/// Writes a global bivector as `Σ pʰ · gen_h` with global coefficients.
pub fn express_in_generators(
    q: &BivectorField,
    pres: &Presentation,
) -> Result<Vec<Poly>, ExpressFailure> {
    if let Err(e) = q.v_coeffs() {
        return Err(ExpressFailure::NotGlobal(e));
    }
    let spec = q.spec;
    let mut out = vec![Poly::zero(); pres.generators.len()];
    for (g, part) in q.graded_parts() {
        if part.is_zero() {
            continue;
        }
        if g > pres.degree_bound {
            return Err(ExpressFailure::DegreeBoundExceeded {
                bound: pres.degree_bound,
            });
        }
        let mut columns: Vec<BTreeMap<SectionKey, Scalar>> = Vec::new();
        let mut keys: Vec<(usize, Monomial)> = Vec::new();
        for (h, gen) in pres.generators.iter().enumerate() {
            if gen.grade > g {
                continue;
            }
            for m in spec.global_monomials_of_degree(g - gen.grade) {
                let prod = gen
                    .field
                    .mul_poly(&Poly::from_monomial(m, Scalar::from_integer(1.into())));
                columns.push(coordinatize(&prod.u_coeffs));
                keys.push((h, m));
            }
        }
        let target = coordinatize(&part.u_coeffs);
        let sol = linalg::solve(&columns, &target).ok_or(ExpressFailure::NotInSpan)?;
        for ((h, m), c) in keys.into_iter().zip(sol) {
            if !c.is_zero() {
                out[h].add_term(m, c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse_u;

    fn p(s: &str) -> Poly {
        parse_u(s).unwrap()
    }

    fn biv(spec: ThreefoldSpec, a: &str, b: &str, c: &str) -> BivectorField {
        BivectorField::new(spec, [p(a), p(b), p(c)])
    }

    fn w1() -> ThreefoldSpec {
        ThreefoldSpec::new(1, 1)
    }
    fn w2() -> ThreefoldSpec {
        ThreefoldSpec::new(2, 0)
    }
    fn w3() -> ThreefoldSpec {
        ThreefoldSpec::new(3, -1)
    }

    #[test]
    fn globality_of_known_fields() {
        assert!(biv(w1(), "u1", "z", "0").is_global());
        assert!(biv(w1(), "0", "u1^2", "0").is_global());
        assert!(!biv(w1(), "1", "0", "0").is_global());
        assert!(biv(w3(), "3*z^2*u1", "z^3", "0").is_global());
        assert!(biv(w3(), "z*u1", "0", "0").is_global());
        assert!(!biv(w3(), "0", "z^2*u2", "0").is_global());
        assert!(biv(w3(), "0", "u2^2", "0").is_global());
        assert!(biv(w3(), "-z*u1*u2", "0", "z^2*u1").is_global());
    }

    #[test]
    fn v_coefficients_match_hand_transforms() {
        let e1 = biv(w2(), "0", "1", "0");
        let v = e1.v_coeffs().unwrap();
        assert_eq!(v[0].render(Chart::V.names()), "-2*xi*v1");
        assert_eq!(v[1].render(Chart::V.names()), "-xi^2");
        assert!(v[2].is_zero());

        let e9 = biv(w3(), "-z*u1*u2", "0", "z^2*u1");
        let v = e9.v_coeffs().unwrap();
        assert!(v[0].is_zero() && v[1].is_zero());
        assert_eq!(v[2].render(Chart::V.names()), "-v1");
    }

    #[test]
    fn truncated_section_dimensions() {
        // Hand-derived by counting unknown slots minus independent
        // holomorphy constraints.
        assert_eq!(section_basis(w1(), 0).unwrap().len(), 2);
        assert_eq!(section_basis(w1(), 1).unwrap().len(), 13);
        assert_eq!(section_basis(w1(), 2).unwrap().len(), 39);
        assert_eq!(section_basis(w2(), 1).unwrap().len(), 15);
        assert_eq!(section_basis(w3(), 2).unwrap().len(), 48);
        assert!(section_basis(w1(), -1).is_err());
    }

    #[test]
    fn truncated_dimension_is_monotone() {
        let mut prev = 0;
        for n in 0..=3 {
            let d = section_basis(w3(), n).unwrap().len();
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(graded_section_basis(w1(), 0).len(), 4);
        assert_eq!(graded_section_basis(w1(), 1).len(), 15);
        assert_eq!(graded_section_basis(w1(), 2).len(), 32);
        assert_eq!(graded_section_basis(w2(), 0).len(), 5);
        assert_eq!(graded_section_basis(w2(), 1).len(), 16);
        assert_eq!(graded_section_basis(w3(), 0).len(), 6);
        assert_eq!(graded_section_basis(w3(), 1).len(), 19);
        assert_eq!(graded_section_basis(w3(), 2).len(), 38);
    }

    #[test]
    fn every_basis_vector_is_global() {
        for spec in [w1(), w2(), w3()] {
            for v in section_basis(spec, 2).unwrap() {
                assert!(v.is_global(), "non-global basis vector {:?}", v);
            }
            for g in 0..=2 {
                for v in graded_section_basis(spec, g) {
                    assert!(v.is_global());
                    assert_eq!(v.grade(), Some(g));
                }
            }
        }
    }

    #[test]
    fn enlarging_slot_bounds_does_not_change_the_kernel() {
        // Append slots one z-degree beyond the participation bound; the
        // kernel dimension must not move.
        for spec in [w1(), w3()] {
            let n = 2u64;
            let types: Vec<(u64, u64)> = (0..=n)
                .flat_map(|d| (0..=d).map(move |s| (d - s, s)))
                .collect();
            let base = slots_for(spec, |_| types.clone());
            let mut padded = base.clone();
            for comp in 0..3 {
                for &(i, s) in &types {
                    let top = slot_z_bound(spec, comp, i, s);
                    if top >= -1 {
                        padded.push((comp, Monomial::new(top + 1, i, s)));
                    }
                }
            }
            padded.sort();
            padded.dedup();
            assert_eq!(
                kernel_fields(spec, base).len(),
                kernel_fields(spec, padded).len()
            );
        }
    }

    #[test]
    fn w1_presentation_is_four_generators_one_relation() {
        let pres = module_presentation(w1(), 3).unwrap();
        let labels: Vec<&str> = pres.generators.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["e1", "e2", "e3", "e4"]);
        assert_eq!(pres.relations.len(), 1);
        let rel = &pres.relations[0];
        assert_eq!(
            rel.coeffs,
            vec![p("z*u2"), p("-z*u1"), p("-u2"), p("u1")]
        );
        assert!(contract_relation(&rel.coeffs, &pres.generators).is_zero());
    }

    #[test]
    fn w2_presentation_has_five_generators() {
        let pres = module_presentation(w2(), 3).unwrap();
        let labels: Vec<&str> = pres.generators.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["e1", "e2", "e3", "e4", "e5"]);
        // The two displayed relation patterns hold with u1-multipliers, and
        // their z-shifts are independent module generators of the syzygies.
        assert_eq!(pres.relations.len(), 4);
        for rel in &pres.relations {
            assert!(contract_relation(&rel.coeffs, &pres.generators).is_zero());
        }
    }

    #[test]
    fn presentation_is_idempotent_and_stable() {
        let a = module_presentation(w1(), 3).unwrap();
        let b = module_presentation(w1(), 4).unwrap();
        assert_eq!(a.generators.len(), b.generators.len());
        assert_eq!(a.relations.len(), b.relations.len());
        for (x, y) in a.relations.iter().zip(&b.relations) {
            assert_eq!(x.coeffs, y.coeffs);
        }
    }

    #[test]
    fn express_in_generators_examples() {
        let pres = module_presentation(w1(), 3).unwrap();
        // u1²·b0 = u1·e3 - z·u1·e1.
        let q = biv(w1(), "u1^2", "0", "0");
        let coeffs = express_in_generators(&q, &pres).unwrap();
        let rebuilt = contract_relation(&coeffs, &pres.generators);
        assert_eq!(rebuilt.u_coeffs, q.u_coeffs);
        assert_eq!(coeffs[0], p("-z*u1"));
        assert_eq!(coeffs[2], p("u1"));

        // A generator expresses itself.
        let e2 = pres.generators[1].field.clone();
        let coeffs = express_in_generators(&e2, &pres).unwrap();
        assert_eq!(coeffs[1], Poly::one());
        assert!(coeffs.iter().enumerate().all(|(i, c)| i == 1 || c.is_zero()));

        // Non-global input is rejected with the offending component named.
        let bad = biv(w1(), "1", "0", "0");
        assert!(matches!(
            express_in_generators(&bad, &pres),
            Err(ExpressFailure::NotGlobal(_))
        ));
    }

    #[test]
    fn graded_parts_recompose() {
        let q = biv(w3(), "u1 + u1*u2", "z^2", "u1*u2");
        let parts = q.graded_parts();
        let mut acc = BivectorField::zero(w3());
        for (_, part) in &parts {
            acc = acc.add(part);
        }
        assert_eq!(acc.u_coeffs, q.u_coeffs);
    }
}
