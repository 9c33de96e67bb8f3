//! Degeneracy loci, Casimir spaces, and locus-based distinction of
//! Poisson structures.
//!
//! Every locus arising from the reference structures is cut out by
//! monomial coefficients, so chart-wise decomposition into irreducible
//! pieces is minimal-prime extraction for monomial ideals (radical-aware).
//! Pieces are glued across charts along `u_i = 0 ↔ v_i = 0`; pieces
//! containing the base equation live in a single chart.

use crate::exactpoly::{Monomial, Poly, Scalar};
use crate::linalg;
use crate::schouten::{function_bracket, is_integrable};
use crate::sections::BivectorField;
use crate::threefold::{Chart, ThreefoldSpec};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("structure is not integrable; its self-bracket is {0}")]
    NotIntegrable(String),
    #[error("bivector does not extend to the V chart: {0}")]
    NotGlobal(String),
}

/// A coordinate piece of a chart locus: the set of vanishing coordinates
/// (slot indices 0, 1, 2 for z/ξ, u1/v1, u2/v2).
pub type Piece = BTreeSet<usize>;

fn piece_name(chart: Chart, piece: &Piece) -> String {
    let names = chart.names();
    piece
        .iter()
        .map(|&i| names[i])
        .collect::<Vec<_>>()
        .join(" ")
}

/// A global irreducible component of a vanishing locus, presented by its
/// chart pieces (one or both) and a coarse isomorphism-type label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusComponent {
    pub u_piece: Option<Piece>,
    pub v_piece: Option<Piece>,
    pub kind: ComponentKind,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentKind {
    /// A fiber plane `z = 0` or `ξ = 0`, a copy of C².
    FiberPlane,
    /// The surface `u_i = 0` glued with `v_i = 0`: the total space of a
    /// line bundle of the stated twist over the base curve.
    LineBundleSurface { twist: i64 },
    /// A curve cut out by two equations (a copy of C).
    Curve,
    /// A single point (three equations).
    Point,
    /// Equations that are not products of coordinates; kept undecomposed.
    Undecomposed,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::FiberPlane => write!(f, "plane C^2"),
            ComponentKind::LineBundleSurface { twist: 0 } => write!(f, "surface P^1 x C"),
            ComponentKind::LineBundleSurface { twist } => {
                write!(f, "surface Z_{}", twist)
            }
            ComponentKind::Curve => write!(f, "line C"),
            ComponentKind::Point => write!(f, "point"),
            ComponentKind::Undecomposed => write!(f, "undecomposed"),
        }
    }
}

/// Chart-wise ideals and decomposed components of a degeneracy locus.
#[derive(Clone, Debug)]
pub struct VanishingLocus {
    pub spec: ThreefoldSpec,
    pub u_ideal: Vec<Poly>,
    pub v_ideal: Vec<Poly>,
    pub u_pieces: Vec<Piece>,
    pub v_pieces: Vec<Piece>,
    /// Set when some ideal generator is not a monomial times a unit; the
    /// piece lists then cover only the monomial part.
    pub undecomposed: bool,
    pub components: Vec<LocusComponent>,
}

impl VanishingLocus {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty() && !self.undecomposed
    }

    pub fn u_piece_names(&self) -> Vec<String> {
        self.u_pieces.iter().map(|p| piece_name(Chart::U, p)).collect()
    }

    pub fn v_piece_names(&self) -> Vec<String> {
        self.v_pieces.iter().map(|p| piece_name(Chart::V, p)).collect()
    }

    pub fn kind_multiset(&self) -> Vec<ComponentKind> {
        let mut kinds: Vec<ComponentKind> = self.components.iter().map(|c| c.kind.clone()).collect();
        kinds.sort();
        kinds
    }

    pub fn describe(&self) -> String {
        if self.is_empty() {
            return "empty".to_string();
        }
        let mut parts = Vec::new();
        for c in &self.components {
            let mut eqs = Vec::new();
            if let Some(p) = &c.u_piece {
                eqs.push(format!("{{{} = 0}} (U)", piece_name(Chart::U, p)));
            }
            if let Some(p) = &c.v_piece {
                eqs.push(format!("{{{} = 0}} (V)", piece_name(Chart::V, p)));
            }
            parts.push(format!("{} [{}]", eqs.join(" ~ "), c.kind));
        }
        parts.join(" ∪ ")
    }
}

/// Minimal primes of a monomial ideal given by the variable supports of
/// its generators: minimal hitting sets.
fn minimal_primes(supports: &[BTreeSet<usize>]) -> Vec<Piece> {
    let mut out: Vec<Piece> = vec![BTreeSet::new()];
    for s in supports {
        if s.is_empty() {
            // A unit generator: empty locus.
            return Vec::new();
        }
        let mut next: Vec<Piece> = Vec::new();
        for partial in &out {
            if partial.iter().any(|v| s.contains(v)) {
                next.push(partial.clone());
                continue;
            }
            for &v in s {
                let mut grown = partial.clone();
                grown.insert(v);
                next.push(grown);
            }
        }
        // Keep only inclusion-minimal sets.
        next.sort_by_key(|p| p.len());
        let mut minimal: Vec<Piece> = Vec::new();
        for cand in next {
            if !minimal.iter().any(|m| m.is_subset(&cand)) {
                minimal.push(cand);
            }
        }
        out = minimal;
    }
    out.sort();
    out.dedup();
    out
}

/// Decomposes a list of chart polynomials into coordinate pieces; returns
/// the pieces plus whether non-monomial generators were left undecomposed.
fn decompose_chart_ideal(ideal: &[Poly]) -> (Vec<Piece>, bool) {
    let mut supports = Vec::new();
    let mut undecomposed = false;
    for p in ideal {
        if p.is_zero() {
            continue;
        }
        if p.num_terms() == 1 {
            let (m, _) = p.terms().next().unwrap();
            let mut s = BTreeSet::new();
            if m.z != 0 {
                s.insert(0);
            }
            if m.u1 != 0 {
                s.insert(1);
            }
            if m.u2 != 0 {
                s.insert(2);
            }
            supports.push(s);
        } else {
            // Binomials and general polynomials are not needed for any
            // reference locus; flag and skip.
            undecomposed = true;
        }
    }
    (minimal_primes(&supports), undecomposed)
}

/// Degeneracy locus: the rank of the bivector drops to zero exactly where
/// all three chart coefficients vanish.
pub fn degeneracy_locus(q: &BivectorField) -> Result<VanishingLocus, AnalysisError> {
    let v = q
        .v_coeffs()
        .map_err(|e| AnalysisError::NotGlobal(e.to_string()))?;
    let u_ideal: Vec<Poly> = q.u_coeffs.iter().filter(|p| !p.is_zero()).cloned().collect();
    let v_ideal: Vec<Poly> = v.iter().filter(|p| !p.is_zero()).cloned().collect();
    let (u_pieces, undec_u) = decompose_chart_ideal(&u_ideal);
    let (v_pieces, undec_v) = decompose_chart_ideal(&v_ideal);
    let undecomposed = undec_u || undec_v;

    // Glue fiber pieces across charts: a piece without the base equation
    // meets the overlap, where u_i = 0 ⟺ v_i = 0.
    let mut components = Vec::new();
    let mut used_v = vec![false; v_pieces.len()];
    for up in &u_pieces {
        if up.contains(&0) {
            components.push(LocusComponent {
                kind: classify_piece(q.spec, up, true),
                u_piece: Some(up.clone()),
                v_piece: None,
            });
            continue;
        }
        let partner = v_pieces
            .iter()
            .position(|vp| !vp.contains(&0) && vp == up);
        match partner {
            Some(i) => {
                used_v[i] = true;
                let twist = glued_twist(q.spec, up);
                components.push(LocusComponent {
                    u_piece: Some(up.clone()),
                    v_piece: Some(v_pieces[i].clone()),
                    kind: twist,
                });
            }
            None => components.push(LocusComponent {
                kind: classify_piece(q.spec, up, true),
                u_piece: Some(up.clone()),
                v_piece: None,
            }),
        }
    }
    for (i, vp) in v_pieces.iter().enumerate() {
        if used_v[i] {
            continue;
        }
        components.push(LocusComponent {
            kind: classify_piece(q.spec, vp, false),
            u_piece: None,
            v_piece: Some(vp.clone()),
        });
    }

    Ok(VanishingLocus {
        spec: q.spec,
        u_ideal,
        v_ideal,
        u_pieces,
        v_pieces,
        undecomposed,
        components,
    })
}

fn glued_twist(spec: ThreefoldSpec, fiber_piece: &Piece) -> ComponentKind {
    if fiber_piece.len() == 1 {
        // {u_i = 0} ∪ {v_i = 0} is the total space of the other summand.
        let twist = if fiber_piece.contains(&1) { spec.k2 } else { spec.k1 };
        ComponentKind::LineBundleSurface { twist }
    } else {
        // Both fiber coordinates vanish: the base curve P^1 (a closed
        // curve through both charts).
        ComponentKind::Curve
    }
}

fn classify_piece(_spec: ThreefoldSpec, piece: &Piece, _u_side: bool) -> ComponentKind {
    match piece.len() {
        1 if piece.contains(&0) => ComponentKind::FiberPlane,
        1 => ComponentKind::LineBundleSurface { twist: 0 },
        2 => ComponentKind::Curve,
        _ => ComponentKind::Point,
    }
}

/// Verifies that the two chart ideals cut the same set on the overlap
/// `z ≠ 0`, where `u_i = 0 ⟺ v_i = 0`: the chart pieces that meet the
/// overlap (those without the base equation) must agree as sets of fiber
/// coordinates.
pub fn locus_well_defined(locus: &VanishingLocus) -> bool {
    if locus.undecomposed {
        // Only coordinate loci are compared; others are reported raw.
        return true;
    }
    let overlap = |pieces: &[Piece]| -> BTreeSet<Piece> {
        pieces
            .iter()
            .filter(|p| !p.contains(&0))
            .cloned()
            .collect()
    };
    overlap(&locus.u_pieces) == overlap(&locus.v_pieces)
}

/// Casimir space of an integrable bivector.
#[derive(Clone, Debug)]
pub struct CasimirSpace {
    /// Coordinate subset S with kernel = all polynomials in S (local
    /// description `f = f(S)`), when one matches exactly.
    pub independent_variables: Option<BTreeSet<&'static str>>,
    /// Truncated basis of *global* Casimir functions.
    pub global_basis: Vec<Poly>,
    pub degree_bound: u64,
    /// Kernel unchanged between `degree_bound - 1` and `degree_bound`.
    pub stable: bool,
}

const VAR_NAMES: [&str; 3] = ["z", "u1", "u2"];

fn local_monomial_box(bound: u64, z_cap: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    for s in 0..=bound {
        for t in 0..=(bound - s) {
            for r in 0..=z_cap {
                out.push(Monomial::new(r, s, t));
            }
        }
    }
    out
}

/// Kernel of `f ↦ [f, q]` on the span of `monomials`.
fn casimir_kernel(q: &BivectorField, monomials: &[Monomial]) -> Vec<Poly> {
    let columns: Vec<BTreeMap<(usize, Monomial), Scalar>> = monomials
        .iter()
        .map(|m| {
            let f = Poly::from_monomial(*m, Scalar::from_integer(1.into()));
            let x = function_bracket(&f, q);
            let mut col = BTreeMap::new();
            for (comp, c) in x.components.iter().enumerate() {
                for (mono, coeff) in c.terms() {
                    col.insert((comp, *mono), coeff.clone());
                }
            }
            col
        })
        .collect();
    let keys: BTreeSet<(usize, Monomial)> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    let rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|k| {
            columns
                .iter()
                .map(|c| c.get(k).cloned().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect();
    linalg::kernel_basis(rows, monomials.len())
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero();
            for (j, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    p.add_term(monomials[j], c);
                }
            }
            p
        })
        .collect()
}

fn kernel_matches_subset(
    kernel: &[Poly],
    monomials: &[Monomial],
    subset: &BTreeSet<usize>,
) -> bool {
    let in_subset = |m: &Monomial| -> bool {
        (m.z == 0 || subset.contains(&0))
            && (m.u1 == 0 || subset.contains(&1))
            && (m.u2 == 0 || subset.contains(&2))
    };
    let count = monomials.iter().filter(|m| in_subset(m)).count();
    kernel.len() == count
        && kernel
            .iter()
            .all(|p| p.terms().all(|(m, _)| in_subset(m)))
}

/// Exact truncated Casimir computation for an integrable bivector.
pub fn casimirs(q: &BivectorField, degree_bound: u64) -> Result<CasimirSpace, AnalysisError> {
    let sb = crate::schouten::self_bracket(q);
    if !sb.is_zero() {
        return Err(AnalysisError::NotIntegrable(sb.coeff.to_string()));
    }
    let spec = q.spec;
    let z_cap = degree_bound as i64 * spec.k1.abs().max(spec.k2.abs()).max(1) + 2;

    // Local description over the full monomial box.
    let local = casimir_kernel(q, &local_monomial_box(degree_bound, z_cap));
    let box_monos = local_monomial_box(degree_bound, z_cap);
    let mut best: Option<BTreeSet<usize>> = None;
    for mask in 0..8u32 {
        let subset: BTreeSet<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        if kernel_matches_subset(&local, &box_monos, &subset) {
            let better = match &best {
                None => true,
                Some(b) => subset.len() > b.len() || (subset.len() == b.len() && subset.is_superset(b)),
            };
            if better {
                best = Some(subset);
            }
        }
    }

    // Global truncated basis.
    let globals = spec.global_function_monomials(degree_bound);
    let global_basis = casimir_kernel(q, &globals);
    let stable = if degree_bound == 0 {
        true
    } else {
        let smaller = spec.global_function_monomials(degree_bound - 1);
        let smaller_basis = casimir_kernel(q, &smaller);
        // Stability: every smaller-kernel element persists and the local
        // description is unchanged.
        let prev_local = casimir_kernel(
            q,
            &local_monomial_box(degree_bound - 1, z_cap),
        );
        let prev_best = {
            let monos = local_monomial_box(degree_bound - 1, z_cap);
            let mut best_prev: Option<BTreeSet<usize>> = None;
            for mask in 0..8u32 {
                let subset: BTreeSet<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
                if kernel_matches_subset(&prev_local, &monos, &subset) {
                    let better = match &best_prev {
                        None => true,
                        Some(b) => subset.len() > b.len(),
                    };
                    if better {
                        best_prev = Some(subset);
                    }
                }
            }
            best_prev
        };
        smaller_basis.len() <= global_basis.len() && prev_best == best
    };

    Ok(CasimirSpace {
        independent_variables: best.map(|s| s.into_iter().map(|i| VAR_NAMES[i]).collect()),
        global_basis,
        degree_bound,
        stable,
    })
}

impl CasimirSpace {
    pub fn local_description(&self) -> String {
        match &self.independent_variables {
            Some(vars) if vars.is_empty() => "f = const".to_string(),
            Some(vars) => format!(
                "f = f({})",
                vars.iter().copied().collect::<Vec<_>>().join(", ")
            ),
            None => "no coordinate subspace description".to_string(),
        }
    }
}

/// Groups integrable structures by their Casimir description.
pub fn classify_by_casimir(
    structures: &[BivectorField],
    degree_bound: u64,
) -> Result<Vec<Vec<String>>, AnalysisError> {
    let mut groups: BTreeMap<Vec<&'static str>, Vec<String>> = BTreeMap::new();
    for (i, q) in structures.iter().enumerate() {
        let cas = casimirs(q, degree_bound)?;
        let key: Vec<&'static str> = cas
            .independent_variables
            .map(|s| s.into_iter().collect())
            .unwrap_or_default();
        let label = q
            .label
            .clone()
            .unwrap_or_else(|| format!("structure{}", i + 1));
        groups.entry(key).or_default().push(label);
    }
    Ok(groups.into_values().collect())
}

/// Verdict of a locus comparison. `Distinguished` certifies that no
/// isomorphism can exist; `Indistinguishable` certifies nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocusVerdict {
    Distinguished { reason: String },
    Indistinguishable,
}

pub fn distinguish_by_locus(
    qa: &BivectorField,
    qb: &BivectorField,
) -> Result<LocusVerdict, AnalysisError> {
    let la = degeneracy_locus(qa)?;
    let lb = degeneracy_locus(qb)?;
    if la.components.len() != lb.components.len() {
        return Ok(LocusVerdict::Distinguished {
            reason: format!(
                "different number of components: {} vs {}",
                la.components.len(),
                lb.components.len()
            ),
        });
    }
    let (ka, kb) = (la.kind_multiset(), lb.kind_multiset());
    if ka != kb {
        return Ok(LocusVerdict::Distinguished {
            reason: format!(
                "different component types: [{}] vs [{}]",
                ka.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "),
                kb.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
            ),
        });
    }
    Ok(LocusVerdict::Indistinguishable)
}

/// Combined description of the symplectic foliation of an integrable
/// structure: point leaves on the degeneracy locus, 2-dimensional leaves
/// as level sets of the Casimirs elsewhere.
#[derive(Clone, Debug)]
pub struct FoliationReport {
    pub locus: VanishingLocus,
    pub casimirs: CasimirSpace,
    pub zero_dim_leaves: String,
    pub generic_leaves: String,
}

pub fn foliation_report(
    q: &BivectorField,
    degree_bound: u64,
) -> Result<FoliationReport, AnalysisError> {
    if !is_integrable(q) {
        let sb = crate::schouten::self_bracket(q);
        return Err(AnalysisError::NotIntegrable(sb.coeff.to_string()));
    }
    let locus = degeneracy_locus(q)?;
    let cas = casimirs(q, degree_bound)?;
    let zero_dim = if locus.is_empty() {
        "none (structure is non-degenerate)".to_string()
    } else {
        format!("single points on {}", locus.describe())
    };
    let generic = match &cas.independent_variables {
        Some(vars) if !vars.is_empty() => format!(
            "2-dimensional leaves: level sets of {}",
            vars.iter().copied().collect::<Vec<_>>().join(", ")
        ),
        _ => "2-dimensional leaves: level sets of the computed Casimir basis".to_string(),
    };
    Ok(FoliationReport {
        locus,
        casimirs: cas,
        zero_dim_leaves: zero_dim,
        generic_leaves: generic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactpoly::parse_u;

    fn gen(spec: ThreefoldSpec, label: &str) -> BivectorField {
        catalog::generator(spec, label).unwrap()
    }

    #[test]
    fn w1_e2_locus_is_the_line_at_infinity() {
        let locus = degeneracy_locus(&gen(catalog::w1(), "e2")).unwrap();
        assert!(locus.u_pieces.is_empty());
        assert_eq!(locus.v_piece_names(), ["xi v2"]);
        assert_eq!(locus.components.len(), 1);
        assert_eq!(locus.components[0].kind, ComponentKind::Curve);
        assert!(locus_well_defined(&locus));
    }

    #[test]
    fn w2_loci_match_expected_tables() {
        let w2 = catalog::w2();
        let e4 = degeneracy_locus(&gen(w2, "e4")).unwrap();
        assert!(e4.is_empty());

        let e1 = degeneracy_locus(&gen(w2, "e1")).unwrap();
        assert_eq!(e1.v_piece_names(), ["xi"]);
        assert_eq!(e1.kind_multiset(), [ComponentKind::FiberPlane]);

        let e2 = degeneracy_locus(&gen(w2, "e2")).unwrap();
        assert_eq!(e2.u_piece_names(), ["u1"]);
        assert_eq!(e2.v_piece_names(), ["v1"]);
        // Glued into a single trivial-bundle surface.
        assert_eq!(e2.components.len(), 1);
        assert_eq!(
            e2.components[0].kind,
            ComponentKind::LineBundleSurface { twist: 0 }
        );

        let e3 = degeneracy_locus(&gen(w2, "e3")).unwrap();
        assert_eq!(e3.u_piece_names(), ["z"]);
        assert_eq!(e3.v_piece_names(), ["xi v1"]);
        assert_eq!(e3.components.len(), 2);
    }

    #[test]
    fn w3_piece_lists_match_expected() {
        let w3 = catalog::w3();
        for expected in catalog::expected_loci(w3).unwrap() {
            let locus = degeneracy_locus(&gen(w3, expected.gen)).unwrap();
            assert_eq!(
                locus.u_piece_names(),
                expected.u_pieces,
                "U pieces of {}",
                expected.gen
            );
            assert_eq!(
                locus.v_piece_names(),
                expected.v_pieces,
                "V pieces of {}",
                expected.gen
            );
            assert!(locus_well_defined(&locus), "overlap glue for {}", expected.gen);
        }
    }

    #[test]
    fn radical_and_absorption_in_decomposition() {
        // Ideal (ξ v1, ξ²) must reduce to the single piece {ξ = 0}.
        let w2 = catalog::w2();
        let e1 = gen(w2, "e1");
        let locus = degeneracy_locus(&e1).unwrap();
        assert_eq!(locus.v_pieces, vec![BTreeSet::from([0usize])]);
    }

    #[test]
    fn casimir_descriptions_for_reference_generators() {
        for spec in [catalog::w1(), catalog::w2(), catalog::w3()] {
            for (label, var) in catalog::expected_casimirs(spec).unwrap() {
                let cas = casimirs(&gen(spec, label), 3).unwrap();
                let vars = cas.independent_variables.clone().unwrap();
                assert_eq!(
                    vars,
                    BTreeSet::from([*var]),
                    "{} on {:?}: got {}",
                    label,
                    spec,
                    cas.local_description()
                );
                assert!(cas.stable, "{} unstable", label);
            }
        }
    }

    #[test]
    fn casimir_global_basis_can_be_constants_only() {
        // On W3 the structures with local description f(z) admit only
        // constant global Casimirs.
        let cas = casimirs(&gen(catalog::w3(), "e2"), 3).unwrap();
        assert_eq!(cas.local_description(), "f = f(z)");
        assert_eq!(cas.global_basis, vec![Poly::one()]);
    }

    #[test]
    fn casimir_kernel_closed_under_products() {
        let cas = casimirs(&gen(catalog::w2(), "e1"), 4).unwrap();
        for a in &cas.global_basis {
            for b in &cas.global_basis {
                let prod = a.mul(b);
                if prod.fiber_degree() <= 4 {
                    let q = gen(catalog::w2(), "e1");
                    assert!(function_bracket(&prod, &q).is_zero());
                }
            }
        }
    }

    #[test]
    fn w1_e3_casimirs_are_powers_of_z_u1() {
        // Not a coordinate subset: the kernel is spanned by (z u1)^m.
        let cas = casimirs(&gen(catalog::w1(), "e3"), 3).unwrap();
        assert_eq!(cas.independent_variables, None);
        let expected: Vec<Poly> = (0..=3)
            .map(|m| parse_u(&format!("(z*u1)^{m}")).unwrap())
            .collect();
        assert_eq!(cas.global_basis.len(), expected.len());
        for e in expected {
            assert!(
                function_bracket(&e, &gen(catalog::w1(), "e3")).is_zero(),
                "{e} should be a Casimir"
            );
        }
    }

    #[test]
    fn rejects_non_integrable_input() {
        let q = BivectorField::new(
            catalog::w1(),
            [
                parse_u("u1").unwrap(),
                parse_u("z + z*u2").unwrap(),
                Poly::zero(),
            ],
        );
        assert!(matches!(
            casimirs(&q, 2),
            Err(AnalysisError::NotIntegrable(s)) if s == "z*u1"
        ));
        assert!(foliation_report(&q, 2).is_err());
    }

    #[test]
    fn w3_partition_into_three_groups() {
        let w3 = catalog::w3();
        let structures: Vec<BivectorField> = catalog::w3_casimir_partition()
            .iter()
            .flat_map(|group| group.iter().map(|l| gen(w3, l)))
            .collect();
        let mut groups = classify_by_casimir(&structures, 3).unwrap();
        for g in &mut groups {
            g.sort();
        }
        groups.sort();
        let mut expected: Vec<Vec<String>> = catalog::w3_casimir_partition()
            .iter()
            .map(|g| g.iter().map(|s| s.to_string()).collect::<Vec<_>>())
            .collect();
        for g in &mut expected {
            g.sort();
        }
        expected.sort();
        assert_eq!(groups, expected);
    }

    #[test]
    fn distinguish_by_locus_examples() {
        let w3 = catalog::w3();
        // 3 pieces vs 4 pieces; glued types also differ.
        let v = distinguish_by_locus(&gen(w3, "e1"), &gen(w3, "e2")).unwrap();
        assert!(matches!(v, LocusVerdict::Distinguished { .. }));
        let v = distinguish_by_locus(&gen(w3, "e7"), &gen(w3, "e13")).unwrap();
        assert!(matches!(v, LocusVerdict::Distinguished { .. }));
        // Reflexive comparisons certify nothing.
        let v = distinguish_by_locus(&gen(w3, "e7"), &gen(w3, "e7")).unwrap();
        assert_eq!(v, LocusVerdict::Indistinguishable);
        // Symmetry.
        let ab = distinguish_by_locus(&gen(w3, "e3"), &gen(w3, "e4")).unwrap();
        let ba = distinguish_by_locus(&gen(w3, "e4"), &gen(w3, "e3")).unwrap();
        assert_eq!(
            matches!(ab, LocusVerdict::Distinguished { .. }),
            matches!(ba, LocusVerdict::Distinguished { .. })
        );
    }

    #[test]
    fn w3_betas_pairwise_distinguished() {
        let w3 = catalog::w3();
        let labels = ["e3", "e4", "e5", "e10", "e11"];
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                let v = distinguish_by_locus(&gen(w3, a), &gen(w3, b)).unwrap();
                assert!(
                    matches!(v, LocusVerdict::Distinguished { .. }),
                    "{a} vs {b} should be distinguished"
                );
            }
        }
    }

    #[test]
    fn foliation_reports() {
        let r = foliation_report(&gen(catalog::w1(), "e2"), 3).unwrap();
        assert!(r.zero_dim_leaves.contains("xi v2"));
        assert_eq!(r.generic_leaves, "2-dimensional leaves: level sets of u2");

        let r = foliation_report(&gen(catalog::w2(), "e4"), 3).unwrap();
        assert!(r.locus.is_empty());
        assert!(r.zero_dim_leaves.contains("none"));

        let r = foliation_report(&gen(catalog::w3(), "e3"), 3).unwrap();
        assert_eq!(r.locus.v_piece_names(), ["xi"]);
        assert!(r.generic_leaves.contains("u1"));
    }
}
