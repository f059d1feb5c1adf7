use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::{CuspLattice, Shift, VerticalDomain, Word, WordElement};
use crate::moebius::{H3Point, IsometricSphere, MoebiusMap};

use super::edges::{tangency_report, visible_representatives, Tangency, VisibleEdge};
use super::visibility::{envelope_height, SphereIndex, VisibilityVerdict};
use super::FordError;

/// Angle sums around an edge must be within this of `2 pi`.
pub const ANGLE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    CertifiedFordDomain,
    CertifiedIndiscrete,
    Inconclusive,
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        self != Verdict::Inconclusive
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedFordDomain => "CertifiedFordDomain",
            Verdict::CertifiedIndiscrete => "CertifiedIndiscrete",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Absence of visible tangencies certifies minimal parabolicity; their
/// presence decides nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimalParabolicity {
    Certified,
    Undetermined,
}

/// A sphere larger than the shortest lattice translation. Its existence
/// rules out discreteness: a sphere of radius `R > tau` produces one of
/// radius `R^2 / tau`, and so on without bound.
#[derive(Clone, Debug, PartialEq)]
pub struct IndiscretenessWitness {
    pub word: Word,
    pub radius: f64,
    pub min_translation_length: f64,
    pub escalated_radius: f64,
}

/// Faces `S_g` and `S_{g^-1}` glued by `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpineFace {
    pub face: Word,
    pub inverse: Word,
    pub face_sphere: IsometricSphere,
    pub inverse_sphere: Option<IsometricSphere>,
    /// Both sides visible and `g` carries a point of the face onto the
    /// envelope over the other side.
    pub paired: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCycle {
    /// Indices into the edge list, in the order visited.
    pub edges: Vec<usize>,
    /// Face pairing applied at each step, followed by a lattice translation.
    pub steps: Vec<Word>,
    pub monodromy: Word,
    /// Entrywise distance of the monodromy matrix from the identity, up to
    /// sign.
    pub monodromy_deviation: f64,
    pub angle_sum: f64,
    pub closed: bool,
}

impl EdgeCycle {
    pub fn is_identity(&self, tol: f64) -> bool {
        self.closed && self.monodromy_deviation <= tol
    }

    pub fn angle_ok(&self) -> bool {
        (self.angle_sum - TAU).abs() <= ANGLE_TOLERANCE
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FordCertificate {
    pub verdict: Verdict,
    pub spine_faces: Vec<SpineFace>,
    pub edge_cycles: Vec<EdgeCycle>,
    pub tangencies: Vec<Tangency>,
    pub minimal_parabolicity: MinimalParabolicity,
    pub indiscreteness: Option<IndiscretenessWitness>,
    pub diagnostics: Vec<String>,
}

/// Looks for a sphere of radius above `tau + tol`, returning the shortest
/// such word.
pub fn indiscreteness_test(
    candidates: &[WordElement],
    lattice: &CuspLattice,
    tol: f64,
) -> Option<IndiscretenessWitness> {
    let tau = lattice.min_translation_length();
    candidates
        .iter()
        .filter(|e| e.sphere.radius > tau + tol)
        .min_by(|a, b| a.coset().cmp(&b.coset()).then(a.word.cmp(&b.word)))
        .map(|e| IndiscretenessWitness {
            word: e.coset(),
            radius: e.sphere.radius,
            min_translation_length: tau,
            escalated_radius: e.sphere.radius * e.sphere.radius / tau,
        })
}

/// Checks the visible faces and edges against the conditions of Poincaré's
/// polyhedron theorem.
pub fn certify(
    verdicts: &[VisibilityVerdict],
    edges: &[VisibleEdge],
    domain: &VerticalDomain,
    tol: f64,
) -> Result<FordCertificate, FordError> {
    let elements: Vec<WordElement> = verdicts.iter().map(|v| v.element.clone()).collect();
    if let Some(witness) = indiscreteness_test(&elements, &domain.lattice, tol) {
        return Ok(FordCertificate {
            verdict: Verdict::CertifiedIndiscrete,
            spine_faces: Vec::new(),
            edge_cycles: Vec::new(),
            tangencies: Vec::new(),
            minimal_parabolicity: MinimalParabolicity::Undetermined,
            indiscreteness: Some(witness),
            diagnostics: Vec::new(),
        });
    }

    let mut diagnostics = Vec::new();
    let spheres: Vec<IsometricSphere> = elements.iter().map(|e| e.sphere).collect();
    let index = SphereIndex::new(&spheres);

    let mut coset_rep: BTreeMap<Word, usize> = BTreeMap::new();
    for (i, v) in verdicts.iter().enumerate() {
        let key = v.element.coset();
        match coset_rep.get(&key) {
            Some(&j) if verdicts[j].primary || !v.primary => {}
            _ => {
                coset_rep.insert(key, i);
            }
        }
    }
    let visible: Vec<usize> = visible_representatives(verdicts);

    let mut spine_faces = Vec::new();
    let mut grouped = BTreeSet::new();
    for &i in &visible {
        let face = verdicts[i].element.coset();
        let inverse = face.inverse().coset_key();
        let Some(&j) = coset_rep.get(&inverse) else {
            return Err(FordError::MalformedInput { face: face.to_string(), inverse: inverse.to_string() });
        };
        let pair = if face <= inverse { (face.clone(), inverse.clone()) } else { (inverse.clone(), face.clone()) };
        if !grouped.insert(pair) {
            continue;
        }
        let inverse_visible = verdicts[j].is_visible();
        let mut paired = inverse_visible;
        if !inverse_visible {
            diagnostics.push(format!("face {face} is visible but its inverse {inverse} is not"));
        }
        for (from, to) in [(i, j), (j, i)] {
            if paired && !pairing_lands_on_envelope(verdicts, &spheres, &index, domain, from, to, tol) {
                diagnostics.push(format!(
                    "pairing by {} does not carry its face onto the envelope",
                    verdicts[from].element.coset()
                ));
                paired = false;
            }
        }
        spine_faces.push(SpineFace {
            face,
            inverse,
            face_sphere: spheres[i],
            inverse_sphere: inverse_visible.then_some(spheres[j]),
            paired,
        });
    }
    if spine_faces.is_empty() {
        diagnostics.push("no visible faces".to_string());
    }

    let edge_cycles = trace_edge_cycles(verdicts, edges, &domain.lattice);
    for cycle in &edge_cycles {
        let first = cycle.edges.first().map(|&e| edge_label(&edges[e])).unwrap_or_default();
        if !cycle.closed {
            diagnostics.push(format!("edge cycle through {first} does not close"));
        } else {
            if !cycle.is_identity(tol) {
                diagnostics.push(format!(
                    "edge cycle through {first} has monodromy {} off the identity by {:e}",
                    cycle.monodromy, cycle.monodromy_deviation
                ));
            }
            if !cycle.angle_ok() {
                diagnostics.push(format!("edge cycle through {first} has angle sum {}", cycle.angle_sum));
            }
        }
    }

    let certified = diagnostics.is_empty();
    let tangencies = tangency_report(verdicts, tol);
    let minimal_parabolicity = if certified && tangencies.is_empty() {
        MinimalParabolicity::Certified
    } else {
        MinimalParabolicity::Undetermined
    };
    Ok(FordCertificate {
        verdict: if certified { Verdict::CertifiedFordDomain } else { Verdict::Inconclusive },
        spine_faces,
        edge_cycles,
        tangencies,
        minimal_parabolicity,
        indiscreteness: None,
        diagnostics,
    })
}

fn edge_label(e: &VisibleEdge) -> String {
    format!("({}, {})", e.first, e.second)
}

/// Maps the visibility witness of face `from` by its element and checks that
/// the image sits on the envelope, on a translate of face `to`.
fn pairing_lands_on_envelope(
    verdicts: &[VisibilityVerdict],
    spheres: &[IsometricSphere],
    index: &SphereIndex,
    domain: &VerticalDomain,
    from: usize,
    to: usize,
    tol: f64,
) -> bool {
    let v = &verdicts[from];
    let Some(&x) = v.witnesses.first() else { return false };
    let p = H3Point::new(x, v.element.sphere.height_at(x));
    let q = v.element.map.apply_h3(p);
    let (z, _) = domain.reduce_center(q.z);
    let near = index.near(spheres, z, 0.0);
    let local: Vec<IsometricSphere> = near.iter().map(|&k| spheres[k]).collect();
    let (top, argmax) = envelope_height(&local, z);
    let target = verdicts[to].element.coset();
    (top - q.t).abs() <= tol && argmax.iter().any(|&k| verdicts[near[k]].element.coset() == target)
}

/// Follows each edge orbit around its cycle: cross the face of `g`, map by
/// `g`, translate back to a stored edge, and continue across the face that
/// was the image of the other one.
fn trace_edge_cycles(verdicts: &[VisibilityVerdict], edges: &[VisibleEdge], lattice: &CuspLattice) -> Vec<EdgeCycle> {
    // (first coset, second coset, relative shift) -> (edge, stored order reversed)
    let mut lookup: BTreeMap<(Word, Word, Shift), (usize, bool)> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        let (a, b) = (&e.first, &e.second);
        lookup.entry((a.coset_key(), b.coset_key(), b.right_shift() - a.right_shift())).or_insert((k, false));
        lookup.entry((b.coset_key(), a.coset_key(), a.right_shift() - b.right_shift())).or_insert((k, true));
    }

    let side = |k: usize, second: bool| -> (&Word, &MoebiusMap, &Word) {
        let e = &edges[k];
        if second {
            (&e.second, &verdicts[e.second_index].element.map, &e.first)
        } else {
            (&e.first, &verdicts[e.first_index].element.map, &e.second)
        }
    };

    let max_steps = 2 * edges.len() + 2;
    let mut covered = vec![false; edges.len()];
    let mut cycles = Vec::new();
    for start in 0..edges.len() {
        if covered[start] {
            continue;
        }
        let mut state = (start, false);
        let mut cycle = EdgeCycle {
            edges: Vec::new(),
            steps: Vec::new(),
            monodromy: Word::identity(),
            monodromy_deviation: f64::INFINITY,
            angle_sum: 0.0,
            closed: false,
        };
        let mut matrix = MoebiusMap::identity();
        for _ in 0..max_steps {
            let (k, second) = state;
            covered[k] = true;
            cycle.edges.push(k);
            cycle.angle_sum += edges[k].dihedral_angle;
            let (g, g_map, h) = side(k, second);
            let g_inv = g.inverse();
            let u = g_inv.without_left();
            let v = h.mul(&g_inv).without_left();
            let key = (u.coset_key(), v.coset_key(), v.right_shift() - u.right_shift());
            let Some(&(next, reversed)) = lookup.get(&key) else { break };
            let anchor = if reversed { &edges[next].second } else { &edges[next].first };
            let t = u.right_shift() - anchor.right_shift();
            let step = Word::translation(t).mul(g);
            matrix = MoebiusMap::translation(lattice.vector(t)).compose(g_map).compose(&matrix);
            cycle.monodromy = step.mul(&cycle.monodromy);
            cycle.steps.push(step);
            state = (next, !reversed);
            if state == (start, false) {
                cycle.closed = true;
                break;
            }
        }
        if cycle.closed {
            cycle.monodromy_deviation = matrix.distance_mod_sign(&MoebiusMap::identity());
        }
        cycles.push(cycle);
    }
    cycles
}
