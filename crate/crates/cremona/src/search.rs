//! Bounded beam search for contractions at low degree, where no named
//! recipe applies.
//!
//! A found certificate is proof of contractibility; an exhausted budget
//! proves nothing.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arrangement::LineArrangement;
use crate::certificate::{verify_contraction, ContractionCertificate, MapStep};
use crate::classify::{random_point_off, random_point_on, Contractor};
use crate::projective::{collinear, ProjPoint};
use crate::rational::Int;
use crate::Result;

type StateKey = (Vec<[Int; 3]>, Vec<[Int; 3]>);

/// Two states behave identically iff they agree on the surviving lines and
/// on the points already carrying contracted components.
fn state_key(node: &Contractor) -> StateKey {
    let mut lines: Vec<[Int; 3]> = node
        .current()
        .map(|a| a.lines().iter().map(|l| l.primitive()).collect())
        .unwrap_or_default();
    lines.sort();
    let mut settled: Vec<[Int; 3]> = node
        .settled_points()
        .iter()
        .map(|p| p.primitive())
        .collect();
    settled.sort();
    (lines, settled)
}

/// Breadth-first beam search for a contraction of an arbitrary arrangement.
///
/// Moves are quadratic maps whose base points are drawn from the singular
/// points of the current image, seeded sample points on its components, and
/// one general point. A triple is only tried when every component passes
/// through some base point, since a component through none would map to a
/// conic, and when at least one component passes through two, so the move
/// contracts something. Children are deduplicated by their surviving lines
/// and settled points, ranked by remaining degree, and cut to the beam
/// width. The first fully contracted state wins and its certificate is
/// replayed before being returned. `None` means the budget was exhausted,
/// not that no contraction exists.
pub fn search_contraction(
    arr: &LineArrangement,
    depth: usize,
    width: usize,
    seed: u64,
) -> Result<Option<ContractionCertificate>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beam = vec![Contractor::new(arr, seed)];
    let mut seen: HashSet<StateKey> = HashSet::new();
    for _ in 0..depth {
        let mut next: Vec<Contractor> = Vec::new();
        for node in &beam {
            let Some(cur) = node.current() else { continue };
            let cur = cur.clone();
            let mut candidates: Vec<ProjPoint> = cur
                .singular_points()
                .iter()
                .map(|s| s.point.clone())
                .filter(|p| !node.is_settled(p))
                .collect();
            let mut avoid: Vec<ProjPoint> = node.settled_points();
            avoid.extend(candidates.iter().cloned());
            for l in cur.lines() {
                for _ in 0..2 {
                    let q = random_point_on(&mut rng, l, &avoid);
                    avoid.push(q.clone());
                    candidates.push(q);
                }
            }
            if let Ok(q) = random_point_off(&mut rng, cur.lines(), &avoid) {
                candidates.push(q);
            }

            let n = candidates.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        let (a, b, c) = (&candidates[i], &candidates[j], &candidates[k]);
                        if collinear(a, b, c) {
                            continue;
                        }
                        let mut contracts = false;
                        let mut covered = true;
                        for l in cur.lines() {
                            let hits = [a, b, c].iter().filter(|p| l.contains(p)).count();
                            if hits == 0 {
                                covered = false;
                                break;
                            }
                            if hits >= 2 {
                                contracts = true;
                            }
                        }
                        if !covered || !contracts {
                            continue;
                        }
                        let mut child = node.clone();
                        let step = MapStep::Quadratic {
                            base: [a.clone(), b.clone(), c.clone()],
                        };
                        if child.apply_any(step).is_err() {
                            continue;
                        }
                        if child.current().is_none() {
                            let cert = child.finish()?;
                            verify_contraction(&cert)?;
                            return Ok(Some(cert));
                        }
                        if seen.insert(state_key(&child)) {
                            next.push(child);
                        }
                    }
                }
            }
        }
        next.sort_by_cached_key(|n| {
            (
                n.current().map(|a| a.degree()).unwrap_or(0),
                n.steps_len(),
                state_key(n),
            )
        });
        next.truncate(width);
        beam = next;
        if beam.is_empty() {
            break;
        }
    }
    Ok(None)
}
