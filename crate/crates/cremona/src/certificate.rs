//! Machine-checkable evidence for contractibility verdicts.
//!
//! A contraction certificate records the construction data of each Cremona
//! map in the sequence, not the maps themselves: replaying a certificate
//! rebuilds every map from scratch, which re-runs all construction-time
//! birationality checks, then re-applies them to the stated arrangement and
//! confirms that every component ends up contracted. An adjoint witness
//! records a member of an adjoint system as a product of lines, and
//! verification re-evaluates every vanishing condition against the witness.

use serde::{Deserialize, Serialize};

use crate::arrangement::{CurveType, LineArrangement};
use crate::cremona_map::{
    dejonquieres_map, quadratic_map, quadratic_map_tangent, BaseEntry, CremonaMap,
};
use crate::linsys::{adjoint_system, member_satisfies, singular_inventory};
use crate::poly::HomPoly;
use crate::projective::{ProjLine, ProjPoint};
use crate::{EngineError, Result};

/// Construction data for one Cremona map, sufficient to rebuild it exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapStep {
    /// Quadratic map based at three non-collinear points.
    Quadratic {
        base: [ProjPoint; 3],
    },
    /// Quadratic map with two base points infinitely near: a point, a
    /// direction through it, and a third point off the direction.
    TangentQuadratic {
        point: ProjPoint,
        direction: ProjLine,
        third: ProjPoint,
    },
    /// de Jonquieres map determined by its apex and simple base points.
    DeJonquieres {
        apex: ProjPoint,
        simples: Vec<ProjPoint>,
    },
}

impl MapStep {
    /// Rebuilds the map, re-running all construction-time certification.
    pub fn build(&self) -> Result<CremonaMap> {
        match self {
            MapStep::Quadratic { base: [p, q, r] } => quadratic_map(p, q, r),
            MapStep::TangentQuadratic {
                point,
                direction,
                third,
            } => quadratic_map_tangent(point, direction, third),
            MapStep::DeJonquieres { apex, simples } => dejonquieres_map(apex, simples),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            MapStep::Quadratic { .. } | MapStep::TangentQuadratic { .. } => 2,
            MapStep::DeJonquieres { simples, .. } => simples.len() / 2 + 1,
        }
    }
}

/// One entry in a contraction certificate: a map plus the numerical type of
/// the surviving image, absent once nothing survives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionStep {
    pub map: MapStep,
    pub image_type: Option<CurveType>,
}

/// Replayable evidence that a line arrangement is contracted to points by a
/// composition of Cremona maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub initial_type: CurveType,
    pub lines: Vec<ProjLine>,
    pub steps: Vec<ContractionStep>,
    /// Final image of each input line, indexed like `lines`.
    pub terminal: Vec<ProjPoint>,
}

/// Outcome of a successful replay.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplayReport {
    pub degree: usize,
    pub steps: usize,
    pub terminal: Vec<ProjPoint>,
}

fn fail(step: usize, msg: impl std::fmt::Display) -> EngineError {
    EngineError::Invalid(format!("certificate replay failed at step {step}: {msg}"))
}

/// Moves the image of an already contracted component through the next map.
///
/// A settled point sitting at a fundamental point of the next map would
/// normally be blown back up into a curve, which voids the contraction, so
/// it is rejected. The one legal exception is the proper point under an
/// infinitely near base point of a quadratic map: the whole direction bundle
/// there is contracted again, and the pile lands at the limit of the map
/// along generic arcs.
pub(crate) fn advance_settled(
    map: &CremonaMap,
    p: &ProjPoint,
) -> std::result::Result<ProjPoint, String> {
    if let Some(q) = map.apply_point(p) {
        return Ok(q);
    }
    let tangent_here = map
        .base
        .iter()
        .any(|b| matches!(b, BaseEntry::InfinitelyNear { point, .. } if point == p));
    if !tangent_here {
        return Err("lands on a base point of a later map, which would blow it back up".into());
    }
    map.directional_limit(p)
        .ok_or_else(|| "lands on a base point whose direction bundle is not contracted".into())
}

/// Replays a contraction certificate from scratch.
///
/// Every map is rebuilt from its construction data, each intermediate image
/// is compared to the recorded numerical type, images of already contracted
/// components are tracked through the remaining maps (they must never meet a
/// base point, other than a tangency point whose directions collapse again,
/// or the composition would resurrect them), and the terminal points must
/// match the recorded list.
pub fn verify_contraction(cert: &ContractionCertificate) -> Result<ReplayReport> {
    let arr = LineArrangement::new(cert.lines.clone())?;
    let d = arr.degree();
    if arr.curve_type() != cert.initial_type {
        return Err(EngineError::Invalid(format!(
            "certificate states type {} but the lines form {}",
            cert.initial_type,
            arr.curve_type()
        )));
    }

    let mut current = Some(arr);
    let mut origin: Vec<usize> = (0..d).collect();
    let mut settled: Vec<(usize, ProjPoint)> = Vec::new();

    for (k, step) in cert.steps.iter().enumerate() {
        let Some(cur) = current.take() else {
            return Err(fail(k, "the arrangement was already fully contracted"));
        };
        let map = step.map.build().map_err(|e| fail(k, e))?;

        for (idx, p) in settled.iter_mut() {
            *p = advance_settled(&map, p)
                .map_err(|m| fail(k, format!("image of contracted component {idx} {m}")))?;
        }

        let image = map.apply_to_arrangement(&cur).map_err(|e| fail(k, e))?;
        for (ci, pt) in &image.contracted {
            settled.push((origin[*ci], pt.clone()));
        }
        origin = image.lines.iter().map(|(ci, _)| origin[*ci]).collect();

        if image.lines.is_empty() {
            if step.image_type.is_some() {
                return Err(fail(k, "records an image type but nothing survives"));
            }
            current = None;
        } else {
            let next = image.arrangement().map_err(|e| fail(k, e))?;
            match &step.image_type {
                Some(t) if *t == next.curve_type() => {}
                Some(t) => {
                    return Err(fail(
                        k,
                        format!("expected image type {t}, got {}", next.curve_type()),
                    ));
                }
                None => {
                    return Err(fail(
                        k,
                        format!("{} components survive unrecorded", next.degree()),
                    ));
                }
            }
            current = Some(next);
        }
    }

    if current.is_some() {
        return Err(EngineError::Invalid(format!(
            "certificate replay leaves {} components uncontracted",
            origin.len()
        )));
    }

    settled.sort_by_key(|(idx, _)| *idx);
    let terminal: Vec<ProjPoint> = settled.into_iter().map(|(_, p)| p).collect();
    if terminal != cert.terminal {
        return Err(EngineError::Invalid(
            "terminal points do not match the replayed contraction".into(),
        ));
    }

    Ok(ReplayReport {
        degree: d,
        steps: cert.steps.len(),
        terminal,
    })
}

/// Evidence that an adjoint system of an arrangement is nonempty: an
/// explicit member, given as a product of lines with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointWitness {
    pub n: usize,
    pub m: usize,
    pub curve_type: CurveType,
    pub lines: Vec<ProjLine>,
    pub member: Vec<(ProjLine, usize)>,
}

/// Outcome of a successful witness check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub member_degree: usize,
    pub conditions_checked: usize,
}

impl AdjointWitness {
    /// The member expanded to a single form.
    pub fn member_poly(&self) -> HomPoly {
        let mut f = HomPoly::constant_one();
        for (l, k) in &self.member {
            f = f.mul(&HomPoly::from_line(l).pow(*k));
        }
        f
    }
}

/// Re-checks an adjoint witness from scratch.
///
/// The member's degree must equal the adjoint degree, and at every singular
/// point the lines through it must add up to at least the required
/// multiplicity. The expanded polynomial is then checked once more against
/// the full condition matrix of the system, an independent evaluation path.
pub fn verify_witness(w: &AdjointWitness) -> Result<WitnessReport> {
    let arr = LineArrangement::new(w.lines.clone())?;
    if arr.curve_type() != w.curve_type {
        return Err(EngineError::Invalid(format!(
            "witness states type {} but the lines form {}",
            w.curve_type,
            arr.curve_type()
        )));
    }
    let d = arr.degree();
    let degree = (w.n * d) as i64 - 3 * w.m as i64;
    if degree < 1 {
        return Err(EngineError::Invalid(format!(
            "adjoint level ({}, {}) has degree {degree}, no line product fits",
            w.n, w.m
        )));
    }
    if w.member.is_empty() || w.member.iter().any(|(_, k)| *k == 0) {
        return Err(EngineError::Invalid(
            "witness member must be a nonempty product with positive exponents".into(),
        ));
    }
    let total: usize = w.member.iter().map(|(_, k)| k).sum();
    if total as i64 != degree {
        return Err(EngineError::Invalid(format!(
            "member has degree {total}, the system requires {degree}"
        )));
    }

    let singular = singular_inventory(&arr);
    let mut conditions = 0usize;
    for (p, mult) in &singular {
        let required = (w.n * mult) as i64 - w.m as i64;
        if required < 1 {
            continue;
        }
        let have: usize = w
            .member
            .iter()
            .filter(|(l, _)| l.contains(p))
            .map(|(_, k)| k)
            .sum();
        if (have as i64) < required {
            return Err(EngineError::Invalid(format!(
                "member has multiplicity {have} at {p}, the system requires {required}"
            )));
        }
        conditions += required as usize;
    }

    let spec = adjoint_system(d, &singular, w.n, w.m)?;
    if !member_satisfies(&spec, &w.member_poly())? {
        return Err(EngineError::Internal(
            "expanded member fails the condition matrix despite the line count".into(),
        ));
    }

    Ok(WitnessReport {
        member_degree: total,
        conditions_checked: conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{realize_family, Family};

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }

    fn ln(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::from_ints(a, b, c).unwrap()
    }

    fn triangle_certificate() -> ContractionCertificate {
        // x = 0, y = 0, z = 0; one quadratic at the vertices contracts all
        // three sides.
        let lines = vec![ln(1, 0, 0), ln(0, 1, 0), ln(0, 0, 1)];
        ContractionCertificate {
            initial_type: CurveType::parse("(3;2^3)").unwrap(),
            lines,
            steps: vec![ContractionStep {
                map: MapStep::Quadratic {
                    base: [pt(0, 0, 1), pt(0, 1, 0), pt(1, 0, 0)],
                },
                image_type: None,
            }],
            terminal: vec![pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)],
        }
    }

    #[test]
    fn triangle_contracts_in_one_quadratic_step() {
        let cert = triangle_certificate();
        let report = verify_contraction(&cert).unwrap();
        assert_eq!(report.degree, 3);
        assert_eq!(report.steps, 1);
        assert_eq!(report.terminal, cert.terminal);
    }

    #[test]
    fn replay_rejects_a_mutated_base_point() {
        let mut cert = triangle_certificate();
        let ContractionStep { map, .. } = &mut cert.steps[0];
        let MapStep::Quadratic { base } = map else {
            unreachable!()
        };
        base[2] = pt(1, 1, 1);
        assert!(verify_contraction(&cert).is_err());
    }

    #[test]
    fn replay_rejects_wrong_terminal_points() {
        let mut cert = triangle_certificate();
        cert.terminal.swap(0, 1);
        assert!(verify_contraction(&cert).is_err());
    }

    #[test]
    fn replay_rejects_an_unfinished_certificate() {
        let mut cert = triangle_certificate();
        cert.steps.clear();
        cert.terminal.clear();
        assert!(matches!(
            verify_contraction(&cert).unwrap_err(),
            EngineError::Invalid(_)
        ));
    }

    #[test]
    fn replay_rejects_resurrecting_a_contracted_component() {
        // The first quadratic contracts x, y, z and keeps x + y as a line;
        // the second is based at the image point of x, which would blow the
        // contracted component back up.
        let lines = vec![ln(1, 0, 0), ln(0, 1, 0), ln(0, 0, 1), ln(1, 1, 0)];
        let arr = LineArrangement::new(lines.clone()).unwrap();
        let cert = ContractionCertificate {
            initial_type: arr.curve_type(),
            lines,
            steps: vec![
                ContractionStep {
                    map: MapStep::Quadratic {
                        base: [pt(0, 0, 1), pt(0, 1, 0), pt(1, 0, 0)],
                    },
                    image_type: Some(CurveType::new(1, vec![]).unwrap()),
                },
                ContractionStep {
                    map: MapStep::Quadratic {
                        base: [pt(1, 0, 0), pt(1, -1, 0), pt(1, -1, 1)],
                    },
                    image_type: None,
                },
            ],
            terminal: vec![pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1)],
        };
        let err = verify_contraction(&cert).unwrap_err();
        assert!(err.to_string().contains("base point"), "{err}");
    }

    #[test]
    fn map_steps_roundtrip_through_json() {
        let steps = vec![
            MapStep::Quadratic {
                base: [pt(1, 2, 3), pt(0, 1, 0), pt(1, 0, 0)],
            },
            MapStep::TangentQuadratic {
                point: pt(0, 0, 1),
                direction: ln(1, 0, 0),
                third: pt(1, 1, 1),
            },
            MapStep::DeJonquieres {
                apex: pt(1, 0, 0),
                simples: vec![pt(1, 1, 1), pt(0, 1, 2)],
            },
        ];
        let text = serde_json::to_string(&steps).unwrap();
        let back: Vec<MapStep> = serde_json::from_str(&text).unwrap();
        assert_eq!(steps, back);
    }

    #[test]
    fn witness_of_a_quadruple_point_family_verifies() {
        // (12; 9, 4, 2^24): the pencil components plus the joining line to
        // total multiplicity five plus two general lines through the pencil
        // point give a member of the (2,3)-adjoint system of degree 15.
        let arr = realize_family(Family::Drop3Quadruple, 12, 3).unwrap();
        let sing = arr.singular_points();
        let p0 = sing[0].point.clone();
        let p1 = sing[1].point.clone();
        assert_eq!(sing[0].multiplicity(), 9);
        assert_eq!(sing[1].multiplicity(), 4);

        let mut member: Vec<(ProjLine, usize)> = Vec::new();
        let mut join_line = None;
        for l in arr.lines() {
            if l.contains(&p0) {
                let on_p1 = l.contains(&p1);
                member.push((l.clone(), if on_p1 { 5 } else { 1 }));
                if on_p1 {
                    join_line = Some(l.clone());
                }
            }
        }
        assert!(join_line.is_some());
        let avoid: Vec<ProjPoint> = sing.iter().map(|s| s.point.clone()).collect();
        let q1 = pt(1, 1000, 0);
        let q2 = pt(1, 1001, 0);
        for q in [&q1, &q2] {
            assert!(!avoid.contains(q));
        }
        member.push((crate::projective::join(&p0, &q1).unwrap(), 1));
        member.push((crate::projective::join(&p0, &q2).unwrap(), 1));

        let w = AdjointWitness {
            n: 2,
            m: 3,
            curve_type: arr.curve_type(),
            lines: arr.lines().to_vec(),
            member,
        };
        let report = verify_witness(&w).unwrap();
        assert_eq!(report.member_degree, 15);

        let mut broken = w.clone();
        broken.member.pop();
        assert!(verify_witness(&broken).is_err());
        let mut wrong = w.clone();
        wrong.member.last_mut().unwrap().1 += 1;
        assert!(verify_witness(&wrong).is_err());
    }

    #[test]
    fn witness_json_roundtrips() {
        let arr = realize_family(Family::Pencil, 3, 1).unwrap();
        let w = AdjointWitness {
            n: 2,
            m: 3,
            curve_type: arr.curve_type(),
            lines: arr.lines().to_vec(),
            member: vec![(ln(1, 2, 3), 2), (ln(1, 0, 0), 1)],
        };
        let text = serde_json::to_string(&w).unwrap();
        let back: AdjointWitness = serde_json::from_str(&text).unwrap();
        assert_eq!(w, back);
    }
}
