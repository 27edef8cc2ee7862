use super::entail::entails_normalized;
use super::zone::ExistentialZone;
use super::ZoneError;
use crate::qo;
use crate::tpn::Transition;

/// Zones whose markings reach `zone` by firing `t` once.
///
/// Each zone token is either produced by `t` (matched to an output arc of
/// its place, its age constrained by that arc) or survives the firing. The
/// matched tokens are projected away from the normalized conjunction, then
/// one token per input arc is added.
pub fn pre_discrete(zone: &ExistentialZone, t: &Transition) -> Result<Vec<ExistentialZone>, ZoneError> {
    zone.require_normalized()?;
    let mut out = Vec::new();
    let mut matched = vec![None; zone.token_count()];
    let mut used = vec![false; t.outputs.len()];
    partial_injections(zone, t, 0, &mut matched, &mut used, &mut out)?;
    out.sort_by_cached_key(|z| z.canonical_key());
    out.dedup();
    Ok(qo::minimize_by_key(
        &out,
        entails_normalized,
        |z| z.canonical_key(),
    ))
}

fn partial_injections(
    zone: &ExistentialZone,
    t: &Transition,
    k: usize,
    matched: &mut Vec<Option<usize>>,
    used: &mut [bool],
    out: &mut Vec<ExistentialZone>,
) -> Result<(), ZoneError> {
    if k == zone.token_count() {
        if let Some(z) = predecessor(zone, t, matched)? {
            out.push(z);
        }
        return Ok(());
    }
    partial_injections(zone, t, k + 1, matched, used, out)?;
    for (arc_idx, arc) in t.outputs.iter().enumerate() {
        if used[arc_idx] || arc.place != zone.placing()[k] {
            continue;
        }
        used[arc_idx] = true;
        matched[k] = Some(arc_idx);
        partial_injections(zone, t, k + 1, matched, used, out)?;
        matched[k] = None;
        used[arc_idx] = false;
    }
    Ok(())
}

fn predecessor(
    zone: &ExistentialZone,
    t: &Transition,
    matched: &[Option<usize>],
) -> Result<Option<ExistentialZone>, ZoneError> {
    let mut conj = zone.clone();
    for (k, arc) in matched.iter().enumerate() {
        if let Some(arc_idx) = arc {
            conj = conj.conjunction(t.outputs[*arc_idx].interval, k + 1)?;
        }
    }
    let conj = conj.normalize();
    if !conj.dbm().closed_is_consistent() {
        return Ok(None);
    }
    let mut rest = conj;
    for k in (0..matched.len()).rev() {
        if matched[k].is_some() {
            rest = rest.abstraction(k + 1)?;
        }
    }
    for arc in &t.inputs {
        rest = rest.addition(arc.place, arc.interval);
    }
    Ok(Some(rest.normalize()))
}
