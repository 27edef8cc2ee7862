use rand::Rng;

use wsts::gallery::{
    b_entails, expand_ad_to_b, expand_s2_to_s1, s2_entails, AdAtom, AdClass, AdConstraint, ConstRange,
    GalleryError, S2Atom, S2Constraint, VectorConstraint, DEFAULT_EXPANSION_CAP,
};
use wsts::qo;
use wsts_oracles::{int_grid, rng, sparser_member};

fn nat_grid(n: usize, hi: u64) -> Vec<Vec<u64>> {
    int_grid(n, 0, hi as i64)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as u64).collect())
        .collect()
}

fn geq(x: &[u64], b: &[u64]) -> bool {
    x.iter().zip(b).all(|(a, b)| a >= b)
}

#[test]
fn vector_entailment_matches_grid() {
    let mut rng = rng(601);
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let b1: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let b2: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let want = nat_grid(n, 6).iter().all(|x| !geq(x, &b2) || geq(x, &b1));
        let got = b_entails(&VectorConstraint(b1.clone()), &VectorConstraint(b2.clone())).unwrap();
        assert_eq!(got, want, "{b1:?} {b2:?}");
    }
}

fn random_atoms(rng: &mut impl Rng, n: usize, disjoint: bool, single: bool) -> Vec<AdAtom> {
    let mut free: Vec<usize> = (1..=n).collect();
    let mut atoms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let pool: Vec<usize> = if disjoint { free.clone() } else { (1..=n).collect() };
        if pool.is_empty() {
            break;
        }
        let size = if single { 1 } else { rng.gen_range(1..=pool.len()) };
        let mut vars: Vec<usize> = pool.clone();
        while vars.len() > size {
            vars.remove(rng.gen_range(0..vars.len()));
        }
        free.retain(|v| !vars.contains(v));
        atoms.push(AdAtom {
            vars,
            bound: rng.gen_range(0..=3),
        });
    }
    atoms
}

fn ad_holds(atoms: &[AdAtom], x: &[u64]) -> bool {
    atoms.iter().all(|a| a.vars.iter().map(|&v| x[v - 1]).sum::<u64>() >= a.bound)
}

#[test]
fn sum_expansion_preserves_denotation() {
    let mut rng = rng(602);
    for k in 0..300 {
        let n = rng.gen_range(1..=3);
        let atoms = random_atoms(&mut rng, n, k % 3 == 1, k % 3 == 2);
        let c = AdConstraint::new(atoms.clone()).unwrap();
        let expansion = expand_ad_to_b(&c, n).unwrap();
        let vecs: Vec<Vec<u64>> = expansion.iter().map(|v| v.0.clone()).collect();
        for (i, a) in vecs.iter().enumerate() {
            for (j, b) in vecs.iter().enumerate() {
                assert!(i == j || !qo::vector_leq(a, b), "{vecs:?}");
            }
        }
        let maxb = atoms.iter().map(|a| a.bound).max().unwrap_or(0);
        for x in nat_grid(n, 2 * maxb) {
            assert_eq!(ad_holds(&atoms, &x), vecs.iter().any(|v| geq(&x, v)), "{atoms:?} {x:?}");
        }
        // the specialised classes must agree with the general procedure
        let general = AdConstraint::with_class(atoms, AdClass::Ad).unwrap();
        assert_eq!(expand_ad_to_b(&general, n).unwrap(), expansion);
    }
}

#[test]
fn undersized_dimension_is_rejected() {
    let c = AdConstraint::new(vec!["x3>=1".parse().unwrap()]).unwrap();
    assert!(matches!(
        expand_ad_to_b(&c, 2),
        Err(GalleryError::VariableOutOfRange { var: 3, dim: 2 })
    ));
}

fn random_gap(rng: &mut impl Rng, vars: usize, cmin: i64, cmax: i64) -> S2Constraint {
    let atoms = (0..rng.gen_range(0..=2))
        .map(|_| {
            let var = rng.gen_range(1..=vars);
            match rng.gen_range(0..4) {
                0 | 1 => S2Atom::AtLeast {
                    var,
                    c: rng.gen_range(cmin - 2..=cmax + 2),
                },
                2 => S2Atom::AtMost {
                    var,
                    c: rng.gen_range(cmin - 2..=cmax + 2),
                },
                _ => {
                    let y = rng.gen_range(1..=vars);
                    S2Atom::Gap {
                        x: var,
                        y,
                        c: rng.gen_range(-1..=3),
                    }
                }
            }
        })
        .collect();
    S2Constraint::new(vars, atoms).unwrap()
}

fn gap_holds(psi: &S2Constraint, g: &[i64]) -> bool {
    psi.atoms().iter().all(|a| match *a {
        S2Atom::AtLeast { var, c } => c <= g[var - 1],
        S2Atom::AtMost { var, c } => g[var - 1] <= c,
        S2Atom::Gap { x, y, c } => c <= g[y - 1] - g[x - 1],
    })
}

#[test]
fn gap_expansion_preserves_denotation() {
    let mut rng = rng(603);
    let (mut expanded, mut refused) = (0, 0);
    for _ in 0..300 {
        let vars = rng.gen_range(1..=3);
        let cmin = rng.gen_range(-2..=3);
        let cmax = cmin + rng.gen_range(0..=2);
        let consts = ConstRange::new(cmin, cmax).unwrap();
        let psi = random_gap(&mut rng, vars, cmin, cmax);
        let expansion = match expand_s2_to_s1(&psi, consts, DEFAULT_EXPANSION_CAP) {
            Ok(e) => e,
            Err(GalleryError::NotExpressible(_)) => {
                refused += 1;
                continue;
            }
            Err(e) => panic!("{psi}: {e}"),
        };
        expanded += 1;
        let span = if vars == 3 { 5 } else { 8 };
        for g in int_grid(vars, cmin - span, cmax + span) {
            let got = expansion.iter().any(|phi| sparser_member(&g, phi.values(), cmin..=cmax));
            assert_eq!(got, gap_holds(&psi, &g), "{psi} over {cmin}..{cmax} at {g:?}");
        }
        for (i, a) in expansion.iter().enumerate() {
            for (j, b) in expansion.iter().enumerate() {
                assert!(i == j || !sparser_member(b.values(), a.values(), cmin..=cmax));
            }
        }
    }
    assert!(expanded > 200, "{expanded} expanded, {refused} refused");
}

#[test]
fn gap_entailment_matches_grid() {
    let mut rng = rng(604);
    let (mut checked, mut positive) = (0, 0);
    while checked < 300 {
        let vars = rng.gen_range(1..=2);
        let cmin = rng.gen_range(-2..=3);
        let cmax = cmin + rng.gen_range(0..=1);
        let consts = ConstRange::new(cmin, cmax).unwrap();
        let psi1 = random_gap(&mut rng, vars, cmin, cmax);
        let psi2 = random_gap(&mut rng, vars, cmin, cmax);
        let Ok(got) = s2_entails(&psi1, &psi2, consts, DEFAULT_EXPANSION_CAP) else {
            continue;
        };
        let want = int_grid(vars, cmin - 10, cmax + 10)
            .iter()
            .all(|g| !gap_holds(&psi2, g) || gap_holds(&psi1, g));
        assert_eq!(got, want, "{psi1} vs {psi2} over {cmin}..{cmax}");
        checked += 1;
        positive += want as usize;
    }
    assert!(positive > 0);
}
