use rayon::prelude::*;
use serde::Serialize;

use super::graded::{tensor_torsion_length, TorsionLength};
use super::ideal::{stable_value_sets, FracIdeal};
use super::semigroup::{NumericalSemigroup, Semigroup};

/// Both claims for a rank-one monomial ideal `I` with `T = tr_ω(I)`:
/// (i) `(T : T) = (I : I)`, and (ii) `T` is a translate of the canonical ideal
/// of `S' = (I : I)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryCheck {
    pub semigroup: Semigroup,
    pub ideal: FracIdeal,
    pub end_semigroup: Semigroup,
    pub trace_omega: FracIdeal,
    pub end_of_trace: Semigroup,
    pub claim_end: bool,
    pub claim_canonical: bool,
    /// `k` with `T = K_(S') + k`.
    pub translation: Option<i64>,
}

impl CorollaryCheck {
    pub fn passed(&self) -> bool {
        self.claim_end && self.claim_canonical
    }
}

pub fn check_corollary_canonical(i: &FracIdeal) -> CorollaryCheck {
    let end_semigroup = i.end_semigroup();
    let trace_omega = i.trace_omega();
    let end_of_trace = trace_omega.end_semigroup();
    let translation = trace_omega.translation_to(&FracIdeal::canonical(&end_semigroup));
    CorollaryCheck {
        semigroup: i.parent().clone(),
        ideal: i.clone(),
        claim_end: end_of_trace == end_semigroup,
        claim_canonical: translation.is_some(),
        end_semigroup,
        trace_omega,
        end_of_trace,
        translation,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeStatus {
    #[serde(rename = "OK")]
    Ok,
    /// Some torsion length is only a lower bound.
    #[serde(rename = "UNSTABLE")]
    Unstable,
    /// Torsion-free tensor product for a module outside the conclusion of a
    /// conjecture. Reported, never treated as a failure.
    #[serde(rename = "COUNTEREXAMPLE-CANDIDATE")]
    CounterexampleCandidate,
}

/// Torsion of the tensor products in the two dimension-one freeness
/// conjectures, for a monomial ideal `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HwProbe {
    pub semigroup: Semigroup,
    pub ideal: FracIdeal,
    pub is_free: bool,
    pub is_omega_translate: bool,
    /// `I^* ⊗ I`.
    pub torsion_len_star: TorsionLength,
    /// `I^∨ ⊗ Hom(ω, I)`.
    pub torsion_len_vee_mix: TorsionLength,
    /// `(I^∨)^* ⊗ I^∨`.
    pub torsion_len_dual_chain: TorsionLength,
    pub prop_equiv_consistent: bool,
    /// On symmetric semigroups the mixed and starred lengths agree.
    pub gorenstein_consistent: Option<bool>,
    /// Torsion-free `I^* ⊗ I` for `I` not free.
    pub hwc_candidate: bool,
    /// Torsion-free `I^∨ ⊗ Hom(ω,I)` for `I` not a translate of `K`.
    pub hwcalt_candidate: bool,
    /// For candidates: the zero persists at twice the cutoff.
    pub replay_confirmed: Option<bool>,
    pub status: ProbeStatus,
}

pub fn hw_probe(i: &FracIdeal, cutoff: Option<i64>) -> HwProbe {
    let s = i.parent();
    let k = FracIdeal::canonical(s);
    let star = i.star();
    let vee = i.vee();
    let hom_omega = i.colon(&k).expect("same parent");
    let torsion_len_star = tensor_torsion_length(&star, i, cutoff);
    let torsion_len_vee_mix = tensor_torsion_length(&vee, &hom_omega, cutoff);
    let torsion_len_dual_chain = tensor_torsion_length(&vee.star(), &vee, cutoff);
    let is_free = i.is_principal();
    let is_omega_translate = i.is_canonical_translate();
    let prop_equiv_consistent = torsion_len_vee_mix.length == torsion_len_dual_chain.length;
    let gorenstein_consistent =
        s.is_symmetric().then_some(torsion_len_vee_mix.length == torsion_len_star.length);
    let hwc_candidate = torsion_len_star.is_zero() && !is_free;
    let hwcalt_candidate = torsion_len_vee_mix.is_zero() && !is_omega_translate;
    let stable = [&torsion_len_star, &torsion_len_vee_mix, &torsion_len_dual_chain].iter().all(|t| t.stable);
    let replay_confirmed = (hwc_candidate || hwcalt_candidate).then(|| {
        let a = tensor_torsion_length(&star, i, Some(2 * torsion_len_star.cutoff));
        let b = tensor_torsion_length(&vee, &hom_omega, Some(2 * torsion_len_vee_mix.cutoff));
        (!hwc_candidate || a.is_zero()) && (!hwcalt_candidate || b.is_zero())
    });
    let status = if !stable {
        ProbeStatus::Unstable
    } else if hwc_candidate || hwcalt_candidate {
        ProbeStatus::CounterexampleCandidate
    } else {
        ProbeStatus::Ok
    };
    HwProbe {
        semigroup: s.clone(),
        ideal: i.clone(),
        is_free,
        is_omega_translate,
        torsion_len_star,
        torsion_len_vee_mix,
        torsion_len_dual_chain,
        prop_equiv_consistent,
        gorenstein_consistent,
        hwc_candidate,
        hwcalt_candidate,
        replay_confirmed,
        status,
    }
}

/// Identities every value set in a sweep must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealInvariants {
    /// `(J : I)` is the largest set with `(J:I) + I ⊆ J`, for `J ∈ {R, K, I}`.
    pub colons_maximal: bool,
    /// `(K : (K : I)) = I`.
    pub omega_reflexive: bool,
    /// `I (R:I)` computed from either side agrees.
    pub trace_symmetric: bool,
    /// `tr_R(I) ⊆ R` and `tr_ω(I) ⊆ K`.
    pub traces_contained: bool,
    /// `tr_R(tr_R(I)) = tr_R(I)`; recorded, not required.
    pub trace_idempotent: bool,
}

impl IdealInvariants {
    pub fn of(i: &FracIdeal) -> IdealInvariants {
        let s = i.parent();
        let r = FracIdeal::ring(s);
        let k = FracIdeal::canonical(s);
        let tr = i.trace_ideal();
        IdealInvariants {
            colons_maximal: [&r, &k, i].iter().all(|j| j.colon_is_maximal(i)),
            omega_reflexive: i.omega_reflexive(),
            trace_symmetric: tr == i.star().product(i).expect("same parent"),
            traces_contained: r.contains_ideal(&tr) && k.contains_ideal(&i.trace_omega()),
            trace_idempotent: tr.trace_ideal() == tr,
        }
    }

    pub fn required_hold(&self) -> bool {
        self.colons_maximal && self.omega_reflexive && self.trace_symmetric && self.traces_contained
    }
}

/// The corollary and the value-set identities over every semigroup of genus
/// at most `max_genus` and every stable value set with minimum in `[-c, c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollarySweep {
    pub max_genus: usize,
    pub semigroups: usize,
    pub instances: usize,
    pub passed: usize,
    pub invariant_violations: usize,
    pub trace_idempotent: usize,
    /// Failing instances, in enumeration order.
    pub failures: Vec<CorollaryCheck>,
}

pub fn corollary_sweep(max_genus: usize) -> CorollarySweep {
    let semigroups = NumericalSemigroup::up_to_genus(max_genus);
    let per: Vec<(usize, usize, usize, usize, Vec<CorollaryCheck>)> = semigroups
        .par_iter()
        .map(|s| {
            let c = s.conductor();
            let (mut n, mut passed, mut bad, mut idem, mut failures) = (0, 0, 0, 0, Vec::new());
            for base in stable_value_sets(s) {
                for m0 in -c..=c {
                    let i = base.translate(m0);
                    let check = check_corollary_canonical(&i);
                    let inv = IdealInvariants::of(&i);
                    n += 1;
                    if inv.trace_idempotent {
                        idem += 1;
                    }
                    if !inv.required_hold() {
                        bad += 1;
                    }
                    if check.passed() {
                        passed += 1;
                    } else {
                        failures.push(check);
                    }
                }
            }
            (n, passed, bad, idem, failures)
        })
        .collect();
    let mut out = CorollarySweep {
        max_genus,
        semigroups: semigroups.len(),
        instances: 0,
        passed: 0,
        invariant_violations: 0,
        trace_idempotent: 0,
        failures: Vec::new(),
    };
    for (n, p, b, idem, f) in per {
        out.instances += n;
        out.passed += p;
        out.invariant_violations += b;
        out.trace_idempotent += idem;
        out.failures.extend(f);
    }
    out
}

/// Torsion probes over every semigroup of genus at most `max_genus` and
/// every stable value set with minimum 0 (torsion is translation invariant).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HwSweep {
    pub max_genus: usize,
    pub instances: usize,
    /// Instances with some unstable cutoff; excluded from the chain check.
    pub unstable: usize,
    pub equiv_checked: usize,
    pub equiv_consistent: usize,
    pub gorenstein_inconsistent: usize,
    pub symmetric_nonprincipal: usize,
    pub symmetric_nonprincipal_torsion: usize,
    pub candidates: Vec<HwProbe>,
    pub equiv_failures: Vec<HwProbe>,
}

pub fn hw_sweep(max_genus: usize, cutoff: Option<i64>) -> HwSweep {
    let semigroups = NumericalSemigroup::up_to_genus(max_genus);
    let probes: Vec<HwProbe> = semigroups
        .par_iter()
        .flat_map_iter(|s| stable_value_sets(s).into_iter().map(move |i| hw_probe(&i, cutoff)))
        .collect();
    let mut out = HwSweep {
        max_genus,
        instances: probes.len(),
        unstable: 0,
        equiv_checked: 0,
        equiv_consistent: 0,
        gorenstein_inconsistent: 0,
        symmetric_nonprincipal: 0,
        symmetric_nonprincipal_torsion: 0,
        candidates: Vec::new(),
        equiv_failures: Vec::new(),
    };
    for p in probes {
        if p.status == ProbeStatus::Unstable {
            out.unstable += 1;
            continue;
        }
        out.equiv_checked += 1;
        if p.prop_equiv_consistent {
            out.equiv_consistent += 1;
        } else {
            out.equiv_failures.push(p.clone());
        }
        if p.gorenstein_consistent == Some(false) {
            out.gorenstein_inconsistent += 1;
        }
        if p.semigroup.is_symmetric() && !p.is_free {
            out.symmetric_nonprincipal += 1;
            if !p.torsion_len_star.is_zero() {
                out.symmetric_nonprincipal_torsion += 1;
            }
        }
        if p.status == ProbeStatus::CounterexampleCandidate {
            out.candidates.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corollary_examples() {
        let s = NumericalSemigroup::new(&[3, 4, 5]).unwrap();
        let m = FracIdeal::maximal_ideal(&s);
        let c = check_corollary_canonical(&m);
        assert!(c.passed());
        assert_eq!(c.end_semigroup.generators(), &[1]);
        assert_eq!(c.translation, Some(3));
        let r = check_corollary_canonical(&FracIdeal::ring(&s));
        assert!(r.passed());
        assert_eq!(r.end_semigroup.generators(), s.generators());
        assert_eq!(r.trace_omega, FracIdeal::canonical(&s));
    }

    #[test]
    fn probe_examples() {
        let s = NumericalSemigroup::new(&[3, 4, 5]).unwrap();
        let p = hw_probe(&FracIdeal::ring(&s), None);
        assert!(p.is_free && p.torsion_len_star.is_zero() && p.prop_equiv_consistent);
        assert_eq!(p.status, ProbeStatus::Ok);
        let p = hw_probe(&FracIdeal::canonical(&s), None);
        assert!(p.is_omega_translate && !p.hwcalt_candidate);

        let s = NumericalSemigroup::new(&[3, 4]).unwrap();
        let p = hw_probe(&FracIdeal::maximal_ideal(&s), None);
        assert!(p.torsion_len_star.length > 0);
        assert_eq!(p.status, ProbeStatus::Ok);
        assert_eq!(p.gorenstein_consistent, Some(true));
    }

    #[test]
    fn small_sweeps() {
        let c = corollary_sweep(4);
        assert_eq!(c.semigroups, 15);
        assert_eq!((c.passed, c.invariant_violations), (c.instances, 0));
        let h = hw_sweep(4, None);
        assert_eq!(h.unstable, 0);
        assert_eq!(h.equiv_consistent, h.equiv_checked);
        assert_eq!(h.gorenstein_inconsistent, 0);
    }
}
