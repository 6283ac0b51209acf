use num_traits::Zero;
use qkdv::boson::{BosonVector, SchurBasis};
use qkdv::fermion::{
    apply_alpha, apply_normal_ordered, apply_word, apply_xi2, apply_xi4, from_vacuum, g_hat1_matrix, phi,
    phi_inverse, xi2_state, FermionOpSpec, Fermion, FockVector, WedgeVector,
};
use qkdv::partitions::{part, partitions_up_to, Half, MayaSet, Partition};
use qkdv::{rint, Rational};

fn modes(cut: Half) -> Vec<Half> {
    (-cut..=cut).filter(|h| h.rem_euclid(2) == 1).collect()
}

fn states(max: u32) -> Vec<MayaSet> {
    partitions_up_to(max).iter().map(Partition::maya).collect()
}

fn anticommutator(x: Fermion, y: Fermion, s: &MayaSet) -> FockVector {
    apply_word(&[x, y], s).add(&apply_word(&[y, x], s))
}

#[test]
fn canonical_anticommutation() {
    use Fermion::*;
    let ms = modes(13);
    for s in states(6) {
        for &a in &ms {
            for &b in &ms {
                let mixed = anticommutator(Psi(a), PsiStar(b), &s);
                let want = if a == b { FockVector::basis(s.clone()) } else { FockVector::zero() };
                assert_eq!(mixed, want);
                assert!(anticommutator(Psi(a), Psi(b), &s).is_zero());
                assert!(anticommutator(PsiStar(a), PsiStar(b), &s).is_zero());
            }
        }
    }
}

#[test]
fn quadratic_and_quartic_match_normal_ordering() {
    use Fermion::*;
    let ms = modes(5);
    for s in states(4) {
        for &a in &ms {
            for &b in &ms {
                assert_eq!(xi2_state(a, b, &s), apply_normal_ordered(&[Psi(a), PsiStar(b)], &s));
                for &c in &ms {
                    for &d in &ms {
                        let v = WedgeVector::basis(&s.to_partition());
                        let got = apply_xi4(a, b, c, d, &v).to_fock();
                        let want = apply_normal_ordered(&[Psi(a), PsiStar(b), Psi(c), PsiStar(d)], &s);
                        assert_eq!(got, want, "Ξ({a},{b},{c},{d})");
                    }
                }
            }
        }
    }
}

fn dm(a: Half, b: Half) -> bool {
    a == b && a < 0
}
fn dp(a: Half, b: Half) -> bool {
    a == b && a > 0
}
fn ind(x: bool) -> i64 {
    x as i64
}

#[test]
fn quadratic_commutators() {
    let ms = modes(5);
    for s in states(5) {
        for &a in &ms {
            for &b in &ms {
                for &u in &ms {
                    for &v in &ms {
                        let lhs = xi2_state(u, v, &s)
                            .map_states(|t| xi2_state(a, b, t))
                            .add(&xi2_state(a, b, &s).map_states(|t| xi2_state(u, v, t)).scale(&rint(-1)));
                        let mut rhs = FockVector::zero();
                        if b == u {
                            rhs = rhs.add(&xi2_state(a, v, &s));
                        }
                        if a == v {
                            rhs = rhs.add(&xi2_state(u, b, &s).scale(&rint(-1)));
                        }
                        let eta = ind(dm(a, v) && dp(b, u)) - ind(dp(a, v) && dm(b, u));
                        rhs.add_term(s.clone(), rint(eta));
                        assert_eq!(lhs, rhs, "[Ξ({a},{b}), Ξ({u},{v})]");
                    }
                }
            }
        }
    }
}

#[test]
fn diagonal_quadratic_counts_frobenius_coordinates() {
    for l in partitions_up_to(7) {
        let c = l.frobenius().c_set();
        for a in modes(17) {
            let want: i64 = c.iter().filter(|&&x| x == a).map(|&x| x.signum()).sum();
            assert_eq!(apply_xi2(a, a, &WedgeVector::basis(&l)), WedgeVector::basis(&l).scale(&rint(want)));
        }
    }
}

#[test]
fn quartic_diagonal_elements() {
    let ms = modes(9);
    for l in partitions_up_to(4) {
        let v = WedgeVector::basis(&l);
        let c = l.frobenius().c_set();
        let sgn = |x: Half| x.signum();
        for &a in &ms {
            for &b in &ms {
                for &cc in &ms {
                    for &d in &ms {
                        let e = v.inner(&apply_xi4(a, b, cc, d, &v));
                        if !((a == b && cc == d) || (a == d && b == cc)) {
                            assert!(e.is_zero());
                        }
                        if a == d && b == cc && a != b {
                            let want: i64 =
                                -c.iter().filter(|&&x| x == a).map(|&x| sgn(x)).sum::<i64>()
                                    * c.iter().filter(|&&x| x == b).map(|&x| sgn(x)).sum::<i64>();
                            assert_eq!(e, rint(want), "λ={l} a={a} b={b}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn quartic_spec_reordering() {
    let v = WedgeVector::basis(&part(&[3, 1]));
    let ms = modes(7);
    for &a in &ms {
        for &b in &ms {
            for &c in &ms {
                for &d in &ms {
                    let x = FermionOpSpec::xi4(a, b, c, d).apply(&v);
                    let y = FermionOpSpec::xi4(c, b, a, d).apply(&v);
                    assert_eq!(x, y.scale(&rint(-1)));
                    assert_eq!(x, apply_xi4(a, b, c, d, &v));
                }
            }
        }
    }
}

#[test]
fn psi_monomials_on_vacuum() {
    for l in partitions_up_to(8) {
        assert_eq!(from_vacuum(&l), FockVector::basis(l.maya()), "λ={l}");
    }
}

#[test]
fn alpha_is_power_sum_action() {
    for deg in 0..=6u32 {
        for l in qkdv::partitions::enumerate_partitions(deg) {
            let v = WedgeVector::basis(&l);
            let s = phi(&v);
            assert_eq!(phi_inverse(&s), v);
            for n in 1..=4i64 {
                let up = phi(&apply_alpha(n, &v));
                assert_eq!(up, s.mul_p(n as u32), "α_{n} on {l}");
                let down = phi(&apply_alpha(-n, &v));
                let want = s.d_dp(n as u32).scale(&rint(n));
                assert!(down.sub(&want).is_zero(), "α_-{n} on {l}");
            }
        }
    }
}

#[test]
fn alpha_removes_border_strips() {
    assert_eq!(apply_alpha(-2, &WedgeVector::basis(&part(&[2]))), WedgeVector::basis(&Partition::empty()));
    for l in partitions_up_to(7) {
        for n in 1..=l.size() {
            let mut want = WedgeVector::zero(l.size() - n);
            for g in l.border_strips(n) {
                let sign = if g.height % 2 == 1 { -1 } else { 1 };
                want = want.add(&WedgeVector::basis(&g.result).scale(&rint(sign)));
            }
            assert_eq!(apply_alpha(-(n as i64), &WedgeVector::basis(&l)), want, "λ={l} n={n}");
        }
    }
}

#[test]
fn alpha_pairings_match_double_strip_sums() {
    let ps = qkdv::partitions::enumerate_partitions(4);
    for l in &ps {
        for m in &ps {
            for n in 1..=4u32 {
                let lhs = apply_alpha(-(n as i64), &WedgeVector::basis(m))
                    .inner(&apply_alpha(-(n as i64), &WedgeVector::basis(l)));
                let mut rhs = 0i64;
                for g in l.border_strips(n) {
                    for h in m.border_strips(n) {
                        if g.result == h.result {
                            rhs += if (g.height + h.height) % 2 == 1 { -1 } else { 1 };
                        }
                    }
                }
                assert_eq!(lhs, rint(rhs));
            }
        }
    }
}

#[test]
fn first_order_level_one_up_to_eight() {
    for n in 0..=8 {
        let b = SchurBasis::get(n);
        let want = b.matrix_from_p_action(|al| {
            let e: Rational = al.parts().iter().map(|&m| rint(2 * (m as i64).pow(3))).sum();
            BosonVector::p(al).scale(&(e + qkdv::rat(1, 120)))
        });
        assert_eq!(g_hat1_matrix(1, n), want, "n={n}");
    }
}
