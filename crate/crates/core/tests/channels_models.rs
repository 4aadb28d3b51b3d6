use entopo::channels::{
    affine_apply, affine_compose, default_semigroup_grid, distance_markovian, kraus_apply,
    semigroup_grid_residual, AffineMap, Mat15,
};
use entopo::models::d3::{d3_zeta, D3Family};
use entopo::models::d8::{d8_concurrence, d8_concurrence_two_min, d8_embed, d8_separable};
use entopo::models::ye::{ye_concurrence, ye_kraus, ye_map, ye_state};
use entopo::models::zj::{dz_concurrence, zj_map};
use entopo::models::{
    D3Model, D3Params, Dephasing, Model, WernerFamily, YeModel, YeParams, ZjModel, ZjParams,
};
use entopo::state::{
    concurrence, positivity, random_pure_state, to_density, to_polarization, Vec15,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_d3(r: &mut ChaCha8Rng) -> D3Params {
    let rad: f64 = r.random_range(0.05..1.0);
    let th: f64 = r.random_range(0.0..std::f64::consts::PI);
    let ph: f64 = r.random_range(0.0..std::f64::consts::TAU);
    D3Params {
        g: r.random_range(0.05..2.0),
        gamma: r.random_range(0.01..2.0),
        b0: r.random_range(-2.0..2.0),
        bloch: [
            rad * th.sin() * ph.cos(),
            rad * th.sin() * ph.sin(),
            rad * th.cos(),
        ],
    }
}

fn random_zj(r: &mut ChaCha8Rng) -> ZjParams {
    // Fast relaxation with slow dephasing leaves the state space; draw again.
    loop {
        let dephasing = if r.random_bool(0.5) {
            Dephasing::Rtn {
                g: r.random_range(0.02..1.0),
                gamma: r.random_range(0.005..1.0),
            }
        } else {
            Dephasing::Exponential {
                gamma2: r.random_range(0.01..1.0),
            }
        };
        let p = ZjParams {
            r: r.random_range(0.05..=1.0),
            phi: r.random_range(0.0..std::f64::consts::TAU),
            b0: r.random_range(-1.0..1.0),
            gamma1: if r.random_bool(0.3) {
                0.0
            } else {
                r.random_range(0.001..0.5)
            },
            dephasing,
            family: if r.random_bool(0.5) {
                WernerFamily::Phi
            } else {
                WernerFamily::Psi
            },
        };
        if ZjModel::new(p.clone()).is_ok() {
            return p;
        }
    }
}

/// ZJ parameters whose map is completely positive: no relaxation, or
/// exponential dephasing with Γ₂ ≥ Γ₁/2.
fn random_cp_zj(r: &mut ChaCha8Rng) -> ZjParams {
    let mut p = random_zj(r);
    if p.gamma1 > 0.0 {
        p.dephasing = Dephasing::Exponential {
            gamma2: p.gamma1 / 2.0 + r.random_range(0.0..1.0),
        };
    }
    p
}

#[test]
fn wootters_oracle_d3() {
    let mut r = rng(31);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut p = random_d3(&mut r);
        p.bloch = [1.0, 0.0, 0.0];
        let m = D3Model::new(p.clone()).unwrap();
        let t = r.random_range(0.0..20.0);
        let c = d3_zeta(t, p.g, p.gamma).abs();
        assert!((m.concurrence(t) - c).abs() < 1e-15);
        worst = worst.max((c - concurrence(&m.state(t)).unwrap().c).abs());
    }
    assert!(worst < 1e-9, "{worst:e}");
}

#[test]
fn wootters_oracle_d3_general_bloch() {
    let mut r = rng(32);
    for _ in 0..1000 {
        let m = D3Model::new(random_d3(&mut r)).unwrap();
        let t = r.random_range(0.0..20.0);
        assert!((m.concurrence(t) - concurrence(&m.state(t)).unwrap().c).abs() < 1e-9);
    }
}

#[test]
fn wootters_oracle_d8() {
    let mut r = rng(33);
    for k in 0..2000 {
        // Populations (p_T0, p00, p11) and a 00-11 coherence below √(p00 p11).
        let p0 = if k % 2 == 0 {
            0.0
        } else {
            r.random_range(0.0..1.0)
        };
        let s: f64 = r.random_range(0.0..1.0);
        let (p1, p2) = ((1.0 - p0) * s, (1.0 - p0) * (1.0 - s));
        let a = r.random_range(0.0..=1.0) * (p1 * p2).sqrt();
        let ph: f64 = r.random_range(0.0..std::f64::consts::TAU);
        let mut m = [0.0; 8];
        m[2] = p0 - p1;
        m[7] = SQRT3 * (p0 + p1 - 2.0 * p2) / 3.0;
        m[5] = 2.0 * a * ph.cos();
        m[6] = 2.0 * a * ph.sin();
        let w = concurrence(&d8_embed(&m).unwrap()).unwrap().c;
        assert!((d8_concurrence(&m).unwrap() - w).abs() < 1e-9);
        if p0 == 0.0 {
            assert!((d8_concurrence_two_min(&m).unwrap() - w).abs() < 1e-9);
            assert!((d8_concurrence_two_min(&m).unwrap() - 2.0 * a).abs() < 1e-12);
        }
        assert_eq!(d8_separable(&m).unwrap(), w <= 1e-9);
    }
}

#[test]
fn wootters_oracle_ye() {
    let mut r = rng(34);
    for _ in 0..1000 {
        let p = YeParams {
            gamma: r.random_range(0.1..3.0),
            a0: r.random_range(0.0..=1.0),
        };
        let t = r.random_range(0.0..10.0) / p.gamma;
        let c = ye_concurrence(&p, t).unwrap();
        assert!(
            (c - concurrence(&ye_state(&p, t).unwrap()).unwrap().c).abs() < 1e-9,
            "{p:?} t {t}"
        );
    }
}

#[test]
fn wootters_oracle_zj() {
    let mut r = rng(35);
    for _ in 0..1000 {
        let p = random_zj(&mut r);
        let m = ZjModel::new(p.clone()).unwrap();
        let t = r.random_range(0.0..30.0);
        let n = m.state(t);
        let w = concurrence(&n).unwrap().c;
        assert!((m.concurrence(t) - w).abs() < 1e-9, "{p:?} t {t}");
        if p.family == WernerFamily::Psi {
            assert!((dz_concurrence(n.get("XX"), n.get("XY"), n.get("ZZ")) - w).abs() < 1e-9);
        }
    }
}

#[test]
fn trajectories_stay_physical() {
    let mut r = rng(36);
    for _ in 0..40 {
        let models: Vec<Box<dyn Model>> = vec![
            Box::new(D3Model::new(random_d3(&mut r)).unwrap()),
            Box::new(
                YeModel::new(YeParams {
                    gamma: r.random_range(0.1..3.0),
                    a0: r.random_range(0.0..=1.0),
                })
                .unwrap(),
            ),
            Box::new(ZjModel::new(random_zj(&mut r)).unwrap()),
        ];
        for m in &models {
            let times: Vec<f64> = (0..200).map(|k| m.horizon() * k as f64 / 199.0).collect();
            m.trajectory(&times).unwrap();
        }
    }
}

#[test]
fn ye_kraus_matches_affine_map() {
    let mut r = rng(37);
    for _ in 0..200 {
        let p = YeParams {
            gamma: r.random_range(0.1..3.0),
            a0: r.random_range(0.0..=1.0),
        };
        let t = r.random_range(0.0..5.0);
        let n = random_pure_state(&mut r).scaled(r.random_range(0.0..=1.0));
        let via_kraus =
            to_polarization(&kraus_apply(&ye_kraus(&p, t).unwrap(), &to_density(&n)).unwrap())
                .unwrap();
        let via_map = affine_apply(&ye_map(&p, t).unwrap(), &n);
        assert!(via_kraus.distance(&via_map) < 1e-10);
        assert!(
            AffineMap::from_kraus(&ye_kraus(&p, t).unwrap(), t)
                .apply(&n)
                .distance(&via_map)
                < 1e-10
        );
    }
}

#[test]
fn semigroup_laws() {
    let grid = default_semigroup_grid();
    let ye = YeModel::new(YeParams {
        gamma: 0.7,
        a0: 0.4,
    })
    .unwrap();
    let res = semigroup_grid_residual(ye.family().as_ref(), &grid).unwrap();
    assert!(res.transfer < 1e-10 && res.shift < 1e-10, "{res:?}");
    assert!(ye.family().claims_semigroup());

    let zj = ZjModel::new(ZjParams {
        dephasing: Dephasing::Exponential { gamma2: 0.3 },
        gamma1: 0.2,
        ..Default::default()
    })
    .unwrap();
    let res = semigroup_grid_residual(zj.family().as_ref(), &grid).unwrap();
    assert!(res.transfer < 1e-10 && res.shift < 1e-10, "{res:?}");

    // RTN dephasing is not a semigroup.
    let d3 = D3Family {
        g: 0.5,
        gamma: 0.1,
        b0: 1.0,
    };
    assert!(semigroup_grid_residual(&d3, &grid).unwrap().transfer > 1e-3);
}

#[test]
fn purity_never_exceeds_pure_shell() {
    let mut r = rng(38);
    for _ in 0..300 {
        let t = r.random_range(0.0..10.0);
        let maps = [
            ye_map(
                &YeParams {
                    gamma: r.random_range(0.1..2.0),
                    a0: 0.3,
                },
                t,
            )
            .unwrap(),
            zj_map(&random_cp_zj(&mut r), t),
            D3Model::new(random_d3(&mut r)).unwrap().family().map_at(t),
        ];
        let n = random_pure_state(&mut r);
        for m in &maps {
            let out = m.apply(&n);
            assert!(out.norm() <= SQRT3 + 1e-9);
            assert!(positivity(&out, 1e-10).physical);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let mut random_map = || AffineMap {
            t: r.random_range(0.0..1.0),
            transfer: Mat15::from_fn(|_, _| r.random_range(-0.5..0.5)),
            shift: Vec15::from_fn(|_, _| r.random_range(-0.5..0.5)),
        };
        let (a, b, c) = (random_map(), random_map(), random_map());
        let left = affine_compose(&affine_compose(&c, &b), &a);
        let right = affine_compose(&c, &affine_compose(&b, &a));
        prop_assert!((left.transfer - right.transfer).amax() < 1e-12);
        prop_assert!((left.shift - right.shift).amax() < 1e-12);
    }
}

#[test]
fn ye_purity_increases_once_relaxation_dominates() {
    // |n| grows for κ = e^{−Γt} ≤ 1/2 whatever a₀ is.
    for a0 in [0.0, 0.1, 1.0 / 3.0, 0.6, 1.0] {
        let m = YeModel::new(YeParams { gamma: 1.0, a0 }).unwrap();
        let norms: Vec<f64> = (0..500)
            .map(|k| m.state(2f64.ln() + k as f64 * 0.02).norm())
            .collect();
        assert!(norms.windows(2).all(|w| w[1] >= w[0] - 1e-12), "a0 = {a0}");
    }
}

#[test]
fn ye_purity_dips_before_it_grows() {
    // At a₀ = 0 the start has |n|² = 11/9 and the minimum |n|² = 1 sits at κ = 3/4.
    let m = YeModel::new(YeParams {
        gamma: 1.0,
        a0: 0.0,
    })
    .unwrap();
    assert!((m.state(0.0).norm_sq() - 11.0 / 9.0).abs() < 1e-12);
    let t_min = (4.0f64 / 3.0).ln();
    assert!((m.state(t_min).norm_sq() - 1.0).abs() < 1e-9);
    assert!(m.state(t_min - 0.05).norm_sq() > 1.0 && m.state(t_min + 0.05).norm_sq() > 1.0);
}

#[test]
fn pure_dephasing_keeps_zj_in_a_plane() {
    for family in [WernerFamily::Phi, WernerFamily::Psi] {
        let p = ZjParams {
            r: 0.7,
            b0: 0.4,
            gamma1: 0.0,
            family,
            ..Default::default()
        };
        let m = ZjModel::new(p.clone()).unwrap();
        let zz0 = m.state(0.0).get("ZZ");
        for k in 0..300 {
            let t = k as f64 * 0.3;
            let n = m.state(t);
            assert_eq!(n.get("ZZ"), zz0);
            let r2 = n.get("XX").powi(2) + n.get("XY").powi(2);
            assert!((r2 - (p.r * p.dephasing.zeta(t)).powi(2)).abs() < 1e-14);
        }
    }
}

#[test]
fn d3_equatorial_plane_is_invariant() {
    let m = D3Model::new(D3Params {
        g: 0.8,
        gamma: 0.2,
        b0: 1.3,
        bloch: [0.3, 0.6, 0.0],
    })
    .unwrap();
    for k in 0..300 {
        assert_eq!(m.effective_bloch(k as f64 * 0.1)[2], 0.0);
    }
}

#[test]
fn d3_distance_markovianity_follows_noise_regime() {
    let times: Vec<f64> = (0..4001).map(|k| k as f64 * 0.01).collect();
    let markov = D3Model::new(D3Params {
        g: 0.5,
        gamma: 1.0,
        ..Default::default()
    })
    .unwrap();
    assert!(
        distance_markovian(&markov.trajectory(&times).unwrap())
            .unwrap()
            .is_distance_markovian
    );
    let non = D3Model::new(D3Params {
        g: 0.5,
        gamma: 0.1,
        ..Default::default()
    })
    .unwrap();
    assert!(
        !distance_markovian(&non.trajectory(&times).unwrap())
            .unwrap()
            .is_distance_markovian
    );
}
