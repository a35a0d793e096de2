//! Built-in reference states with known rank profiles, classifications,
//! and superposition outcomes. The `verify-paper` CLI command runs every
//! fixture and reports one line per check; the acceptance suite asserts
//! them as tests.
//!
//! All amplitudes are evaluated from exact integer-radical expressions
//! rather than copied decimals.

use num_complex::Complex64;

use crate::disentangle::verify_plan;
use crate::robustness::{certify, classify, StateClass};
use crate::sample::{random_product_state, rng_from_seed};
use crate::schmidt::{rank_profile, rank_profile_full, schmidt_rank};
use crate::state::{ProductState, PureState, SuperpositionPlan};
use crate::Bipartition;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Result of one fixture check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// A named reference state with its expected behavior.
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    runner: fn(f64) -> Vec<CheckResult>,
}

impl Fixture {
    pub fn run(&self, tol: f64) -> Vec<CheckResult> {
        (self.runner)(tol)
    }
}

/// All fixtures, in presentation order.
pub fn all() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "intro",
            description: "GHZ plus |000> can superpose to the full product |111>",
            runner: run_intro,
        },
        Fixture {
            name: "example1",
            description: "generalized GHZ: every rank equals the level d",
            runner: run_example1,
        },
        Fixture {
            name: "example2",
            description: "a0|000> + a1|111> stays GME under orthogonal product superposition",
            runner: run_example2,
        },
        Fixture {
            name: "example3",
            description: "rank-2 GME state loses GME under one orthogonal product term",
            runner: run_example3,
        },
        Fixture {
            name: "example4",
            description: "rank-2 GME state becomes a full product under one orthogonal term",
            runner: run_example4,
        },
        Fixture {
            name: "example5",
            description: "two-step elimination of a 3-level bipartite state, explicit weights",
            runner: run_example5,
        },
    ]
}

/// (|000> + |111>)/sqrt(2)
pub fn ghz3() -> PureState {
    PureState::ghz(3, 2).unwrap()
}

/// (|000> + |100> + |111>)/sqrt(3): GME with every single-qubit rank 2.
pub fn psi2() -> PureState {
    let mut amps = vec![Complex64::ZERO; 8];
    amps[0b000] = re(1.0);
    amps[0b100] = re(1.0);
    amps[0b111] = re(1.0);
    PureState::new(vec![2, 2, 2], amps).unwrap()
}

/// sqrt(2)/4 |001> + sqrt(5)/4 |01>|+> + 3/4 |1>|b>|+>, with
/// |b> = (2|0> + sqrt(5)|1>)/3.
pub fn psi3() -> PureState {
    let s2 = 2f64.sqrt();
    let s5 = 5f64.sqrt();
    let mut amps = vec![Complex64::ZERO; 8];
    amps[0b001] = re(s2 / 4.0);
    amps[0b010] = re(s5 / (4.0 * s2));
    amps[0b011] = re(s5 / (4.0 * s2));
    amps[0b100] = re(1.0 / (2.0 * s2));
    amps[0b101] = re(1.0 / (2.0 * s2));
    amps[0b110] = re(s5 / (4.0 * s2));
    amps[0b111] = re(s5 / (4.0 * s2));
    PureState::new(vec![2, 2, 2], amps).unwrap()
}

/// |b> = (2|0> + sqrt(5)|1>)/3
pub fn b_vector() -> Vec<Complex64> {
    vec![re(2.0 / 3.0), re(5f64.sqrt() / 3.0)]
}

/// (3|00> + 6|11> + 2 sqrt(26) |22>)/sqrt(149): bipartite, Schmidt rank 3.
pub fn example5_state() -> PureState {
    let n = 149f64.sqrt();
    let mut amps = vec![Complex64::ZERO; 9];
    amps[0] = re(3.0 / n);
    amps[4] = re(6.0 / n);
    amps[8] = re(2.0 * 26f64.sqrt() / n);
    PureState::new(vec![3, 3], amps).unwrap()
}

fn class_check(name: &str, got: &StateClass, want: StateClass) -> CheckResult {
    check(
        name,
        *got == want,
        format!("expected {}, got {}", want, got),
    )
}

fn fidelity_check(name: &str, got: f64, min: f64) -> CheckResult {
    check(name, got >= min, format!("fidelity {got:.17}, need >= {min}"))
}

fn run_intro(tol: f64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let ghz = ghz3();
    out.push(class_check(
        "ghz is GME",
        &classify(&ghz, tol).unwrap().class,
        StateClass::Gme,
    ));
    let p000 = ProductState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
    let s = ghz
        .superpose(re(2f64.sqrt()), &[(re(-1.0), p000)])
        .unwrap();
    out.push(class_check(
        "sqrt(2) ghz - |000> is a full product",
        &classify(&s, tol).unwrap().class,
        StateClass::FullySeparableProduct,
    ));
    let one = PureState::basis(vec![2, 2, 2], &[1, 1, 1]).unwrap();
    out.push(fidelity_check(
        "superposition equals |111>",
        s.fidelity(&one).unwrap(),
        1.0 - 1e-12,
    ));
    out
}

fn run_example1(tol: f64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in [3usize, 4] {
        for d in [2usize, 3, 4] {
            let ghz = PureState::ghz(n, d).unwrap();
            let profile = rank_profile_full(&ghz, tol).unwrap();
            let ok = profile.r1_min == d && profile.r1_max == d && profile.r2_min == Some(d);
            out.push(check(
                &format!("ghz n={n} d={d}: r1_min = r1_max = r2_min = {d}"),
                ok,
                format!(
                    "r1_min {}, r1_max {}, r2_min {:?}",
                    profile.r1_min, profile.r1_max, profile.r2_min
                ),
            ));
        }
    }
    out
}

fn run_example2(tol: f64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let (a0, a1) = (0.6, 0.8);
    let mut amps = vec![Complex64::ZERO; 8];
    amps[0b000] = re(a0);
    amps[0b111] = re(a1);
    let psi1 = PureState::new(vec![2, 2, 2], amps).unwrap();
    out.push(class_check(
        "a0|000> + a1|111> is GME",
        &classify(&psi1, tol).unwrap().class,
        StateClass::Gme,
    ));

    // Superpose with random product states orthogonal to the state: pick
    // the first two factors at random and solve the third for
    // orthogonality. Every nontrivial mix must keep all ranks at 2.
    let mut rng = rng_from_seed(0x45c1);
    let mut all_gme = true;
    let mut all_orth = true;
    let mut detail = String::from("all 20 samples stayed GME");
    for trial in 0..20 {
        let rand = random_product_state(&[2, 2], &mut rng);
        let alpha = rand.factor(0);
        let beta = rand.factor(1);
        // <psi1|p> = a0 alpha0 beta0 gamma0 + a1 alpha1 beta1 gamma1 = 0
        let c0 = alpha[0] * beta[0];
        let c1 = alpha[1] * beta[1];
        let gamma = vec![re(a1) * c1, -re(a0) * c0];
        let p = ProductState::new(vec![
            alpha.iter().copied().collect(),
            beta.iter().copied().collect(),
            gamma,
        ])
        .unwrap();
        if psi1.inner(&p.to_pure()).unwrap().norm() > 1e-10 {
            all_orth = false;
        }
        let theta = 0.2 + 1.3 * (trial as f64) / 20.0;
        let s = psi1
            .superpose(re(theta.cos()), &[(re(theta.sin()), p)])
            .unwrap();
        let profile = rank_profile(&s, tol).unwrap();
        if profile.r1_min != 2 || profile.r1_max != 2 {
            all_gme = false;
            detail = format!(
                "trial {} gave r1_min {} r1_max {}",
                trial, profile.r1_min, profile.r1_max
            );
        }
    }
    out.push(check(
        "constructed product states are orthogonal to the state",
        all_orth,
        "max overlap above 1e-10".into(),
    ));
    out.push(check(
        "orthogonal superpositions keep every rank at 2",
        all_gme,
        detail,
    ));
    out
}

fn run_example3(tol: f64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let psi2 = psi2();
    let profile = rank_profile(&psi2, tol).unwrap();
    out.push(check(
        "base state has every rank 2",
        profile.r1_min == 2 && profile.r1_max == 2,
        format!("r1_min {}, r1_max {}", profile.r1_min, profile.r1_max),
    ));

    let p011 = ProductState::basis(vec![2, 2, 2], &[0, 1, 1]).unwrap();
    let s = psi2
        .superpose(re(3f64.sqrt() / 2.0), &[(re(0.5), p011)])
        .unwrap();

    // |+> ⊗ (|00> + |11>)/sqrt(2)
    let mut expect_amps = vec![Complex64::ZERO; 8];
    expect_amps[0b000] = re(1.0);
    expect_amps[0b011] = re(1.0);
    expect_amps[0b100] = re(1.0);
    expect_amps[0b111] = re(1.0);
    let expect = PureState::new(vec![2, 2, 2], expect_amps).unwrap();
    out.push(fidelity_check(
        "superposition equals |+> x Bell",
        s.fidelity(&expect).unwrap(),
        1.0 - 1e-10,
    ));

    let cut1 = Bipartition::split(3, &[0]).unwrap();
    let cut2 = Bipartition::split(3, &[1]).unwrap();
    let cut3 = Bipartition::split(3, &[2]).unwrap();
    let r1 = schmidt_rank(&s, &cut1, tol).unwrap();
    let r2 = schmidt_rank(&s, &cut2, tol).unwrap();
    let r3 = schmidt_rank(&s, &cut3, tol).unwrap();
    out.push(check(
        "ranks after superposition are (1, 2, 2)",
        r1 == 1 && r2 == 2 && r3 == 2,
        format!("got ({r1}, {r2}, {r3})"),
    ));

    let cls = classify(&s, tol).unwrap();
    out.push(class_check(
        "superposition is biseparable, not GME",
        &cls.class,
        StateClass::BiseparableNotGme,
    ));
    out.push(check(
        "witness is the first-party cut",
        cls.witness == vec![cut1],
        format!("witness {:?}", cls.witness.iter().map(|b| b.to_string()).collect::<Vec<_>>()),
    ));
    out
}

fn run_example4(tol: f64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let psi3 = psi3();
    let profile = rank_profile(&psi3, tol).unwrap();
    out.push(check(
        "base state has every rank 2",
        profile.r1_min == 2 && profile.r1_max == 2,
        format!("r1_min {}, r1_max {}", profile.r1_min, profile.r1_max),
    ));
    out.push(class_check(
        "base state is GME",
        &classify(&psi3, tol).unwrap().class,
        StateClass::Gme,
    ));

    let p000 = ProductState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
    let plan = SuperpositionPlan::new(
        re(2.0 * 2f64.sqrt() / 3.0),
        vec![(re(1.0 / 3.0), p000)],
    )
    .unwrap();
    let v = verify_plan(&psi3, &plan, tol).unwrap();
    out.push(class_check(
        "superposition with |000> is a full product",
        &v.classification.class,
        StateClass::FullySeparableProduct,
    ));

    let plus = vec![re(1.0), re(1.0)];
    let expect = ProductState::new(vec![plus.clone(), b_vector(), plus])
        .unwrap()
        .to_pure();
    out.push(fidelity_check(
        "superposition equals |+>|b>|+>",
        v.superposed.fidelity(&expect).unwrap(),
        1.0 - 1e-10,
    ));
    out
}

fn run_example5(tol: f64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let psi = example5_state();
    let profile = rank_profile(&psi, tol).unwrap();
    out.push(check(
        "state has Schmidt rank 3",
        profile.r1_max == 3,
        format!("r1_max {}", profile.r1_max),
    ));
    let cert = certify(&psi, tol).unwrap();
    out.push(check(
        "inseparability budget is 1",
        cert.insep_budget == 1,
        format!("insep_budget {}", cert.insep_budget),
    ));

    // Explicit two-term plan with exact closed-form weights.
    let s2 = 2f64.sqrt();
    let s65 = 65f64.sqrt();
    let p1 = ProductState::new(vec![
        vec![re(-1.0), re(2.0), re(0.0)],
        vec![re(4.0), re(1.0), re(0.0)],
    ])
    .unwrap();
    // alpha1 = (-|0> + 8|1>)/sqrt(65)
    let p2 = ProductState::new(vec![
        vec![re(-1.0 / s65), re(8.0 / s65), re(2.0)],
        vec![re(4.0 / s2), re(4.0 / s2), re(-(5f64.sqrt()))],
    ])
    .unwrap();
    let lambda = (149.0f64 / (178.0 * 78.0)).sqrt();
    let mu1 = (85.0f64 / (178.0 * 78.0)).sqrt();
    let mu2 = (175.0f64 / 178.0).sqrt();
    let plan =
        SuperpositionPlan::new(re(lambda), vec![(re(mu1), p1), (re(mu2), p2)]).unwrap();
    let v = verify_plan(&psi, &plan, tol).unwrap();

    out.push(check(
        "explicit plan output has rank 1",
        rank_profile(&v.superposed, tol).unwrap().r1_max == 1,
        format!(
            "r1_max {}",
            rank_profile(&v.superposed, tol).unwrap().r1_max
        ),
    ));
    out.push(class_check(
        "explicit plan output classifies separable",
        &v.classification.class,
        StateClass::Separable,
    ));

    // (5 alpha1 + 8|2>)/sqrt(89) ⊗ (sqrt(5)|+> - |2>)/sqrt(6)
    let left = vec![re(-5.0 / s65), re(40.0 / s65), re(8.0)];
    let right = vec![re(5f64.sqrt() / s2), re(5f64.sqrt() / s2), re(-1.0)];
    let expect = ProductState::new(vec![left, right]).unwrap().to_pure();
    out.push(fidelity_check(
        "explicit plan output matches stated factors",
        v.superposed.fidelity(&expect).unwrap(),
        1.0 - 1e-10,
    ));
    out
}
