mod common;
use common::quarters;
use interclear::bailout::{solve_exact, SolverParams};
use interclear::document::emit_network;
use interclear::generate::{generate, GeneratorSpec, SplitMix64};
use interclear::network::{BankruptcyCosts, FinancialNetwork};
use interclear::rational::{Amount, Rational};
use interclear::structured::core_periphery_policy;

fn core_periphery_instance(rng: &mut SplitMix64, big: bool) -> FinancialNetwork {
    let n_core = if big { rng.range(2, 4) as usize } else { rng.range(2, 3) as usize };
    let n_periph = if big {
        rng.range(3, (40 / n_core as u64).saturating_sub(1).min(9))
    } else {
        rng.range(0, if n_core == 2 { 2 } else { 1 })
    } as usize;
    let d_core = quarters(rng, 2, 8);
    let d_out_q = rng.range(2, 8);
    let d_in_q = d_out_q + rng.range(1, 6);
    let p_periph = Amount::from_ratio((d_in_q - d_out_q) as i64, 4)
        + quarters(rng, 0, d_out_q - 1);
    let liability = Rational::from_integer(((n_core - 1) as u64).into()) * d_core.ratio()
        + Rational::from_integer((n_periph as u64).into())
            * Rational::new(d_out_q.into(), 4.into());
    let p_core = (0..n_core)
        .map(|_| {
            let target = Rational::new(rng.range(1, 12).into(), 4.into());
            Amount::pos_part(&(&liability - target))
        })
        .collect();
    generate(&GeneratorSpec::CorePeriphery {
        n_core,
        n_periph,
        d_core,
        d_in: Amount::from_ratio(d_in_q as i64, 4),
        d_out: Amount::from_ratio(d_out_q as i64, 4),
        p_core,
        p_periph,
    })
    .unwrap()
    .with_costs(BankruptcyCosts::Full)
}

#[test]
fn dump_cp_case1() {
    let mut rng = SplitMix64::new(0x5EED_0012);
    let _c0 = core_periphery_instance(&mut rng, false);
    let net = core_periphery_instance(&mut rng, true);
    eprintln!("{}", emit_network(&net));
    let policy = core_periphery_policy(&net).unwrap();
    eprintln!("structured: {:?} total {}", policy.steps, policy.total);
    let sol = solve_exact(&net, &SolverParams::default()).unwrap();
    eprintln!("exact: {:?} total {}", sol.policy.steps, sol.policy.total);
}
