//! DOT export of a network, optionally annotated with an equilibrium
//! (defaulters filled red, values shown) and a bailout policy (bailed banks
//! double-circled with their injections). Node and edge order is
//! deterministic.

use std::fmt::Write;

use crate::bailout::BailoutPolicy;
use crate::clearing::Equilibrium;
use crate::network::{BankId, FinancialNetwork};
use crate::rational::format_rational;

pub fn export_dot(
    net: &FinancialNetwork,
    equilibrium: Option<&Equilibrium>,
    policy: Option<&BailoutPolicy>,
) -> String {
    let mut out = String::from("digraph network {\n");
    out.push_str("    rankdir=LR;\n    node [shape=circle];\n");
    let injection = |bank: BankId| {
        policy.and_then(|p| {
            p.steps
                .iter()
                .find(|(b, _)| *b == bank)
                .map(|(_, a)| a.clone())
        })
    };
    for bank in net.bank_ids() {
        let mut label = format!("{}\\np={}", bank, format_rational(net.portfolio(bank).ratio()));
        let mut attrs = String::new();
        if let Some(eq) = equilibrium {
            write!(label, "\\nV={}", format_rational(eq.value(bank).ratio())).unwrap();
            if !eq.is_solvent(bank) {
                attrs.push_str(", style=filled, fillcolor=lightcoral");
            }
        }
        if let Some(amount) = injection(bank) {
            write!(label, "\\n+{}", format_rational(amount.ratio())).unwrap();
            attrs.push_str(", shape=doublecircle");
        }
        writeln!(out, "    b{} [label=\"{}\"{}];", bank.0, label, attrs).unwrap();
    }
    let mut outside_used = false;
    for bank in net.bank_ids() {
        if !net.ext_liability(bank).is_zero() {
            outside_used = true;
        }
    }
    if outside_used {
        out.push_str("    b0 [label=\"outside\", shape=box];\n");
    }
    for (debtor, creditor, face) in net.edges() {
        let mut label = format_rational(face.ratio());
        if let Some(eq) = equilibrium {
            let paid = eq.payment(debtor, creditor);
            if &paid != face {
                label = format!("{}/{}", format_rational(paid.ratio()), label);
            }
        }
        writeln!(out, "    b{} -> b{} [label=\"{}\"];", debtor.0, creditor.0, label).unwrap();
    }
    if outside_used {
        for bank in net.bank_ids() {
            let ext = net.ext_liability(bank);
            if !ext.is_zero() {
                writeln!(
                    out,
                    "    b{} -> b0 [label=\"{}\", style=dashed];",
                    bank.0,
                    format_rational(ext.ratio())
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bailout::{solve_exact, SolverParams};
    use crate::clearing::worst_equilibrium;
    use crate::network::NetworkBuilder;
    use crate::rational::Amount;
    use crate::testnets;

    #[test]
    fn marks_defaulters_in_the_worst_equilibrium() {
        let net = testnets::figure1();
        let eq = worst_equilibrium(&net).unwrap();
        let dot = export_dot(&net, Some(&eq), None);
        assert_eq!(dot.matches("lightcoral").count(), 2);
        assert!(dot.contains("V=-10/7"));
        assert!(dot.contains("[label=\"2/7/1\"]")); // partial payment over face
    }

    #[test]
    fn empty_network_is_header_only() {
        let dot = export_dot(
            &NetworkBuilder::new(1).portfolio(1, Amount::from_int(5)).build().unwrap(),
            None,
            None,
        );
        assert!(dot.starts_with("digraph network {"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn annotates_bailed_banks() {
        let net = testnets::appendix_b1();
        let sol = solve_exact(&net, &SolverParams::default()).unwrap();
        let dot = export_dot(&net, None, Some(&sol.policy));
        assert!(dot.contains("+3/4"));
        assert!(dot.contains("doublecircle"));
    }

    #[test]
    fn output_is_deterministic_and_shows_the_outside_sector() {
        let net = testnets::figure4();
        assert_eq!(export_dot(&net, None, None), export_dot(&net, None, None));
        // the reduced network owes 1/4 to the outside sector
        let solvent = [crate::network::BankId(1), crate::network::BankId(2), crate::network::BankId(3)]
            .into_iter()
            .collect();
        let reduced = net
            .reduce_given_solvent(&solvent, &net.imbalance_injections())
            .unwrap()
            .network;
        let dot = export_dot(&reduced, None, None);
        assert!(dot.contains("b0 [label=\"outside\""));
        assert!(dot.contains("b1 -> b0 [label=\"1/4\""));
    }
}
