//! The network document format: versioned JSON with exact rational amounts
//! encoded as strings (`"3"`, `"2/7"`, or exact decimals like `"0.25"`).
//! Parsing never passes an amount through floating point, and emitting the
//! canonical form round-trips losslessly.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::network::{
    BankId, BankruptcyCosts, FinancialNetwork, NetworkError, RawNetwork,
};
use crate::rational::{format_rational, parse_rational, Amount};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub version: u32,
    pub banks: Vec<BankEntry>,
    pub debts: Vec<DebtEntry>,
    pub costs: CostsEntry,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BankEntry {
    pub id: u32,
    pub p: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_liability: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DebtEntry {
    pub debtor: u32,
    pub creditor: u32,
    pub amount: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostsEntry {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocumentError {
    Json(String),
    UnknownField { path: String },
    UnsupportedVersion { got: u32 },
    BadAmount { field: String, text: String },
    BankIds { message: String },
    BadCosts { message: String },
    Network(Vec<NetworkError>),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Json(msg) => write!(f, "malformed document: {msg}"),
            DocumentError::UnknownField { path } => write!(f, "unknown field {path}"),
            DocumentError::UnsupportedVersion { got } => {
                write!(f, "unsupported format version {got} (expected {FORMAT_VERSION})")
            }
            DocumentError::BadAmount { field, text } => {
                write!(f, "bad amount in {field}: {text:?}")
            }
            DocumentError::BankIds { message } => write!(f, "bad bank list: {message}"),
            DocumentError::BadCosts { message } => write!(f, "bad cost spec: {message}"),
            DocumentError::Network(errors) => {
                let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
                write!(f, "invalid network: {}", msgs.join("; "))
            }
        }
    }
}

impl std::error::Error for DocumentError {}

/// Parses and validates a document in strict mode (unknown fields rejected).
pub fn parse_network(text: &str) -> Result<FinancialNetwork, DocumentError> {
    parse_network_with(text, true)
}

pub fn parse_network_with(text: &str, strict: bool) -> Result<FinancialNetwork, DocumentError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    if strict {
        check_known_fields(&value)?;
    }
    let doc: NetworkDocument =
        serde_json::from_value(value).map_err(|e| DocumentError::Json(e.to_string()))?;
    network_from_document(&doc)
}

fn check_known_fields(value: &serde_json::Value) -> Result<(), DocumentError> {
    let unknown = |path: String| Err(DocumentError::UnknownField { path });
    let check = |obj: &serde_json::Value, allowed: &[&str], path: &str| -> Result<(), DocumentError> {
        if let Some(map) = obj.as_object() {
            for key in map.keys() {
                if !allowed.contains(&key.as_str()) {
                    return unknown(format!("{path}.{key}"));
                }
            }
        }
        Ok(())
    };
    check(value, &["version", "banks", "debts", "costs"], "$")?;
    if let Some(banks) = value.get("banks").and_then(|v| v.as_array()) {
        for (k, bank) in banks.iter().enumerate() {
            check(bank, &["id", "p", "ext_liability"], &format!("$.banks[{k}]"))?;
        }
    }
    if let Some(debts) = value.get("debts").and_then(|v| v.as_array()) {
        for (k, debt) in debts.iter().enumerate() {
            check(debt, &["debtor", "creditor", "amount"], &format!("$.debts[{k}]"))?;
        }
    }
    if let Some(costs) = value.get("costs") {
        check(costs, &["kind", "a", "b"], "$.costs")?;
    }
    Ok(())
}

pub fn network_from_document(doc: &NetworkDocument) -> Result<FinancialNetwork, DocumentError> {
    if doc.version != FORMAT_VERSION {
        return Err(DocumentError::UnsupportedVersion { got: doc.version });
    }
    let n = doc.banks.len();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    for bank in &doc.banks {
        if !seen.insert(bank.id) {
            return Err(DocumentError::BankIds { message: format!("duplicate bank id {}", bank.id) });
        }
        if bank.id < 1 || bank.id as usize > n {
            return Err(DocumentError::BankIds {
                message: format!("bank id {} outside 1..={n}", bank.id),
            });
        }
    }
    let amount = |field: String, text: &str| -> Result<Amount, DocumentError> {
        let r = parse_rational(text)
            .map_err(|_| DocumentError::BadAmount { field: field.clone(), text: text.to_string() })?;
        Amount::new(r).map_err(|_| DocumentError::BadAmount { field, text: text.to_string() })
    };
    let mut portfolios = vec![Amount::zero(); n];
    let mut ext_liabilities = vec![Amount::zero(); n];
    for bank in &doc.banks {
        let idx = (bank.id - 1) as usize;
        portfolios[idx] = amount(format!("banks[{}].p", bank.id), &bank.p)?;
        if let Some(ext) = &bank.ext_liability {
            ext_liabilities[idx] = amount(format!("banks[{}].ext_liability", bank.id), ext)?;
        }
    }
    let mut debts = Vec::with_capacity(doc.debts.len());
    for (k, debt) in doc.debts.iter().enumerate() {
        let a = amount(format!("debts[{k}].amount"), &debt.amount)?;
        debts.push((BankId(debt.debtor), BankId(debt.creditor), a));
    }
    let costs = match doc.costs.kind.as_str() {
        "full" => {
            if doc.costs.a.is_some() || doc.costs.b.is_some() {
                return Err(DocumentError::BadCosts {
                    message: "full costs take no parameters".to_string(),
                });
            }
            BankruptcyCosts::Full
        }
        "canonical" => {
            let a_text = doc.costs.a.as_deref().ok_or(DocumentError::BadCosts {
                message: "canonical costs need the share `a`".to_string(),
            })?;
            let share = parse_rational(a_text).map_err(|_| DocumentError::BadAmount {
                field: "costs.a".to_string(),
                text: a_text.to_string(),
            })?;
            let fixed = match doc.costs.b.as_deref() {
                Some(b_text) => amount("costs.b".to_string(), b_text)?,
                None => Amount::zero(),
            };
            BankruptcyCosts::canonical(share, fixed)
        }
        other => {
            return Err(DocumentError::BadCosts { message: format!("unknown kind {other:?}") })
        }
    };
    FinancialNetwork::validate(RawNetwork {
        bank_count: n,
        portfolios,
        ext_liabilities,
        debts,
        costs,
    })
    .map_err(DocumentError::Network)
}

pub fn document_from_network(net: &FinancialNetwork) -> NetworkDocument {
    let banks = net
        .bank_ids()
        .map(|b| BankEntry {
            id: b.0,
            p: format_rational(net.portfolio(b).ratio()),
            ext_liability: if net.ext_liability(b).is_zero() {
                None
            } else {
                Some(format_rational(net.ext_liability(b).ratio()))
            },
        })
        .collect();
    let debts = net
        .edges()
        .map(|(d, c, a)| DebtEntry {
            debtor: d.0,
            creditor: c.0,
            amount: format_rational(a.ratio()),
        })
        .collect();
    let costs = match net.costs() {
        BankruptcyCosts::Full => CostsEntry { kind: "full".to_string(), a: None, b: None },
        BankruptcyCosts::Canonical { share, fixed } => CostsEntry {
            kind: "canonical".to_string(),
            a: Some(format_rational(share)),
            b: Some(format_rational(fixed.ratio())),
        },
    };
    NetworkDocument { version: FORMAT_VERSION, banks, debts, costs }
}

/// Canonical text form of a network.
pub fn emit_network(net: &FinancialNetwork) -> String {
    let mut out = serde_json::to_string_pretty(&document_from_network(net))
        .expect("document serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_amount;
    use crate::testnets;

    const FIGURE1: &str = r#"{
        "version": 1,
        "banks": [
            {"id": 1, "p": "1"},
            {"id": 2, "p": "0"},
            {"id": 3, "p": "0"}
        ],
        "debts": [
            {"debtor": 1, "creditor": 2, "amount": "1"},
            {"debtor": 2, "creditor": 1, "amount": "1"},
            {"debtor": 2, "creditor": 3, "amount": "1"},
            {"debtor": 3, "creditor": 2, "amount": "1"}
        ],
        "costs": {"kind": "canonical", "a": "1/2", "b": "0"}
    }"#;

    #[test]
    fn parses_the_figure1_document() {
        let net = parse_network(FIGURE1).unwrap();
        assert_eq!(net, testnets::figure1());
    }

    #[test]
    fn fractional_and_decimal_amounts_are_exact() {
        let doc = r#"{
            "version": 1,
            "banks": [{"id": 1, "p": "2/7"}, {"id": 2, "p": "0.25"}],
            "debts": [{"debtor": 1, "creditor": 2, "amount": "0.5"}],
            "costs": {"kind": "full"}
        }"#;
        let net = parse_network(doc).unwrap();
        assert_eq!(net.portfolio(BankId(1)), &parse_amount("2/7").unwrap());
        assert_eq!(net.portfolio(BankId(2)), &parse_amount("1/4").unwrap());
        assert_eq!(net.debt_between(BankId(1), BankId(2)), Some(&parse_amount("1/2").unwrap()));
    }

    #[test]
    fn negative_amount_rejected() {
        let doc = r#"{
            "version": 1,
            "banks": [{"id": 1, "p": "-1"}],
            "debts": [],
            "costs": {"kind": "full"}
        }"#;
        assert!(matches!(parse_network(doc), Err(DocumentError::BadAmount { .. })));
    }

    #[test]
    fn unknown_fields_rejected_in_strict_mode_only() {
        let doc = r#"{
            "version": 1,
            "banks": [{"id": 1, "p": "1", "note": "hello"}],
            "debts": [],
            "costs": {"kind": "full"}
        }"#;
        assert!(matches!(parse_network(doc), Err(DocumentError::UnknownField { .. })));
        assert!(parse_network_with(doc, false).is_ok());
    }

    #[test]
    fn version_and_cost_errors() {
        let v2 = r#"{"version": 2, "banks": [{"id":1,"p":"0"}], "debts": [], "costs": {"kind":"full"}}"#;
        assert!(matches!(parse_network(v2), Err(DocumentError::UnsupportedVersion { got: 2 })));
        let bad = r#"{"version": 1, "banks": [{"id":1,"p":"0"}], "debts": [], "costs": {"kind":"canonical"}}"#;
        assert!(matches!(parse_network(bad), Err(DocumentError::BadCosts { .. })));
    }

    #[test]
    fn duplicate_bank_ids_rejected() {
        let doc = r#"{
            "version": 1,
            "banks": [{"id": 1, "p": "0"}, {"id": 1, "p": "1"}],
            "debts": [],
            "costs": {"kind": "full"}
        }"#;
        assert!(matches!(parse_network(doc), Err(DocumentError::BankIds { .. })));
    }

    #[test]
    fn emit_parse_round_trip() {
        for net in [testnets::figure1(), testnets::figure4(), testnets::appendix_b1()] {
            let text = emit_network(&net);
            assert_eq!(parse_network(&text).unwrap(), net);
        }
    }

    #[test]
    fn round_trip_keeps_ext_liabilities() {
        let net = crate::network::NetworkBuilder::new(2)
            .portfolio(1, parse_amount("1/3").unwrap())
            .ext_liability(2, parse_amount("5/7").unwrap())
            .debt(1, 2, parse_amount("2").unwrap())
            .build()
            .unwrap();
        assert_eq!(parse_network(&emit_network(&net)).unwrap(), net);
    }
}
