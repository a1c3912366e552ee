use super::{Circuit, CircuitError, Gate};
use crate::stab::Clifford;

pub(super) fn serialize(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    for (i, layer) in c.layers().iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        for g in layer {
            out.push_str(&g.to_string());
            out.push('\n');
        }
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        message: message.into(),
    }
}

fn qubit(tok: &str, line: usize) -> Result<usize, CircuitError> {
    tok.parse()
        .map_err(|_| err(line, format!("expected a qubit index, found {tok:?}")))
}

fn parse_gate(toks: &[&str], line: usize) -> Result<Gate, CircuitError> {
    let name = toks[0];
    let args = &toks[1..];
    let one = |f: fn(usize) -> Clifford| -> Result<Gate, CircuitError> {
        match args {
            [q] => Ok(Gate::Clifford(f(qubit(q, line)?))),
            _ => Err(err(line, format!("{name} takes one qubit"))),
        }
    };
    let two = |f: fn(usize, usize) -> Clifford| -> Result<Gate, CircuitError> {
        match args {
            [a, b] => Ok(Gate::Clifford(f(qubit(a, line)?, qubit(b, line)?))),
            _ => Err(err(line, format!("{name} takes two qubits"))),
        }
    };
    let measure = |z: bool| -> Result<Gate, CircuitError> {
        match args {
            [q, "->", label] => {
                let qubit = qubit(q, line)?;
                let label = label.to_string();
                Ok(if z {
                    Gate::MeasureZ { qubit, label }
                } else {
                    Gate::MeasureX { qubit, label }
                })
            }
            _ => Err(err(line, format!("expected \"{name} <q> -> <label>\""))),
        }
    };
    let cond = |x: bool| -> Result<Gate, CircuitError> {
        match args {
            [q, "if", expr] => {
                let qubit = qubit(q, line)?;
                let condition: Vec<String> = expr.split('^').map(str::to_owned).collect();
                if condition.iter().any(|l| !super::valid_label(l)) {
                    return Err(err(line, format!("malformed condition {expr:?}")));
                }
                Ok(if x {
                    Gate::CondX { qubit, condition }
                } else {
                    Gate::CondZ { qubit, condition }
                })
            }
            _ => Err(err(line, format!("expected \"{name} <q> if <label>[^<label>...]\""))),
        }
    };
    match name {
        "H" => one(Clifford::H),
        "S" => one(Clifford::S),
        "SDG" => one(Clifford::Sdg),
        "X" if args.len() > 1 => cond(true),
        "Z" if args.len() > 1 => cond(false),
        "X" => one(Clifford::X),
        "Z" => one(Clifford::Z),
        "CNOT" => two(Clifford::Cnot),
        "CZ" => two(Clifford::Cz),
        "MZ" => measure(true),
        "MX" => measure(false),
        _ => Err(err(line, format!("unknown gate {name:?}"))),
    }
}

pub(super) fn parse(src: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    // Gates of the layer being read, its per-qubit usage and new labels.
    let mut layer: Vec<Gate> = Vec::new();
    let mut used: Vec<bool> = Vec::new();
    let mut new_labels: Vec<String> = Vec::new();
    let mut separator_line = 0;
    let mut last_line = 0;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        let Some(c) = circuit.as_mut() else {
            match toks[..] {
                ["qubits", n] => {
                    let n: usize = n.parse().map_err(|_| err(line, format!("bad qubit count {n:?}")))?;
                    circuit = Some(Circuit::new(n));
                    used = vec![false; n];
                    continue;
                }
                _ => return Err(err(line, "expected header \"qubits <n>\"")),
            }
        };
        if toks == ["---"] {
            if layer.is_empty() {
                return Err(err(line, "empty layer"));
            }
            c.commit(std::mem::take(&mut layer), std::mem::take(&mut new_labels));
            used.iter_mut().for_each(|u| *u = false);
            separator_line = line;
            continue;
        }
        if toks[0] == "qubits" {
            return Err(err(line, "duplicate header"));
        }
        let g = parse_gate(&toks, line)?;
        c.check_gate(&g, &mut used, c.depth(), &mut new_labels)
            .map_err(|e| err(line, e.to_string()))?;
        layer.push(g);
    }
    let mut c = circuit.ok_or_else(|| err(last_line.max(1), "missing header \"qubits <n>\""))?;
    if layer.is_empty() {
        if separator_line > 0 {
            return Err(err(separator_line, "trailing separator without a layer"));
        }
    } else {
        c.commit(layer, new_labels);
    }
    Ok(c)
}
