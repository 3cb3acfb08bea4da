//! ASCII drawing of the discrimination circuit.
//!
//! One wire per qubit, labelled `q1..qn` top to bottom (qubit 1 is the most
//! significant index bit). Every wire gets an `H`, all wires enter a shared
//! `U` box, and only wire `L` gets the second `H` and the meter, whose result
//! drops onto the classical wire `c`.

use crate::error::{Error, Result};

/// Widest circuit `render_circuit_ascii` will draw.
pub const MAX_RENDER_QUBITS: usize = 16;

const H_GATE: &str = "--[H]--";
const BOX_EDGE: &str = "+-----+";
const BOX_SIDE: &str = "|     |";
const BOX_LABEL: &str = "|  U  |";
const METER: &str = "[M]";

pub fn render_circuit_ascii(n: usize, l: usize) -> Result<String> {
    if !(1..=MAX_RENDER_QUBITS).contains(&n) {
        return Err(Error::domain(format!(
            "can only draw 1..={MAX_RENDER_QUBITS} qubits, got {n}"
        )));
    }
    if !(1..=n).contains(&l) {
        return Err(Error::domain(format!("qubit label {l} outside 1..={n}")));
    }

    let label_width = format!("q{n}: ").len();
    let blank = |w: usize| " ".repeat(w);
    let wire = |w: usize| "-".repeat(w);

    // Rows: top edge, wire 1, gap, wire 2, ..., wire n, bottom edge, classical.
    let box_rows = 2 * n - 1;
    let label_row = box_rows / 2;
    let mut lines = Vec::with_capacity(box_rows + 3);

    // Column under the meter: the classical drop runs from wire L downwards.
    let meter_row = 2 * (l - 1);
    let meter_column = |row: usize, on_wire: bool| -> String {
        if row <= meter_row {
            return if on_wire { wire(3) } else { blank(3) };
        }
        if on_wire {
            "-|-".to_string()
        } else {
            " | ".to_string()
        }
    };

    lines.push(format!("{}{BOX_EDGE}", blank(label_width + H_GATE.len())));
    for row in 0..box_rows {
        let side = if row == label_row {
            BOX_LABEL
        } else {
            BOX_SIDE
        };
        if row % 2 == 0 {
            let q = row / 2 + 1;
            let label = format!("{:<label_width$}", format!("q{q}: "));
            let tail = if q == l {
                format!("{H_GATE}{METER}--")
            } else {
                format!("{}{}--", wire(H_GATE.len()), meter_column(row, true))
            };
            lines.push(format!("{label}{H_GATE}{side}{tail}"));
        } else {
            lines.push(format!(
                "{}{side}{}{}",
                blank(label_width + H_GATE.len()),
                blank(H_GATE.len()),
                meter_column(row, false)
            ));
        }
    }
    lines.push(format!(
        "{}{}{}{}",
        blank(label_width + H_GATE.len()),
        BOX_EDGE,
        blank(H_GATE.len()),
        meter_column(box_rows, false)
    ));
    let classical_run = H_GATE.len() + BOX_EDGE.len() + H_GATE.len();
    lines.push(format!(
        "{:<label_width$}{}=v===",
        "c: ",
        "=".repeat(classical_run)
    ));

    let mut out = String::new();
    for line in lines {
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}
