use std::fmt::Write;

use lpp_core::rational::{format_decimal, format_rational};
use lpp_core::Rational;

/// Renders rationals exactly, optionally followed by a labeled decimal
/// approximation.
#[derive(Debug, Clone, Copy)]
pub struct Numbers {
    pub decimals: Option<usize>,
}

impl Numbers {
    pub fn show(&self, value: &Rational) -> String {
        let exact = format_rational(value);
        match self.decimals {
            Some(k) if !value.is_integer() => format!("{exact} (~{})", format_decimal(value, k)),
            _ => exact,
        }
    }

    pub fn footer(&self) -> Option<String> {
        self.decimals
            .map(|k| format!("values in parentheses are approximations to {k} decimal places"))
    }
}

/// A plain left-aligned text table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut width = vec![0; cols];
        for line in std::iter::once(&self.header).chain(&self.rows) {
            for (k, cell) in line.iter().enumerate().take(cols) {
                width[k] = width[k].max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut emit = |line: &[String]| {
            let cells: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{c:<w$}", w = width[k]))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        };
        emit(&self.header);
        emit(&width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>());
        for row in &self.rows {
            emit(row);
        }
        out
    }
}
