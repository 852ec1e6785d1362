//! Boolean functions over up to four variables, stored as truth-table bitmasks.
//!
//! Bit-order convention (fixed project-wide): variable 1 is the most
//! significant bit of the assignment index. Bit `k` of the mask holds the
//! function value on the assignment whose binary encoding is `k`.

use std::fmt;

use thiserror::Error;

/// Largest supported arity.
pub const MAX_ARITY: u8 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolFnError {
    #[error("arity {0} outside supported range 1..={MAX_ARITY}")]
    ArityOutOfRange(u8),
    #[error("assignment length {got} does not match arity {arity}")]
    AssignmentLength { arity: u8, got: usize },
    #[error("variable index {var} out of range for arity {arity}")]
    VariableOutOfRange { arity: u8, var: u8 },
    #[error("truth-table mask {bits:#x} uses bits above 2^{arity}")]
    MaskTooWide { arity: u8, bits: u16 },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
}

/// A Boolean function `B^arity -> B` in canonical truth-table form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    arity: u8,
    bits: u16,
}

fn check_arity(arity: u8) -> Result<(), BoolFnError> {
    if arity == 0 || arity > MAX_ARITY {
        return Err(BoolFnError::ArityOutOfRange(arity));
    }
    Ok(())
}

impl TruthTable {
    pub fn new(arity: u8, bits: u16) -> Result<Self, BoolFnError> {
        check_arity(arity)?;
        let width = 1u32 << arity;
        if width < 16 && bits >> width != 0 {
            return Err(BoolFnError::MaskTooWide { arity, bits });
        }
        Ok(Self { arity, bits })
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    /// Number of assignments, `2^arity`.
    pub fn table_len(&self) -> u16 {
        1 << self.arity
    }

    /// The n-variable XOR (parity) function.
    pub fn parity(arity: u8) -> Result<Self, BoolFnError> {
        check_arity(arity)?;
        let mut bits = 0u16;
        for k in 0..(1u16 << arity) {
            if k.count_ones() % 2 == 1 {
                bits |= 1 << k;
            }
        }
        Ok(Self { arity, bits })
    }

    pub fn constant(arity: u8, value: bool) -> Result<Self, BoolFnError> {
        check_arity(arity)?;
        let width = 1u32 << arity;
        let bits = if value {
            (((1u32 << width) - 1) & 0xffff) as u16
        } else {
            0
        };
        Ok(Self { arity, bits })
    }

    /// Value on the assignment with binary encoding `k` (variable 1 = MSB).
    pub fn evaluate_index(&self, k: u16) -> bool {
        debug_assert!(k < self.table_len());
        (self.bits >> k) & 1 == 1
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, BoolFnError> {
        if assignment.len() != self.arity as usize {
            return Err(BoolFnError::AssignmentLength {
                arity: self.arity,
                got: assignment.len(),
            });
        }
        let mut k = 0u16;
        for &b in assignment {
            k = (k << 1) | b as u16;
        }
        Ok(self.evaluate_index(k))
    }

    /// Bit position in the assignment index occupied by variable `var`
    /// (0-based; variable 0 is the most significant bit).
    fn index_bit(&self, var: u8) -> u16 {
        1 << (self.arity - 1 - var)
    }

    /// Does the function value depend on variable `var` anywhere?
    pub fn is_essential(&self, var: u8) -> Result<bool, BoolFnError> {
        if var >= self.arity {
            return Err(BoolFnError::VariableOutOfRange {
                arity: self.arity,
                var,
            });
        }
        let flip = self.index_bit(var);
        for k in 0..self.table_len() {
            if self.evaluate_index(k) != self.evaluate_index(k ^ flip) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn all_essential(&self) -> bool {
        (0..self.arity).all(|v| self.is_essential(v).unwrap())
    }

    /// Complement of the function: every output bit flipped.
    pub fn negate(&self) -> Self {
        let width = 1u32 << self.arity;
        let mask = (((1u32 << width) - 1) & 0xffff) as u16;
        Self {
            arity: self.arity,
            bits: self.bits ^ mask,
        }
    }

    /// Substitute `x_var -> !x_var`: permutes table entries by flipping one
    /// assignment bit.
    pub fn negate_variable(&self, var: u8) -> Result<Self, BoolFnError> {
        if var >= self.arity {
            return Err(BoolFnError::VariableOutOfRange {
                arity: self.arity,
                var,
            });
        }
        let flip = self.index_bit(var);
        let mut bits = 0u16;
        for k in 0..self.table_len() {
            if self.evaluate_index(k ^ flip) {
                bits |= 1 << k;
            }
        }
        Ok(Self {
            arity: self.arity,
            bits,
        })
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(arity={}, bits={:#06x})", self.arity, self.bits)
    }
}

/// All truth tables of arity `n` in which every variable is essential,
/// in ascending bitmask order.
pub fn enumerate_essential(n: u8) -> Result<Vec<TruthTable>, BoolFnError> {
    check_arity(n)?;
    let width = 1u32 << n;
    let count = 1u32 << width;
    let mut out = Vec::new();
    for bits in 0..count {
        let tt = TruthTable::new(n, bits as u16)?;
        if tt.all_essential() {
            out.push(tt);
        }
    }
    Ok(out)
}

/// Standard variable names for the question side (x, y, z, w).
pub fn question_vars(n: u8) -> &'static [&'static str] {
    &["x", "y", "z", "w"][..n as usize]
}

/// Standard variable names for the answer side (a, b, c, d).
pub fn answer_vars(n: u8) -> &'static [&'static str] {
    &["a", "b", "c", "d"][..n as usize]
}

// Expression grammar (precedence NOT > AND > XOR > OR):
//   expr  := term ("+" term)*
//   term  := xfact ("^" xfact)*
//   xfact := factor ("*" factor)*
//   factor := "!" factor | "(" expr ")" | ident
struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn arity(&self) -> u8 {
        self.vars.len() as u8
    }

    // Truth table of the single variable `var`.
    fn projection(&self, var: u8) -> TruthTable {
        let n = self.arity();
        let mut bits = 0u16;
        for k in 0..(1u16 << n) {
            if k & (1 << (n - 1 - var)) != 0 {
                bits |= 1 << k;
            }
        }
        TruthTable::new(n, bits).unwrap()
    }

    fn factor(&mut self) -> Result<TruthTable, BoolFnError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(self.factor()?.negate())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(BoolFnError::Syntax {
                        pos: self.pos,
                        msg: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.vars.iter().position(|&v| v == name) {
                    Some(i) => Ok(self.projection(i as u8)),
                    None => Err(BoolFnError::UnknownVariable {
                        pos: start,
                        name: name.to_string(),
                    }),
                }
            }
            _ => Err(BoolFnError::Syntax {
                pos: self.pos,
                msg: "expected variable, `!` or `(`".into(),
            }),
        }
    }

    fn xfact(&mut self) -> Result<TruthTable, BoolFnError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            acc = TruthTable::new(acc.arity(), acc.bits() & rhs.bits()).unwrap();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<TruthTable, BoolFnError> {
        let mut acc = self.xfact()?;
        while self.eat(b'^') {
            let rhs = self.xfact()?;
            acc = TruthTable::new(acc.arity(), acc.bits() ^ rhs.bits()).unwrap();
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<TruthTable, BoolFnError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let rhs = self.term()?;
            acc = TruthTable::new(acc.arity(), acc.bits() | rhs.bits()).unwrap();
        }
        Ok(acc)
    }
}

/// Parse an expression over the given variable names (order fixes the
/// variable-to-bit mapping; first name = variable 1 = MSB).
pub fn parse_expr(text: &str, vars: &[&str]) -> Result<TruthTable, BoolFnError> {
    check_arity(vars.len() as u8)?;
    let mut p = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        vars,
    };
    let tt = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(BoolFnError::Syntax {
            pos: p.pos,
            msg: "trailing input".into(),
        });
    }
    Ok(tt)
}

/// Canonical sum-of-products rendering; `parse_expr(format_expr(tt)) == tt`.
pub fn format_expr(tt: &TruthTable, vars: &[&str]) -> String {
    assert_eq!(vars.len(), tt.arity() as usize);
    if tt.bits() == 0 {
        // No minterms; a contradiction product stays inside the grammar.
        return format!("{v}*!{v}", v = vars[0]);
    }
    let n = tt.arity();
    let mut terms = Vec::new();
    for k in 0..tt.table_len() {
        if !tt.evaluate_index(k) {
            continue;
        }
        let mut factors = Vec::with_capacity(n as usize);
        for (i, name) in vars.iter().enumerate() {
            if k & (1 << (n as usize - 1 - i)) != 0 {
                factors.push((*name).to_string());
            } else {
                factors.push(format!("!{name}"));
            }
        }
        terms.push(factors.join("*"));
    }
    terms.join(" + ")
}
