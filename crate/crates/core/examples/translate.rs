//! Translates each line of standard input (TeX math) to MathML.

use std::io::{self, BufRead, Write};

fn main() -> io::Result<()> {
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    for line in stdin.lock().lines() {
        let tr = castml_core::math::translate_span(&line?, false);
        writeln!(out, "{}", tr.fragment.xml)?;
    }
    Ok(())
}
