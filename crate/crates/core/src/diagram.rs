//! Plain-text lattice pictures of Mackey functors, largest subgroup on top.

use crate::group::GroupCtx;
use crate::mackey::MackeyFunctor;
use crate::matrix::IntMatrix;
use std::fmt::Write;

fn subgroup_name(ctx: &GroupCtx, h: usize) -> String {
    match ctx.pow(h) {
        1 => "e".into(),
        o => format!("C_{o}"),
    }
}

/// `[a b; c d]`
pub fn inline_matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> =
        (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

/// One line per level and per map, in invariant-factor coordinates.
pub fn diagram(m: &MackeyFunctor) -> String {
    let (s, _, _) = m.simplified();
    let ctx = s.ctx;
    let top = subgroup_name(&ctx, s.n());
    let names: Vec<String> = (0..=s.n()).map(|h| format!("{top}/{}", subgroup_name(&ctx, h))).collect();
    let width = names.iter().map(|x| x.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for h in (0..=s.n()).rev() {
        let g = &s.levels[h];
        let _ = write!(out, "{:<width$}  {g}", names[h]);
        if g.gens() > 0 && s.weyl[h] != IntMatrix::identity(g.gens()) {
            let _ = write!(out, "   γ {}", inline_matrix(&s.weyl[h]));
        }
        out.push('\n');
        if h > 0 {
            let _ = writeln!(out, "{:width$}    res ↓ {}", "", inline_matrix(&s.res[h - 1]));
            let _ = writeln!(out, "{:width$}    tr  ↑ {}", "", inline_matrix(&s.tr[h - 1]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::burnside;

    #[test]
    fn burnside_c2() {
        let d = diagram(&burnside(GroupCtx::new(2, 1).unwrap()));
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("C_2/C_2") && lines[0].ends_with("Z ⊕ Z"));
        assert!(lines[3].starts_with("C_2/e"));
    }
}
