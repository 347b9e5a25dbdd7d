//! Grid scan: every consistent parameter point lies on one of the two
//! saturation conditions.

use spinmus::recurrence::{proposition1_scan, ParamGrid};
use spinmus::spin::TwoJ;

fn main() -> spinmus::Result<()> {
    let grid = ParamGrid::default();
    for two_j in [2, 3, 4] {
        let rows = proposition1_scan(TwoJ::new(two_j)?, &grid)?;
        let consistent: Vec<_> = rows.iter().filter(|r| r.consistent).collect();
        let contradictions = rows.iter().filter(|r| r.contradicts_proposition()).count();
        println!(
            "2j = {two_j}: {} points, {} consistent, {} off-condition",
            rows.len(),
            consistent.len(),
            contradictions
        );
        for r in consistent {
            println!(
                "    s = {:+.1}, t = {:+.1}, u = {:+.0}, v = {:+.0}  {:?}  gap = {:.1e}",
                r.s,
                r.t,
                r.u,
                r.v,
                r.on_condition,
                r.gap.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
