//! Prints constraints, slices and reports for a source file.

use chameleon_core::check::{analyze, Options};
use chameleon_core::diagnose::explain;

fn main() {
    let path = std::env::args().nth(1).expect("usage: dump FILE");
    let src = std::fs::read_to_string(path).expect("readable file");
    let analysis = match analyze(&src, Options::default()) {
        Ok(a) => a,
        Err(e) => {
            println!("{e}");
            return;
        }
    };
    for g in &analysis.groups {
        println!("== group {}", g.name());
        for c in &g.constraints {
            println!("  {c}  [{} / {}]", c.lhs_span, c.rhs_span);
        }
        let (Some(slice), Some(report)) = (g.slice(), g.report()) else { continue };
        println!("  mus {:?}", slice.mus);
        for &m in &slice.mus {
            println!("    #{m} {}", explain(&g.constraints[m]));
        }
        println!("  locations {}", report.error_locations.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
        println!("  relevant {:?}", report.relevant_types.iter().map(|t| format!("{} :: {}", t.name, t.ty)).collect::<Vec<_>>());
        for cand in &report.candidates {
            let types: Vec<String> = cand.possible_types.iter().map(|p| format!("{} @{}", p.printed, p.source_split)).collect();
            println!("  candidate {} {} {:?}", cand.name, cand.span, types);
            for step in &cand.steps {
                println!("    {}. #{} {} | {} / {}", step.index, step.constraint_id, step.explanation, step.type_a, step.type_b);
            }
        }
    }
}
