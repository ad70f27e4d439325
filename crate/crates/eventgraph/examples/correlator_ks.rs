//! Event-graph facets rewritten as correlator inequalities.

use eventgraph::polytope::{self, FamilyTag};
use eventgraph::{graphs, witnesses};

fn main() -> Result<(), eventgraph::Error> {
    for tag in ["cn:3", "cn:4", "hn:4", "kcbs_w6"] {
        let (g, ineq) = polytope::inequality_family(&FamilyTag::parse(tag)?)?;
        let ci = witnesses::to_correlator(&ineq);
        println!("{tag}: {}", ci.display(&g));
        println!("  valid over +-1 assignments: {}", witnesses::correlator_valid(&ci, &g)?);
    }
    let g = graphs::complete(4)?;
    let h = polytope::facets(&polytope::vrep_event_polytope(&g)?)?;
    let all = h.nontrivial().all(|f| witnesses::correlator_valid(&witnesses::to_correlator(f), &g).unwrap_or(false));
    println!("all nontrivial K4 facets give valid correlator inequalities: {all}");
    Ok(())
}
