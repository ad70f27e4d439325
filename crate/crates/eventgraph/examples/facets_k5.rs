//! Exact facet enumeration and orbit classification for small event graphs.

use std::time::Instant;

use eventgraph::{graphs, polytope};

fn main() -> Result<(), eventgraph::Error> {
    for code in ["C3", "C4", "C5", "K4", "K5"] {
        let g = graphs::parse_graph_code(code)?;
        let t = Instant::now();
        let h = polytope::facets(&polytope::vrep_event_polytope(&g)?)?;
        let classes = polytope::classify_facets(&h, &g)?;
        println!("{code}: {} facets, {} classes ({:.2?})", h.len(), classes.len(), t.elapsed());
        for cl in classes.iter().filter(|c| !c.trivial) {
            println!("  [{:>3}] {}", cl.members.len(), cl.representative.display(&g));
        }
    }
    Ok(())
}
