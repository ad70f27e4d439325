//! Stable-set correspondence and the KCBS cross-section of the wheel `W6`.

use eventgraph::polytope::{self, FamilyTag};
use eventgraph::graphs;

fn main() -> Result<(), eventgraph::Error> {
    for code in ["K3", "C4", "C5"] {
        let h = graphs::parse_graph_code(code)?;
        println!(
            "{code}: STAB isomorphic = {}, alpha = {}",
            polytope::verify_stab_isomorphism(&h)?,
            polytope::independence_number(&h)
        );
    }
    let (w6, kcbs) = polytope::inequality_family(&FamilyTag::KcbsW6)?;
    println!("KCBS: {}", kcbs.display(&w6));
    let rim: Vec<(usize, usize)> = vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)];
    let section = polytope::cross_section(&w6, &rim, 0)?;
    let max = polytope::max_over(&kcbs, &section)?;
    println!("max over rim-exclusive section = {max} (alpha(C5) = {})", polytope::independence_number(&graphs::cycle(5)?));
    println!("facet of c(W6): {}", polytope::is_facet(&kcbs, &polytope::vrep_event_polytope(&w6)?)?);
    Ok(())
}
