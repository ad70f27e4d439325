//! Seesaw lower bounds for named inequalities at fixed dimension.

use eventgraph::optimize::{self, SeesawConfig};
use eventgraph::polytope::{self, FamilyTag};

fn main() -> Result<(), eventgraph::Error> {
    let rows = [("cn:3", 2), ("hn:4", 2), ("hn:4", 3), ("hn:5", 4), ("k5_class:5", 2), ("kcbs_w6", 2), ("kcbs_w6", 3)];
    println!("{:<12} {:>2} {:>10} {:>6}", "inequality", "d", "seesaw", "bound");
    for (tag, d) in rows {
        let (g, ineq) = polytope::inequality_family(&FamilyTag::parse(tag)?)?;
        let res = optimize::seesaw_linear(&g, &ineq, &SeesawConfig::with_d(d))?;
        println!("{tag:<12} {d:>2} {:>10.6} {:>6}", res.best, ineq.bound);
    }
    for n in 3..=8 {
        let r = optimize::cn_reference(n)?;
        println!("c{n}: reference states {:.10}, closed form {:.10}", r.value, r.closed_form);
    }
    Ok(())
}
