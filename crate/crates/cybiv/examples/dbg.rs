use cybiv::sections::*;
use cybiv::threefold::ThreefoldSpec;

fn main() {
    let spec = ThreefoldSpec::new(3, -1);
    match module_presentation(spec, 8) {
        Ok(pres) => {
            println!("W3: {} generators, {} relations", pres.generators.len(), pres.relations.len());
            for g in &pres.generators {
                println!("  gen {} (grade {}): {:?}", g.label, g.grade, g.field.u_coeffs);
            }
            for r in &pres.relations {
                let terms: Vec<String> = r.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
                    .map(|(h, c)| format!("({})*{}", c, pres.generators[h].label)).collect();
                println!("  rel {} (grade {}): {}", r.label, r.grade, terms.join(" + "));
            }
        }
        Err(e) => println!("error: {e}"),
    }
}
