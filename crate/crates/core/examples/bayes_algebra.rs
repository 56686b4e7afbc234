//! Perturbation, powering and the clr isometry on two truncated normals.

use density_nw::prelude::*;

fn main() -> Result<()> {
    let grid = Grid::new(-1.0, 1.0, 201)?;
    let f = truncated_normal_density(-0.3, 0.4, grid)?;
    let g = truncated_normal_density(0.4, 0.6, grid)?;

    let sum = perturb(&f, &g)?;
    let back = perturb_sub(&sum, &g)?;
    println!("(f + g) - g == f up to {:.2e}", back.max_abs_diff(&f)?);

    // a geodesic between f and g: f + t * (g - f)
    let diff = perturb_sub(&g, &f)?;
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let h = perturb(&f, &power(t, &diff)?)?;
        println!(
            "t = {t:.2}: |h - f|_B = {:.4}, |h - g|_B = {:.4}",
            bayes_dist(&h, &f)?,
            bayes_dist(&h, &g)?
        );
    }

    let c = clr(&f);
    println!("clr(f) integrates to {:.2e}", c.integral());
    println!("|f|_B = {:.4}, <f, g>_B = {:.4}", bayes_norm(&f), bayes_inner(&f, &g)?);
    Ok(())
}
