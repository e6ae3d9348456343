//! GraphViz DOT export. Class labels go out as a numeric `color` attribute,
//! coordinate vectors as a quoted `coords` attribute.

use crate::graph::{CoordinateVector, Graph};
use crate::partition::EdgePartition;
use crate::psp::PartialStarProduct;

/// Renders a graph. `colors` adds `color=<class>` per covered edge,
/// `coords` adds `coords="(c1,...,ck)"` per vertex that has a vector.
pub fn graph_to_dot(
    g: &Graph,
    colors: Option<&EdgePartition>,
    coords: Option<&[Option<CoordinateVector>]>,
) -> String {
    let mut out = String::from("graph cartfact {\n");
    for v in g.vertices() {
        let attr = coords
            .and_then(|c| c[v].as_ref())
            .map(|vec| format!(" [coords=\"({})\"]", join(vec)))
            .unwrap_or_default();
        out.push_str(&format!("  {v}{attr};\n"));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let attr = colors
            .and_then(|p| p.label_of(e))
            .map(|c| format!(" [color={c}]"))
            .unwrap_or_default();
        out.push_str(&format!("  {u} -- {v}{attr};\n"));
    }
    out.push_str("}\n");
    out
}

/// Renders a partial star product: primal edges solid, non-primal dashed,
/// both carrying their local class label.
pub fn psp_to_dot(g: &Graph, psp: &PartialStarProduct) -> String {
    let mut out = String::from("graph psp {\n");
    for &v in &psp.vertices {
        if v == psp.center {
            out.push_str(&format!("  {v} [shape=doublecircle];\n"));
        } else {
            out.push_str(&format!("  {v};\n"));
        }
    }
    for (style, edges) in [("solid", &psp.primal_edges), ("dashed", &psp.non_primal_edges)] {
        for &e in edges.iter() {
            let (u, v) = g.edge(e);
            let class = psp.class_of(e).expect("psp edge has a class");
            out.push_str(&format!("  {u} -- {v} [style={style}, color={class}];\n"));
        }
    }
    out.push_str("}\n");
    out
}

fn join(vals: &[usize]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cartesian_product;

    #[test]
    fn edge_colors_and_vertex_coords_appear() {
        let k2 = Graph::from_edges(2, vec![(0, 1)]).unwrap();
        let p = cartesian_product(&[k2.clone(), k2]).unwrap();
        let coords: Vec<Option<CoordinateVector>> =
            p.coords.iter().cloned().map(Some).collect();
        let dot = graph_to_dot(&p.graph, Some(&p.colors), Some(&coords));
        assert!(dot.contains("0 [coords=\"(0,0)\"];"));
        assert!(dot.contains("3 [coords=\"(1,1)\"];"));
        assert!(dot.contains("[color=0]"));
        assert!(dot.contains("[color=1]"));
        assert!(dot.starts_with("graph cartfact {"));
    }
}
