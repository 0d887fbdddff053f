//! Drag a tether anchor around an obstacle and watch contact points get
//! pushed and popped, then retrace the motion backwards to confirm the
//! funnel update is reversible, and cross-check the final state against
//! global retautening of the traced polyline.

use seftpp::geometry::Point2;
use seftpp::tether::{advance_subdivided, tauten_polyline, tether_length, TetherState};
use seftpp::worldmodel::{GridFormat, GridMap, World};

fn main() {
    // 12x12 map with a 3x3 block in the middle.
    let mut rows = String::from("12 12\n");
    for r in 0..12 {
        for c in 0..12 {
            rows.push(if (4..7).contains(&c) && (4..7).contains(&r) { '#' } else { '.' });
        }
        rows.push('\n');
    }
    let world = World::new(GridMap::load(rows.as_bytes(), GridFormat::AsciiGrid).unwrap());

    let base = Point2::new(1.5, 1.5);
    let waypoints = [
        Point2::new(9.5, 1.5),
        Point2::new(9.5, 9.5),
        Point2::new(1.5, 9.5),
    ];

    let mut state = TetherState::new(base);
    let mut trace = vec![base];
    let mut prev = base;
    println!("anchor {:?}  contacts {:?}", prev, state.contacts);
    for &wp in &waypoints {
        state = advance_subdivided(&state, prev, wp, &world);
        trace.push(wp);
        prev = wp;
        println!(
            "anchor {:?}  contacts {:?}  length {:.3}",
            wp,
            state.contacts.iter().map(|c| c.point).collect::<Vec<_>>(),
            tether_length(&state, wp),
        );
    }

    // The funnel result matches the exact shortest path in the same
    // homotopy class as the traced anchor motion.
    let taut = tauten_polyline(&world, &trace).unwrap();
    assert_eq!(state.contacts.len(), taut.contacts.len());
    println!("global retautening agrees: {} contacts", taut.contacts.len());

    // Retrace backwards; every wrap unwinds and the tether ends free.
    let mut back = state.clone();
    for &wp in trace.iter().rev().skip(1) {
        back = advance_subdivided(&back, prev, wp, &world);
        prev = wp;
    }
    assert!(back.contacts.is_empty());
    println!("reverse trace unwinds to a free tether");
}
