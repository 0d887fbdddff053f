//! h-signature words: two routes to the same point around different sides
//! of an obstacle get different words, a loop around an obstacle has net
//! exponent +-1, and raw crossing sequences reduce like free-group words.

use seftpp::geometry::Point2;
use seftpp::homotopy::{h_equals, polyline_word, HWord};
use seftpp::worldmodel::{GridFormat, GridMap, World};

fn main() {
    // Two blocks side by side in a 14x10 map.
    let mut rows = String::from("14 10\n");
    for r in 0..10 {
        for c in 0..14 {
            let block = (3..5).contains(&c) || (9..11).contains(&c);
            rows.push(if block && (4..6).contains(&r) { '#' } else { '.' });
        }
        rows.push('\n');
    }
    let world = World::new(GridMap::load(rows.as_bytes(), GridFormat::AsciiGrid).unwrap());
    println!("{} obstacles extracted", world.obstacles.len());

    let start = Point2::new(1.0, 5.0);
    let goal = Point2::new(13.0, 5.0);
    let over = [start, Point2::new(7.0, 8.5), goal];
    let under = [start, Point2::new(7.0, 1.5), goal];

    let w_over = polyline_word(&over, &world.obstacles);
    let w_under = polyline_word(&under, &world.obstacles);
    println!("route over the blocks:  {w_over}");
    println!("route under the blocks: {w_under}");
    assert!(!h_equals(&w_over, &w_under), "different classes, different words");

    // Loop around the left block only: net exponent +-1 on its ray.
    let loop_left = [
        start,
        Point2::new(7.0, 8.5),
        Point2::new(7.0, 5.0),
        Point2::new(7.0, 1.5),
        start,
    ];
    let w_loop = polyline_word(&loop_left, &world.obstacles);
    println!("loop around left block: {w_loop}");
    assert_eq!(w_loop.net_exponent(world.obstacles[0].id).abs(), 1);

    // Free-group reduction: adjacent inverse letters cancel no matter how
    // the sequence is fed in.
    let word = HWord::from_letters(&[(2, 1), (2, -1), (2, 1), (2, -1), (1, -1), (1, 1), (2, 1), (3, 1)]);
    println!("reduced crossing record: {word}");
    assert_eq!(word.letters(), &[(2, 1), (3, 1)]);
}
