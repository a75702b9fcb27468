//! Rasterize a small scene (a pond with an island, a trail, two benches)
//! and print the grids, including how the two polygon coverage rules differ.

use quadrast::{
    rasterize_points, rasterize_polygons, rasterize_polyline, CellIndex, CoverageRule, GridSpec,
    MultiPolygon, Point, Polygon, Polyline,
};

fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn print_grid(label: &str, raster: &quadrast::Raster, glyph: char) {
    println!("{label}:");
    let spec = raster.spec();
    for row in 0..spec.nrows {
        let line: String = (0..spec.ncols)
            .map(|col| match raster.get(CellIndex { row, col }) {
                0 => '.',
                _ => glyph,
            })
            .collect();
        println!("  {line}");
    }
}

fn main() {
    // 16 x 12 cells of 1 m; row 0 is the top of the map.
    let spec = GridSpec::new(0.0, 12.0, 1.0, 16, 12, "site-local");

    let pond = Polygon::new(
        vec![
            pt(1.5, 1.0),
            pt(11.0, 1.5),
            pt(12.5, 8.0),
            pt(6.0, 10.5),
            pt(1.0, 8.5),
            pt(1.5, 1.0),
        ],
        vec![vec![
            pt(5.0, 4.0),
            pt(8.0, 4.5),
            pt(7.5, 7.0),
            pt(5.0, 6.5),
            pt(5.0, 4.0),
        ]],
    )
    .unwrap();
    let pond = MultiPolygon::new(vec![pond]).unwrap();

    let trail = Polyline::new(vec![
        pt(0.2, 11.0),
        pt(6.0, 11.2),
        pt(13.0, 9.0),
        pt(15.8, 2.0),
    ])
    .unwrap();
    let benches = [pt(14.0, 10.0), pt(3.0, 0.5)];

    let water = rasterize_polygons(&pond, 1, &spec, CoverageRule::area_majority());
    print_grid("pond, cells more than half covered", &water, '~');

    let center = rasterize_polygons(&pond, 1, &spec, CoverageRule::CenterInPolygon);
    let flips = water
        .values()
        .iter()
        .zip(center.values())
        .filter(|(a, b)| a != b)
        .count();
    print_grid("pond, cell-center rule", &center, '~');
    println!("cells where the two rules disagree: {flips}\n");

    print_grid(
        "trail, every touched cell",
        &rasterize_polyline(&trail, 1, &spec),
        '=',
    );
    print_grid("benches", &rasterize_points(&benches, 1, &spec), 'B');

    // One call rasterizes a whole mixed collection at once.
    let everything = quadrast::rasterize_dataset(
        &[
            quadrast::Geometry::MultiPolygon(pond),
            quadrast::Geometry::Polyline(trail),
            quadrast::Geometry::Point(benches[0]),
            quadrast::Geometry::Point(benches[1]),
        ],
        1,
        &spec,
        CoverageRule::area_majority(),
    );
    print_grid("all features together", &everything, '#');
}
