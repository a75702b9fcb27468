//! GeoJSON subset: FeatureCollections of Point, LineString, Polygon, and
//! MultiPolygon features.
//!
//! Each feature may carry an integer `value` property (default 1) naming
//! its category code; all features in a file must agree on it, so a file is
//! always a single-category dataset. Polygons are widened to one-member
//! multipolygons on read, and ring orientation is normalized by the
//! geometry constructors, so round trips are structurally stable rather
//! than byte-stable.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Geometry, MultiPolygon, Point, Polygon, Polyline};

use super::Dataset;

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

pub fn read_geojson(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let root: Value =
        serde_json::from_str(&text).map_err(|e| parse_err(path, format!("invalid JSON: {e}")))?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(parse_err(path, "root must be a FeatureCollection"));
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(path, "FeatureCollection has no features array"))?;
    if features.is_empty() {
        return Err(parse_err(path, "dataset contains no features"));
    }

    let mut geoms = Vec::with_capacity(features.len());
    let mut value: Option<i32> = None;
    for (i, feature) in features.iter().enumerate() {
        let geom = feature
            .get("geometry")
            .ok_or_else(|| parse_err(path, format!("feature {i} has no geometry")))?;
        let parsed =
            parse_geometry(geom).map_err(|m| parse_err(path, format!("feature {i}: {m}")))?;
        geoms.push(parsed);

        let v = feature_value(feature).map_err(|m| parse_err(path, format!("feature {i}: {m}")))?;
        match value {
            None => value = Some(v),
            Some(prev) if prev != v => {
                return Err(parse_err(
                    path,
                    format!(
                        "feature {i} has value {v} but earlier features have {prev}; \
                         a file holds a single-category dataset"
                    ),
                ));
            }
            _ => {}
        }
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    Ok(Dataset {
        name,
        geoms,
        value: value.unwrap(),
    })
}

pub fn write_geojson(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let features: Vec<Value> = dataset
        .geoms
        .iter()
        .map(|g| {
            json!({
                "type": "Feature",
                "geometry": geometry_value(g),
                "properties": { "value": dataset.value },
            })
        })
        .collect();
    let root = json!({ "type": "FeatureCollection", "features": features });
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut file, &root)
        .map_err(|e| Error::InvalidInput(format!("cannot serialize {}: {e}", path.display())))?;
    writeln!(file)?;
    Ok(())
}

fn feature_value(feature: &Value) -> std::result::Result<i32, String> {
    let Some(props) = feature.get("properties") else {
        return Ok(1);
    };
    let Some(v) = props.get("value") else {
        return Ok(1);
    };
    let v = v
        .as_i64()
        .ok_or_else(|| format!("value property must be an integer, got {v}"))?;
    let v = i32::try_from(v).map_err(|_| format!("value {v} does not fit a 32-bit code"))?;
    if v <= 0 {
        return Err(format!(
            "value must be a positive category code, got {v} \
             (0 means uncovered and negative codes are nodata markers)"
        ));
    }
    Ok(v)
}

fn parse_geometry(g: &Value) -> std::result::Result<Geometry, String> {
    let gtype = g
        .get("type")
        .and_then(Value::as_str)
        .ok_or("geometry has no type")?;
    let coords = g.get("coordinates").ok_or("geometry has no coordinates")?;
    match gtype {
        "Point" => Ok(Geometry::Point(position(coords)?)),
        "LineString" => {
            let pts = positions(coords)?;
            Polyline::new(pts)
                .map(Geometry::Polyline)
                .map_err(|e| e.to_string())
        }
        "Polygon" => {
            let poly = polygon_from_rings(coords)?;
            MultiPolygon::new(vec![poly])
                .map(Geometry::MultiPolygon)
                .map_err(|e| e.to_string())
        }
        "MultiPolygon" => {
            let members = coords
                .as_array()
                .ok_or("MultiPolygon coordinates must be an array")?;
            let polys = members
                .iter()
                .enumerate()
                .map(|(i, rings)| polygon_from_rings(rings).map_err(|m| format!("member {i}: {m}")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            MultiPolygon::new(polys)
                .map(Geometry::MultiPolygon)
                .map_err(|e| e.to_string())
        }
        other => Err(format!(
            "unsupported geometry type {other:?} (expected Point, LineString, Polygon, \
             or MultiPolygon)"
        )),
    }
}

fn polygon_from_rings(rings: &Value) -> std::result::Result<Polygon, String> {
    let rings = rings
        .as_array()
        .ok_or("Polygon coordinates must be an array of rings")?;
    if rings.is_empty() {
        return Err("Polygon has no rings".to_string());
    }
    let mut parsed = rings.iter().map(positions);
    let exterior = parsed.next().unwrap()?;
    let holes = parsed.collect::<std::result::Result<Vec<_>, _>>()?;
    Polygon::new(exterior, holes).map_err(|e| e.to_string())
}

fn positions(v: &Value) -> std::result::Result<Vec<Point>, String> {
    v.as_array()
        .ok_or("expected an array of positions")?
        .iter()
        .map(position)
        .collect()
}

/// A position is `[x, y]`; trailing elements such as elevation are ignored.
fn position(v: &Value) -> std::result::Result<Point, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected a position array, got {v}"))?;
    if arr.len() < 2 {
        return Err(format!("position needs x and y, got {v}"));
    }
    let x = arr[0]
        .as_f64()
        .ok_or_else(|| format!("non-numeric x in position {v}"))?;
    let y = arr[1]
        .as_f64()
        .ok_or_else(|| format!("non-numeric y in position {v}"))?;
    Ok(Point::new(x, y))
}

fn geometry_value(g: &Geometry) -> Value {
    match g {
        Geometry::Point(p) => json!({ "type": "Point", "coordinates": [p.x, p.y] }),
        Geometry::Polyline(line) => {
            let coords: Vec<Value> = line.vertices().iter().map(|p| json!([p.x, p.y])).collect();
            json!({ "type": "LineString", "coordinates": coords })
        }
        Geometry::MultiPolygon(mp) => {
            let members: Vec<Value> = mp
                .polygons()
                .iter()
                .map(|poly| {
                    let rings: Vec<Value> = poly
                        .rings()
                        .map(|ring| Value::Array(ring.iter().map(|p| json!([p.x, p.y])).collect()))
                        .collect();
                    Value::Array(rings)
                })
                .collect();
            json!({ "type": "MultiPolygon", "coordinates": members })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn sample_dataset() -> Dataset {
        let square = Polygon::new(
            vec![
                pt(0.0, 0.0),
                pt(4.0, 0.0),
                pt(4.0, 4.0),
                pt(0.0, 4.0),
                pt(0.0, 0.0),
            ],
            vec![vec![
                pt(1.0, 1.0),
                pt(2.0, 1.0),
                pt(2.0, 2.0),
                pt(1.0, 2.0),
                pt(1.0, 1.0),
            ]],
        )
        .unwrap();
        let second = Polygon::new(
            vec![
                pt(6.0, 6.0),
                pt(8.5, 6.0),
                pt(8.5, 9.0),
                pt(6.0, 9.0),
                pt(6.0, 6.0),
            ],
            vec![],
        )
        .unwrap();
        Dataset {
            name: "mixed".to_string(),
            geoms: vec![
                Geometry::Point(pt(0.25, 0.75)),
                Geometry::Polyline(
                    Polyline::new(vec![pt(0.0, 0.0), pt(3.5, 1.25), pt(7.0, 0.5)]).unwrap(),
                ),
                Geometry::MultiPolygon(MultiPolygon::new(vec![square, second]).unwrap()),
            ],
            value: 4,
        }
    }

    #[test]
    fn round_trips_structurally() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("mixed.geojson");
        let ds = sample_dataset();
        write_geojson(&ds, &path).unwrap();
        let back = read_geojson(&path).unwrap();
        assert_eq!(back.name, "mixed");
        assert_eq!(back.value, ds.value);
        assert_eq!(back.geoms, ds.geoms);
    }

    #[test]
    fn polygon_reads_as_single_member_multipolygon() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("poly.geojson");
        std::fs::write(
            &path,
            r#"{"type":"FeatureCollection","features":[
                {"type":"Feature","properties":{},
                 "geometry":{"type":"Polygon","coordinates":
                   [[[0,0],[2,0],[2,2],[0,2],[0,0]]]}}]}"#,
        )
        .unwrap();
        let ds = read_geojson(&path).unwrap();
        assert_eq!(ds.value, 1, "value defaults to 1");
        assert_eq!(ds.geoms.len(), 1);
        let Geometry::MultiPolygon(mp) = &ds.geoms[0] else {
            panic!("expected a multipolygon");
        };
        assert_eq!(mp.polygons().len(), 1);
        assert!(mp.contains(pt(1.0, 1.0)));
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cw.geojson");
        std::fs::write(
            &path,
            r#"{"type":"FeatureCollection","features":[
                {"type":"Feature","properties":{"value":2},
                 "geometry":{"type":"Polygon","coordinates":
                   [[[0,0],[0,2],[2,2],[2,0],[0,0]]]}}]}"#,
        )
        .unwrap();
        let ds = read_geojson(&path).unwrap();
        let Geometry::MultiPolygon(mp) = &ds.geoms[0] else {
            panic!()
        };
        assert_eq!(mp.polygons()[0].area(), 4.0);
    }

    #[test]
    fn mixed_values_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("mixed_values.geojson");
        std::fs::write(
            &path,
            r#"{"type":"FeatureCollection","features":[
                {"type":"Feature","properties":{"value":1},
                 "geometry":{"type":"Point","coordinates":[0,0]}},
                {"type":"Feature","properties":{"value":2},
                 "geometry":{"type":"Point","coordinates":[1,1]}}]}"#,
        )
        .unwrap();
        let err = read_geojson(&path).unwrap_err();
        assert!(err.to_string().contains("single-category"), "{err}");
    }

    #[test]
    fn nonpositive_values_are_rejected() {
        let dir = tempdir().unwrap();
        for bad in ["0", "-1"] {
            let path = dir.path().join(format!("v{bad}.geojson"));
            std::fs::write(
                &path,
                format!(
                    r#"{{"type":"FeatureCollection","features":[
                        {{"type":"Feature","properties":{{"value":{bad}}},
                         "geometry":{{"type":"Point","coordinates":[0,0]}}}}]}}"#
                ),
            )
            .unwrap();
            let err = read_geojson(&path).unwrap_err();
            assert!(err.to_string().contains("positive"), "{err}");
        }
    }

    #[test]
    fn errors_name_the_offending_feature() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.geojson");
        std::fs::write(
            &path,
            r#"{"type":"FeatureCollection","features":[
                {"type":"Feature","properties":{},
                 "geometry":{"type":"Point","coordinates":[0,0]}},
                {"type":"Feature","properties":{},
                 "geometry":{"type":"MultiLineString","coordinates":[]}}]}"#,
        )
        .unwrap();
        let err = read_geojson(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("feature 1"), "{msg}");
        assert!(msg.contains("MultiLineString"), "{msg}");
    }

    #[test]
    fn invalid_rings_are_reported_with_context() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("open_ring.geojson");
        std::fs::write(
            &path,
            r#"{"type":"FeatureCollection","features":[
                {"type":"Feature","properties":{},
                 "geometry":{"type":"Polygon","coordinates":
                   [[[0,0],[2,0],[2,2],[0,2]]]}}]}"#,
        )
        .unwrap();
        let err = read_geojson(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("feature 0"), "{msg}");
        assert!(msg.contains("closed") || msg.contains("4 entries"), "{msg}");
    }

    #[test]
    fn empty_collections_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.geojson");
        std::fs::write(&path, r#"{"type":"FeatureCollection","features":[]}"#).unwrap();
        assert!(read_geojson(&path).is_err());
    }

    #[test]
    fn elevation_is_ignored() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("z.geojson");
        std::fs::write(
            &path,
            r#"{"type":"FeatureCollection","features":[
                {"type":"Feature","properties":{},
                 "geometry":{"type":"Point","coordinates":[3.5,4.25,120.0]}}]}"#,
        )
        .unwrap();
        let ds = read_geojson(&path).unwrap();
        assert_eq!(ds.geoms[0], Geometry::Point(pt(3.5, 4.25)));
    }

    #[test]
    fn coordinates_round_trip_exactly() {
        // Display-format floats parse back to the identical bits.
        let dir = tempdir().unwrap();
        let path = dir.path().join("precise.geojson");
        let awkward = vec![
            pt(0.1 + 0.2, 1.0 / 3.0),
            pt(f64::MIN_POSITIVE, 1e300),
            pt(-123456.789012345, 2.0_f64.powi(-40)),
        ];
        let ds = Dataset {
            name: "precise".into(),
            geoms: vec![Geometry::Polyline(Polyline::new(awkward.clone()).unwrap())],
            value: 1,
        };
        write_geojson(&ds, &path).unwrap();
        let back = read_geojson(&path).unwrap();
        let Geometry::Polyline(line) = &back.geoms[0] else {
            panic!()
        };
        for (a, b) in line.vertices().iter().zip(&awkward) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }
}
