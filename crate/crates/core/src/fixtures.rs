//! The worked example graphs, built in code.
//!
//! The same graphs ship as APG-JSON files under `fixtures/` at the
//! repository root; a test checks the files against these builders.

use crate::adt::{Label, PrimRegistry, TypeExpr, Value};
use crate::graph::{Graph, Schema, UNLABELED};
use crate::migrate::{parse_term, SchemaMapping};

fn schema(entries: &[(&str, &str)]) -> Schema {
    Schema::parse(
        PrimRegistry::default(),
        entries.iter().map(|(l, t)| (Label::atom(*l), *t)),
    )
    .unwrap_or_else(|(l, e)| panic!("fixture schema for {l}: {e}"))
}

fn r(id: &str) -> Value {
    Value::reference(id)
}

/// A `User` vertex, a `Trip` vertex and one unlabelled vertex.
pub fn vertices() -> Graph {
    let mut s = schema(&[("User", "1"), ("Trip", "1")]);
    s.insert(UNLABELED, crate::adt::TypeExpr::One);
    Graph::builder(s)
        .element("u1", "User", Value::Unit)
        .element("t1", "Trip", Value::Unit)
        .element("v0", UNLABELED, Value::Unit)
        .build()
}

/// Two `Person` vertices joined by a `knows` edge, with a `name` property.
pub fn knows() -> Graph {
    Graph::builder(schema(&[
        ("Person", "1"),
        ("knows", "Person * Person"),
        ("name", "Person * String"),
    ]))
    .element("v1", "Person", Value::Unit)
    .element("v2", "Person", Value::Unit)
    .element("e1", "knows", Value::pair(r("v1"), r("v2")))
    .element(
        "n1",
        "name",
        Value::pair(r("v1"), Value::string("Arthur Dent")),
    )
    .build()
}

/// `driver` and `rider` edges from a trip to two users.
pub fn edges() -> Graph {
    Graph::builder(schema(&[
        ("User", "1"),
        ("Trip", "1"),
        ("driver", "Trip * User"),
        ("rider", "Trip * User"),
    ]))
    .element("t1", "Trip", Value::Unit)
    .element("u1", "User", Value::Unit)
    .element("u2", "User", Value::Unit)
    .element("d1", "driver", Value::pair(r("t1"), r("u1")))
    .element("r1", "rider", Value::pair(r("t1"), r("u2")))
    .build()
}

/// [`edges`] plus a `driverStatus` property on the driver edge.
pub fn driver_status() -> Graph {
    let (s, elements) = edges().into_parts();
    let s = s.with(
        "driverStatus",
        crate::adt::TypeExpr::prod(
            crate::adt::TypeExpr::lbl("driver"),
            crate::adt::TypeExpr::prim("String"),
        ),
    );
    let mut b = Graph::builder(s);
    for (id, el) in elements {
        b.insert(id, el.label, el.value);
    }
    b.element(
        "ds1",
        "driverStatus",
        Value::pair(r("d1"), Value::string("active")),
    )
    .build()
}

/// One user with two `name` properties.
pub fn names() -> Graph {
    Graph::builder(schema(&[("User", "1"), ("name", "User * String")]))
        .element("u1", "User", Value::Unit)
        .element(
            "n1",
            "name",
            Value::pair(r("u1"), Value::string("Arthur Dent")),
        )
        .element(
            "n2",
            "name",
            Value::pair(r("u1"), Value::string("Arthur P. Dent")),
        )
        .build()
}

/// Two data type aliases for `Double`.
pub fn aliases() -> Graph {
    Graph::builder(schema(&[
        ("DegreesLatitude", "Double"),
        ("DegreesLongitude", "Double"),
    ]))
    .element("d1", "DegreesLatitude", Value::double(37.78))
    .element("d2", "DegreesLongitude", Value::double(-122.42))
    .build()
}

/// Vertex tags on trips.
pub fn tags() -> Graph {
    Graph::builder(schema(&[
        ("Trip", "1"),
        ("Completed", "Trip"),
        ("Updated", "Trip"),
        ("Cancelled", "Trip"),
    ]))
    .element("t1", "Trip", Value::Unit)
    .element("t2", "Trip", Value::Unit)
    .element("c1", "Completed", r("t1"))
    .element("c2", "Completed", r("t2"))
    .element("u1", "Updated", r("t2"))
    .build()
}

fn plates(entries: &[(&str, [&str; 3])]) -> Graph {
    let mut b = Graph::builder(schema(&[("PlateNumber", "String * String * String")]));
    for (id, parts) in entries {
        b.insert(
            *id,
            "PlateNumber",
            Value::tuple(parts.iter().map(|p| Value::string(p))),
        );
    }
    b.build()
}

/// First plate registry: `p1` (US/CA) and `p2` (MX/BC).
pub fn plates1() -> Graph {
    plates(&[
        ("p1", ["US", "CA", "6TRJ244"]),
        ("p2", ["MX", "BC", "AHD-41-02"]),
    ])
}

/// Second plate registry: `q1` (the same US/CA plate) and `q2` (MX/SON).
pub fn plates2() -> Graph {
    plates(&[
        ("q1", ["US", "CA", "6TRJ244"]),
        ("q2", ["MX", "SON", "VUK-17-75"]),
    ])
}

/// Trips as hyperelements over users and optional place events.
pub fn trips() -> Graph {
    let s = schema(&[
        ("User", "1"),
        ("Place", "1"),
        ("UnixTimeSeconds", "Integer"),
        ("PlaceEvent", "Place * UnixTimeSeconds"),
        ("Trip", "User * User * (1 + PlaceEvent) * (1 + PlaceEvent)"),
    ]);
    let mut b = Graph::builder(s);
    for u in ["u1", "u2", "u3"] {
        b.insert(u, "User", Value::Unit);
    }
    for p in ["p1", "p2", "p3"] {
        b.insert(p, "Place", Value::Unit);
    }
    for (s, t) in [
        ("s1", 1564061155),
        ("s2", 1564061502),
        ("s3", 1564061676),
        ("s4", 1564062809),
    ] {
        b.insert(s, "UnixTimeSeconds", Value::integer(t));
    }
    for (e, p, s) in [
        ("e1", "p1", "s1"),
        ("e2", "p2", "s2"),
        ("e3", "p2", "s3"),
        ("e4", "p3", "s4"),
    ] {
        b.insert(e, "PlaceEvent", Value::pair(r(p), r(s)));
    }
    b.insert(
        "t1",
        "Trip",
        Value::tuple([r("u1"), r("u2"), Value::inr(r("e1")), Value::inr(r("e2"))]),
    );
    b.insert(
        "t2",
        "Trip",
        Value::tuple([
            r("u1"),
            r("u3"),
            Value::inr(r("e3")),
            Value::inl(Value::Unit),
        ]),
    );
    b.build()
}

/// A graph on the target schema of the example mapping: one `l_prime`
/// element valued `(7, "abc")`.
pub fn mapping_target() -> Graph {
    Graph::builder(schema(&[("l_prime", "Nat * String")]))
        .element(
            "e1",
            "l_prime",
            Value::pair(Value::nat(7), Value::string("abc")),
        )
        .build()
}

/// The example mapping: `l : String × Nat × Integer` is sent to `l_prime`
/// and rebuilt by permuting the projections and appending `0`.
pub fn mapping() -> SchemaMapping {
    SchemaMapping {
        source: schema(&[("l", "String * Nat * Integer")]),
        target: mapping_target().schema().clone(),
        on_labels: [(Label::atom("l"), TypeExpr::lbl("l_prime"))].into(),
        on_terms: [(
            Label::atom("l"),
            parse_term("(snd phi x, (fst phi x, Integer 0))").expect("example term"),
        )]
        .into(),
    }
}

/// Every graph fixture with its file stem.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("vertices", vertices()),
        ("knows", knows()),
        ("edges", edges()),
        ("driver_status", driver_status()),
        ("names", names()),
        ("aliases", aliases()),
        ("tags", tags()),
        ("plates1", plates1()),
        ("plates2", plates2()),
        ("trips", trips()),
        ("mapping_target", mapping_target()),
    ]
}
