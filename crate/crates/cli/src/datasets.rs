//! Example systems shipped with the binary.

pub struct Dataset {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
}

pub const DATASETS: &[Dataset] = &[
    Dataset {
        name: "two_part_dust",
        summary: "two disjoint rotated dust components, vertex matrix [[1,1],[1,1]]",
        source: include_str!("../datasets/two_part_dust.json"),
    },
    Dataset {
        name: "squares_z2",
        summary: "two unit squares split into quarters, one branch point at the centre",
        source: include_str!("../datasets/squares_z2.json"),
    },
    Dataset {
        name: "penrose",
        summary: "golden-ratio triangle subdivision, vertex matrix [[2,1],[1,1]]",
        source: include_str!("../datasets/penrose.json"),
    },
    Dataset {
        name: "binary_interval",
        summary: "x/2 and x/2 + 1/2 on the unit interval",
        source: include_str!("../datasets/binary_interval.json"),
    },
    Dataset {
        name: "cantor",
        summary: "middle-thirds Cantor set",
        source: include_str!("../datasets/cantor.json"),
    },
    Dataset {
        name: "duplicate_map",
        summary: "two identical loops; every cograph point is a branch point",
        source: include_str!("../datasets/duplicate_map.json"),
    },
];

pub fn find(name: &str) -> Option<&'static Dataset> {
    DATASETS.iter().find(|d| d.name == name)
}
