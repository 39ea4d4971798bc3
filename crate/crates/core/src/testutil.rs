use crate::graph::{TemporalGraph, TimeArc};

/// The five-vertex example: s=0, a=1, b=2, c=3, z=4.
pub fn five_stop_line() -> TemporalGraph {
    TemporalGraph::new(
        5,
        vec![
            TimeArc::new(0, 1, 3, 1),
            TimeArc::new(1, 2, 4, 1),
            TimeArc::new(1, 2, 8, 1),
            TimeArc::new(2, 3, 5, 1),
            TimeArc::new(2, 3, 9, 1),
            TimeArc::new(3, 4, 11, 1),
        ],
    )
    .unwrap()
}
