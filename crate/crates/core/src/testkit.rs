//! Shared helpers for unit tests. Compiled only under cfg(test).

use crate::game::{CountProfile, Instance, PayoffMatrices, State};
use crate::value::{PayoffValue, Rat};

pub(crate) fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<PayoffValue>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| PayoffValue::from_int(v)).collect())
        .collect()
}

pub(crate) fn profile(counts: &[u64]) -> CountProfile {
    CountProfile::new(counts.to_vec())
}

pub(crate) fn state(row: usize, counts: &[u64]) -> State {
    State::new(row, profile(counts))
}

pub(crate) fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

/// R = [[1,0],[0,2]], C = [[1,0],[0,1]], k = 2, moving all weight from the
/// first pure equilibrium to the second. Optimal cost is 2 along
/// (r1,(2,0)) -> (r1,(1,1)) -> (r2,(1,1)) -> (r2,(0,2)).
pub(crate) fn canonical_instance() -> Instance {
    let mats =
        PayoffMatrices::new(int_matrix(&[&[1, 0], &[0, 2]]), int_matrix(&[&[1, 0], &[0, 1]]))
            .unwrap();
    Instance::new(mats, 2, state(0, &[2, 0]), state(1, &[0, 2])).unwrap()
}
