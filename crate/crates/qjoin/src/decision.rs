//! Closed-form decision of `q` for joins of unions of complete graphs,
//! explicit witness constructions, the minimum middle mass `mu`, and the
//! achievable range of the `+1` eigenvalue multiplicity.
//!
//! All inputs are internally oriented so the first tuple has at most as many
//! components as the second (`k <= l`); results are mapped back to the
//! caller's orientation.

use crate::combinatorics::{compose_bounded, fill_two_row_table, is_compatible, is_multiplicity_matrix_for};
use crate::model::{DecisionReport, MultiplicityMatrix, Rule, SizeTuple, WitnessPair};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecisionError {
    #[error("q = 3 for this pair: no witness, mu or multiplicity range exists")]
    NotRealizable,
    #[error("tuples must have the same number of components, got {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 components per side, got {0}")]
    TooFewComponents(usize),
    #[error("component order {order} outside {{base, base+1, base+2}} for base {base}")]
    OrderOutOfRange { order: usize, base: usize },
    #[error("base order must be >= 1")]
    BadBaseOrder,
    #[error("connected order {order} outside {{l, l+1, l+2}} for l = {l}")]
    ConnectedOrderOutOfRange { order: usize, l: usize },
}

/// Which construction produced a witness pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBranch {
    /// Three rows; middle row of the small side from a bounded composition,
    /// middle row of ones on the large side.
    ThreeRow,
    /// Four rows; both sides without isolated vertices and `l < 2k`.
    FourRowNoIso,
    /// Four rows; shrink the large side to total `2k`, fill a two-row table,
    /// then lift the deficit into the first row.
    FourRowShrinkLift,
    /// Four rows; `2k <= l <= |m|`, splitting the large side's columns
    /// between the two middle rows.
    FourRowSplit,
}

/// A constructed witness with the branch that produced it.
#[derive(Debug, Clone)]
pub struct ConstructedWitness {
    pub pair: WitnessPair,
    pub branch: WitnessBranch,
}

struct Oriented<'a> {
    small: &'a SizeTuple, // k components
    large: &'a SizeTuple, // l >= k components
    swapped: bool,
}

fn orient<'a>(m: &'a SizeTuple, n: &'a SizeTuple) -> Oriented<'a> {
    if m.len() <= n.len() {
        Oriented { small: m, large: n, swapped: false }
    } else {
        Oriented { small: n, large: m, swapped: true }
    }
}

fn rule_oriented(small: &SizeTuple, large: &SizeTuple) -> Rule {
    let (k, l) = (small.len(), large.len());
    let (mt, nt) = (small.total(), large.total());
    let (mi, ni) = (small.iso(), large.iso());
    if mi == 0 && ni == 0 && l <= mt {
        Rule::G1
    } else if mi > 0 && k + l <= mt + mi {
        Rule::G2
    } else if mi == 0 && ni > 0 && (k + l <= mt || (2 * k <= l && l <= mt) || (l <= 2 * k && 2 * k <= nt)) {
        Rule::G3
    } else {
        Rule::None
    }
}

/// Decide `q` for the join of the unions of cliques `m` and `n`.
///
/// `q = 2` iff one of the three classification conditions holds; otherwise
/// `q = 3`. A `q = 2` report carries a witness pair (in the caller's
/// orientation), `mu` and the achievable range of the `+1` multiplicity.
pub fn decide_q(m: &SizeTuple, n: &SizeTuple) -> DecisionReport {
    let o = orient(m, n);
    let rule = rule_oriented(o.small, o.large);
    if rule == Rule::None {
        return DecisionReport {
            q: 3,
            rule,
            witness: None,
            mu: None,
            iplus_range: None,
            swapped: o.swapped,
        };
    }
    let witness = construct_witness(m, n).expect("q = 2 implies a witness exists");
    let mu_value = mu(m, n).expect("q = 2 implies mu exists");
    let range = iplus_range(m, n).expect("q = 2 implies the range exists");
    DecisionReport {
        q: 2,
        rule,
        witness: Some(witness.pair),
        mu: Some(mu_value),
        iplus_range: Some(range),
        swapped: o.swapped,
    }
}

/// Construct a compatible witness pair for a `q = 2` input, in the caller's
/// orientation. Rejects `q = 3` inputs.
///
/// Branch selection, on the oriented pair: the three-row construction
/// whenever `k + l <= min(|m| + iso(m), |n| + iso(n))`; otherwise the
/// applicable four-row construction (no-isolated split when `l < 2k`,
/// shrink-and-lift when `l <= 2k <= |n|`, column split when `2k <= l <= |m|`).
pub fn construct_witness(m: &SizeTuple, n: &SizeTuple) -> Result<ConstructedWitness, DecisionError> {
    let o = orient(m, n);
    if rule_oriented(o.small, o.large) == Rule::None {
        return Err(DecisionError::NotRealizable);
    }
    let (pair, branch) = construct_oriented(o.small, o.large);

    debug_assert!(is_multiplicity_matrix_for(&pair.v, o.small).unwrap());
    debug_assert!(is_multiplicity_matrix_for(&pair.w, o.large).unwrap());
    debug_assert!(is_compatible(&pair.v, &pair.w).unwrap());

    let pair = if o.swapped {
        WitnessPair { v: pair.w, w: pair.v }
    } else {
        pair
    };
    Ok(ConstructedWitness { pair, branch })
}

fn construct_oriented(small: &SizeTuple, large: &SizeTuple) -> (WitnessPair, WitnessBranch) {
    let (k, l) = (small.len(), large.len());
    let (mt, nt) = (small.total(), large.total());
    let (mi, ni) = (small.iso(), large.iso());

    if k + l <= (mt + mi).min(nt + ni) {
        (three_row_witness(small, large), WitnessBranch::ThreeRow)
    } else if ni == 0 && l < 2 * k {
        // q = 2 here forces iso(small) = 0 and l <= |small|
        (four_row_no_iso_witness(small, large), WitnessBranch::FourRowNoIso)
    } else if l <= 2 * k && 2 * k <= nt {
        (shrink_lift_witness(small, large), WitnessBranch::FourRowShrinkLift)
    } else if 2 * k <= l && l <= mt {
        (four_row_split_witness(small, large), WitnessBranch::FourRowSplit)
    } else {
        unreachable!("no construction applies, but the rule said q = 2")
    }
}

/// Rows `m - t / t / 0` on the small side with `sum(t) = l`, rows
/// `n - 1 / 1 / 0` on the large side.
fn three_row_witness(small: &SizeTuple, large: &SizeTuple) -> WitnessPair {
    let caps: Vec<usize> = small.entries().iter().map(|&mi| 1.max(mi - 1)).collect();
    let t = compose_bounded(large.len(), &caps).expect("three-row branch condition guarantees a composition");
    let v_top: Vec<usize> = small.entries().iter().zip(&t).map(|(&mi, &ti)| mi - ti).collect();
    let v = MultiplicityMatrix::from_rows(vec![v_top, t, vec![0; small.len()]]).unwrap();
    let w_top: Vec<usize> = large.entries().iter().map(|&nj| nj - 1).collect();
    let w = MultiplicityMatrix::from_rows(vec![w_top, vec![1; large.len()], vec![0; large.len()]]).unwrap();
    WitnessPair { v, w }
}

/// Both sides free of isolated vertices, `k <= l < 2k`, `l <= |m|`. The large
/// side's first `2k - l` columns feed both middle rows, the next `l - k`
/// feed the first and the rest the second.
fn four_row_no_iso_witness(small: &SizeTuple, large: &SizeTuple) -> WitnessPair {
    let (k, l) = (small.len(), large.len());
    let g = 2 * k - l; // >= 1 since l < 2k
    let v = MultiplicityMatrix::from_rows(vec![
        small.entries().iter().map(|&mi| mi - 2).collect(),
        vec![1; k],
        vec![1; k],
        vec![0; k],
    ])
    .unwrap();
    let w_top: Vec<usize> = large
        .entries()
        .iter()
        .enumerate()
        .map(|(j, &nj)| if j < g { nj - 2 } else { nj - 1 })
        .collect();
    let w_mid1: Vec<usize> = (0..l).map(|j| usize::from(j < k)).collect();
    let w_mid2: Vec<usize> = (0..l).map(|j| usize::from(j < g || j >= k)).collect();
    let w = MultiplicityMatrix::from_rows(vec![w_top, w_mid1, w_mid2, vec![0; l]]).unwrap();
    WitnessPair { v, w }
}

/// Witness for `iso(small) = 0` against a large side of total exactly `2k`:
/// split the large side's isolated vertices between the two middle rows and
/// fill the rest with a two-row table.
fn exact_2k_witness(small: &SizeTuple, target: &[usize]) -> WitnessPair {
    let k = small.len();
    let l = target.len();
    debug_assert_eq!(target.iter().sum::<usize>(), 2 * k);

    // permute: entries >= 2 first, isolated vertices last
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by_key(|&j| (target[j] < 2, j));
    let t = target.iter().filter(|&&nj| nj >= 2).count();
    let iso = l - t;
    let a = iso / 2;
    let b = iso % 2;
    let r1 = k - t - a - b;
    let r2 = k - t - a;
    let col_sums: Vec<usize> = order[..t].iter().map(|&j| target[j] - 2).collect();
    let y = fill_two_row_table((r1, r2), &col_sums).expect("row sums match by construction");

    let mut w_rows = vec![vec![0usize; l]; 4];
    for (pos, &j) in order.iter().enumerate() {
        if pos < t {
            w_rows[1][j] = y.get(0, pos) + 1;
            w_rows[2][j] = y.get(1, pos) + 1;
        } else if pos < t + a + b {
            w_rows[1][j] = 1;
        } else {
            w_rows[2][j] = 1;
        }
    }
    let v = MultiplicityMatrix::from_rows(vec![
        small.entries().iter().map(|&mi| mi - 2).collect(),
        vec![1; k],
        vec![1; k],
        vec![0; k],
    ])
    .unwrap();
    let w = MultiplicityMatrix::from_rows(w_rows).unwrap();
    WitnessPair { v, w }
}

/// `l <= 2k <= |n|`: shrink the large side to a subtuple of total `2k`,
/// build the exact witness, then add the deficit back into the first row
/// (which leaves the middles, and hence compatibility, unchanged).
fn shrink_lift_witness(small: &SizeTuple, large: &SizeTuple) -> WitnessPair {
    let k = small.len();
    let p = compose_bounded(2 * k, large.entries()).expect("l <= 2k <= |n| guarantees a subtuple");
    let base = exact_2k_witness(small, &p);
    let mut w_rows: Vec<Vec<usize>> =
        (0..4).map(|i| base.w.as_grid().row(i).to_vec()).collect();
    for (j, (&nj, &pj)) in large.entries().iter().zip(&p).enumerate() {
        w_rows[0][j] += nj - pj;
    }
    WitnessPair {
        v: base.v,
        w: MultiplicityMatrix::from_rows(w_rows).unwrap(),
    }
}

/// `2k <= l <= |m|`, `iso(small) = 0`: distribute `l - k` extra middle
/// multiplicities over the small side and split the large side's columns
/// between the two middle rows.
fn four_row_split_witness(small: &SizeTuple, large: &SizeTuple) -> WitnessPair {
    let (k, l) = (small.len(), large.len());
    let caps: Vec<usize> = small.entries().iter().map(|&mi| mi - 1).collect();
    let r = compose_bounded(l - k, &caps).expect("split branch condition guarantees a composition");
    let v = MultiplicityMatrix::from_rows(vec![
        small.entries().iter().zip(&r).map(|(&mi, &ri)| mi - ri - 1).collect(),
        vec![1; k],
        r,
        vec![0; k],
    ])
    .unwrap();
    let w = MultiplicityMatrix::from_rows(vec![
        large.entries().iter().map(|&nj| nj - 1).collect(),
        (0..l).map(|j| usize::from(j < k)).collect(),
        (0..l).map(|j| usize::from(j >= k)).collect(),
        vec![0; l],
    ])
    .unwrap();
    WitnessPair { v, w }
}

/// Minimum total middle mass over all compatible witness pairs: `2k` when
/// `|m| + iso(m) - k < l < 2k`, else `l` (oriented so `k <= l`). Defined
/// only when `q = 2`.
pub fn mu(m: &SizeTuple, n: &SizeTuple) -> Result<usize, DecisionError> {
    let o = orient(m, n);
    if rule_oriented(o.small, o.large) == Rule::None {
        return Err(DecisionError::NotRealizable);
    }
    let (k, l) = (o.small.len(), o.large.len());
    let slack = o.small.total() + o.small.iso() - k;
    Ok(if slack < l && l < 2 * k { 2 * k } else { l })
}

/// Inclusive interval of achievable `+1` eigenvalue multiplicities:
/// `[mu, |m| + |n| - mu]`. Defined only when `q = 2`.
pub fn iplus_range(m: &SizeTuple, n: &SizeTuple) -> Result<(usize, usize), DecisionError> {
    let mu_value = mu(m, n)?;
    Ok((mu_value, m.total() + n.total() - mu_value))
}

/// Witness pair for two graphs with the same number `k >= 2` of connected
/// components, every component order in `{base, base+1, base+2}`, at the
/// clique-reduction level. The pair has `base + 2` rows: a middle block of
/// ones and 0/1 first and last rows splitting each order offset.
pub fn witness_same_size_components(
    sizes_g: &SizeTuple,
    sizes_h: &SizeTuple,
    base: usize,
) -> Result<WitnessPair, DecisionError> {
    if base == 0 {
        return Err(DecisionError::BadBaseOrder);
    }
    if sizes_g.len() != sizes_h.len() {
        return Err(DecisionError::LengthMismatch(sizes_g.len(), sizes_h.len()));
    }
    let k = sizes_g.len();
    if k < 2 {
        return Err(DecisionError::TooFewComponents(k));
    }
    let build = |sizes: &SizeTuple| -> Result<MultiplicityMatrix, DecisionError> {
        let mut top = vec![0usize; k];
        let mut bottom = vec![0usize; k];
        for (i, &order) in sizes.entries().iter().enumerate() {
            if order < base || order > base + 2 {
                return Err(DecisionError::OrderOutOfRange { order, base });
            }
            // offset 0 -> (0,0), 1 -> (0,1), 2 -> (1,1)
            let d = order - base;
            top[i] = usize::from(d == 2);
            bottom[i] = usize::from(d >= 1);
        }
        let mut rows = Vec::with_capacity(base + 2);
        rows.push(top);
        rows.extend(std::iter::repeat_n(vec![1usize; k], base));
        rows.push(bottom);
        Ok(MultiplicityMatrix::from_rows(rows).unwrap())
    };
    Ok(WitnessPair {
        v: build(sizes_g)?,
        w: build(sizes_h)?,
    })
}

/// Witness pair for a connected graph of order `m` in `{l, l+1, l+2}` joined
/// with a union of `l` cliques `n`: a single 0/1-padded column of ones
/// against `(n - 1; I_l; 0)`, both with `l + 2` rows.
pub fn witness_connected_vs_cliques(
    m: usize,
    n: &SizeTuple,
) -> Result<WitnessPair, DecisionError> {
    let l = n.len();
    if m < l || m > l + 2 {
        return Err(DecisionError::ConnectedOrderOutOfRange { order: m, l });
    }
    let d = m - l;
    let eps = usize::from(d == 2);
    let eps_prime = usize::from(d >= 1);
    let mut v_rows = Vec::with_capacity(l + 2);
    v_rows.push(vec![eps]);
    v_rows.extend(std::iter::repeat_n(vec![1usize], l));
    v_rows.push(vec![eps_prime]);
    let v = MultiplicityMatrix::from_rows(v_rows).unwrap();

    let mut w_rows = vec![vec![0usize; l]; l + 2];
    for (j, &nj) in n.entries().iter().enumerate() {
        w_rows[0][j] = nj - 1;
        w_rows[1 + j][j] = 1;
    }
    let w = MultiplicityMatrix::from_rows(w_rows).unwrap();
    Ok(WitnessPair { v, w })
}
