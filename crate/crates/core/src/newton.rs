//! Lower convex hulls of `(i, y_i)` point sets and certified slopes of ghost specializations.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dimension_models::DimensionModel;
use crate::error::{GhostError, Result};
use crate::ghost_core::{degree_sequence, delta_data, valuation_sequence};
use crate::rational::{int, ExtRational, Rational};
use crate::weightspace::WeightPoint;

type Vertex = (i64, Rational);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    #[serde(with = "vertex_serde")]
    pub vertices: Vec<(i64, Rational)>,
    #[serde(with = "slope_serde")]
    pub slopes: Vec<(Rational, i64)>,
}

mod vertex_serde {
    use super::*;
    use crate::rational::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(i64, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(x, y)| (*x, format_rational(y))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(i64, Rational)>, D::Error> {
        Vec::<(i64, String)>::deserialize(d)?
            .into_iter()
            .map(|(x, y)| parse_rational(&y).map(|y| (x, y)).map_err(serde::de::Error::custom))
            .collect()
    }
}

mod slope_serde {
    use super::*;
    use crate::rational::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Rational, i64)], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(m, k)| (format_rational(m), *k)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(Rational, i64)>, D::Error> {
        Vec::<(String, i64)>::deserialize(d)?
            .into_iter()
            .map(|(m, k)| parse_rational(&m).map(|m| (m, k)).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl NewtonPolygon {
    fn from_vertices(vertices: Vec<(i64, Rational)>) -> Self {
        let slopes = vertices
            .windows(2)
            .map(|w| {
                let dx = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / int(dx), dx)
            })
            .collect();
        NewtonPolygon { vertices, slopes }
    }

    /// The polygon through `(0, y0)` with the given nondecreasing slopes.
    pub fn from_slopes(y0: Rational, slopes: &[Rational]) -> Self {
        let mut vertices = vec![(0i64, y0)];
        let mut y = vertices[0].1.clone();
        for (j, s) in slopes.iter().enumerate() {
            y += s;
            let x = j as i64 + 1;
            if slopes.get(j + 1) != Some(s) {
                vertices.push((x, y.clone()));
            }
        }
        NewtonPolygon::from_vertices(vertices)
    }

    /// Slopes repeated by multiplicity, in order.
    pub fn slope_list(&self) -> Vec<Rational> {
        self.slopes.iter().flat_map(|(s, m)| std::iter::repeat_n(s.clone(), *m as usize)).collect()
    }

    pub fn x_span(&self) -> i64 {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }

    pub fn is_vertex(&self, x: i64) -> bool {
        self.vertices.binary_search_by_key(&x, |v| v.0).is_ok()
    }

    /// The segment `(left, right)` whose x-range contains `(x − 1, x]`.
    fn segment_containing(&self, x: i64) -> Option<(&Vertex, &Vertex)> {
        self.vertices.windows(2).find(|w| w[0].0 < x && x <= w[1].0).map(|w| (&w[0], &w[1]))
    }
}

fn finite_points(points: &[(i64, ExtRational)]) -> Result<Vec<(i64, Rational)>> {
    if points.is_empty() {
        return Err(GhostError::EmptyInput);
    }
    let mut pts: Vec<(i64, Rational)> =
        points.iter().filter_map(|(x, y)| y.finite().map(|y| (*x, y.clone()))).collect();
    pts.sort();
    pts.dedup_by(|later, earlier| later.0 == earlier.0);
    if pts.is_empty() {
        return Err(GhostError::EmptyInput);
    }
    Ok(pts)
}

/// `b` is on or above the segment from `a` to `c`.
fn not_below(a: &(i64, Rational), b: &(i64, Rational), c: &(i64, Rational)) -> bool {
    (&b.1 - &a.1) * int(c.0 - b.0) >= (&c.1 - &b.1) * int(b.0 - a.0)
}

/// Lower convex hull (monotone chain). Infinite points never support the hull.
pub fn lower_hull(points: &[(i64, ExtRational)]) -> Result<NewtonPolygon> {
    let pts = finite_points(points)?;
    let mut hull: Vec<(i64, Rational)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && not_below(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(NewtonPolygon::from_vertices(hull))
}

/// Reference hull by repeated minimum-slope scans, `O(m²)`.
pub fn lower_hull_quadratic(points: &[(i64, ExtRational)]) -> Result<NewtonPolygon> {
    let pts = finite_points(points)?;
    let mut vertices = vec![pts[0].clone()];
    let mut at = 0;
    while at + 1 < pts.len() {
        let (x0, y0) = &pts[at];
        let mut best = at + 1;
        let mut best_slope = (&pts[best].1 - y0) / int(pts[best].0 - x0);
        for (j, (x, y)) in pts.iter().enumerate().skip(at + 2) {
            let s = (y - y0) / int(x - x0);
            if s <= best_slope {
                best = j;
                best_slope = s;
            }
        }
        vertices.push(pts[best].clone());
        at = best;
    }
    Ok(NewtonPolygon::from_vertices(vertices))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSequence {
    /// `None` for the w-adic polygon.
    pub weight: Option<WeightPoint>,
    pub count: usize,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub slopes: Vec<Rational>,
    pub certified: bool,
    /// Largest coefficient index whose valuation entered the hull.
    pub index_bound: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeOptions {
    /// First hull window; 0 picks `max(2·count, 16)`.
    pub initial_index: i64,
    pub max_index: i64,
}

impl Default for SlopeOptions {
    fn default() -> Self {
        SlopeOptions { initial_index: 0, max_index: 1 << 17 }
    }
}

/// `λ_{m+Q} = λ_m + D` with `Q = lcm(Q_d, Q_{d_p}, Q_{d+d^new})`.
fn lambda_shift(model: &DimensionModel) -> (i64, Rational) {
    let p = &model.periods;
    let q = p.d.defect.lcm(&p.dp.defect).lcm(&p.dsum.defect);
    let inner = Rational::new(p.d.period.into(), p.d.defect.into())
        - Rational::new((4 * p.dp.period).into(), p.dp.defect.into())
        + Rational::new(p.dsum.period.into(), p.dsum.defect.into());
    (q, inner * int(q))
}

enum Check {
    Certified,
    /// Try again with at least this many coefficients.
    Grow(i64),
}

/// Is every point beyond `i_top` above the line `y = y_b + s·(x − x_b)`?
///
/// Points beyond `i_top` satisfy `y_j ≥ v_min·deg g_j`. The bound is checked
/// directly until `v_min·λ_m ≥ s` holds on a full λ-period with nonempty Δ ranges;
/// from there `λ_{m+Q} = λ_m + D` with `D > 0` keeps the bound increasing faster than the line.
fn tail_above_line(
    model: &DimensionModel,
    v_min: &Rational,
    i_top: i64,
    deg_top: i64,
    anchor: &(i64, Rational),
    slope: &Rational,
) -> Result<Check> {
    let (q, shift) = lambda_shift(model);
    if shift <= Rational::zero() {
        return Ok(Check::Grow(i64::MAX));
    }
    let scan_limit = i_top + 4 * (i_top + q) + 64;
    let mut deg = deg_top;
    let mut run = 0;
    for j in i_top + 1..=scan_limit {
        let dd = delta_data(model, j)?;
        deg += dd.lambda;
        let bound = v_min * int(deg);
        let line = &anchor.1 + slope * int(j - anchor.0);
        if bound < line {
            return Ok(Check::Grow(j));
        }
        let increasing = v_min * int(dd.lambda) >= *slope
            && dd.plus_range.is_some()
            && dd.minus_range.is_some()
            && int(delta_data(model, j + q)?.lambda) == int(dd.lambda) + &shift;
        run = if increasing { run + 1 } else { 0 };
        if run >= q && j - q > i_top {
            return Ok(Check::Certified);
        }
    }
    Ok(Check::Grow(scan_limit))
}

fn certified_slopes(
    model: &DimensionModel,
    count: usize,
    v_min: &Rational,
    weight: Option<WeightPoint>,
    values: impl Fn(i64) -> Result<Vec<ExtRational>>,
    opts: &SlopeOptions,
) -> Result<SlopeSequence> {
    if count == 0 {
        return Err(GhostError::InvalidArgument("slope count must be at least 1".into()));
    }
    let count_i = count as i64;
    let mut i_top = if opts.initial_index > 0 { opts.initial_index } else { (2 * count_i).max(16) };
    loop {
        let ys = values(i_top)?;
        let points: Vec<(i64, ExtRational)> =
            ys.into_iter().enumerate().map(|(i, y)| (i as i64, y)).collect();
        let hull = lower_hull(&points)?;
        let mut slopes = hull.slope_list();
        let reaches = slopes.len() >= count;
        slopes.truncate(count);
        let next = if reaches {
            let (_, right) = hull.segment_containing(count_i).expect("hull reaches count");
            let slope = &slopes[count - 1];
            let deg_top = degree_sequence(model, i_top)?[i_top as usize];
            match tail_above_line(model, v_min, i_top, deg_top, right, slope)? {
                Check::Certified => {
                    return Ok(SlopeSequence { weight, count, slopes, certified: true, index_bound: i_top });
                }
                Check::Grow(j) => j.max(2 * i_top),
            }
        } else {
            2 * i_top
        };
        if next > opts.max_index || next == i64::MAX {
            return Ok(SlopeSequence { weight, count, slopes, certified: false, index_bound: i_top });
        }
        i_top = next;
    }
}

/// The first `count` slopes of `NP(G_κ)`.
pub fn ghost_slopes(model: &DimensionModel, kappa: &WeightPoint, count: usize) -> Result<SlopeSequence> {
    ghost_slopes_with(model, kappa, count, &SlopeOptions::default())
}

pub fn ghost_slopes_with(
    model: &DimensionModel,
    kappa: &WeightPoint,
    count: usize,
    opts: &SlopeOptions,
) -> Result<SlopeSequence> {
    kappa.validate(&model.params)?;
    let v_min = kappa.min_profile(&model.params);
    certified_slopes(
        model,
        count,
        &v_min,
        Some(kappa.clone()),
        |i_top| valuation_sequence(model, kappa, i_top),
        opts,
    )
}

/// Slopes of the polygon of `(i, deg g_i)`, the reduction of `G` with respect to `w`.
pub fn wadic_slopes(model: &DimensionModel, count: usize) -> Result<SlopeSequence> {
    wadic_slopes_with(model, count, &SlopeOptions::default())
}

pub fn wadic_slopes_with(model: &DimensionModel, count: usize, opts: &SlopeOptions) -> Result<SlopeSequence> {
    certified_slopes(
        model,
        count,
        &int(1),
        None,
        |i_top| Ok(degree_sequence(model, i_top)?.into_iter().map(ExtRational::from_int).collect()),
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension_models::build_gamma0_model;
    use crate::rational::frac;

    fn pts(v: &[(i64, Option<i64>)]) -> Vec<(i64, ExtRational)> {
        v.iter().map(|&(x, y)| (x, y.map_or(ExtRational::Infinity, ExtRational::from_int))).collect()
    }

    #[test]
    fn polygon_from_slopes() {
        let s: Vec<Rational> = [1, 5, 5, 5, 10].map(int).to_vec();
        let np = NewtonPolygon::from_slopes(int(0), &s);
        assert_eq!(np.vertices, vec![(0, int(0)), (1, int(1)), (4, int(16)), (5, int(26))]);
        assert_eq!(np.slope_list(), s);
        assert!(NewtonPolygon::from_slopes(int(0), &[]).slopes.is_empty());
    }

    #[test]
    fn hull_examples() {
        let h = lower_hull(&pts(&[(0, Some(0)), (1, Some(1)), (2, Some(3))])).unwrap();
        assert_eq!(h.slopes, vec![(int(1), 1), (int(2), 1)]);

        let h = lower_hull(&pts(&[(0, Some(0)), (1, Some(1)), (2, None), (3, None), (4, Some(16))])).unwrap();
        assert_eq!(h.vertices, vec![(0, int(0)), (1, int(1)), (4, int(16))]);
        assert_eq!(h.slopes, vec![(int(1), 1), (int(5), 3)]);

        let h = lower_hull(&pts(&[(0, Some(0)), (1, Some(5)), (2, Some(4))])).unwrap();
        assert_eq!(h.slopes, vec![(int(2), 2)]);

        assert!(matches!(lower_hull(&[]), Err(GhostError::EmptyInput)));
    }

    #[test]
    fn collinear_points_merge() {
        let h = lower_hull(&pts(&[(0, Some(0)), (1, Some(2)), (2, Some(4)), (3, Some(7))])).unwrap();
        assert_eq!(h.slopes, vec![(int(2), 2), (int(3), 1)]);
        assert_eq!(
            h,
            lower_hull_quadratic(&pts(&[(0, Some(0)), (1, Some(2)), (2, Some(4)), (3, Some(7))])).unwrap()
        );
    }

    #[test]
    fn integer_weight_example() {
        let m = build_gamma0_model(5, 1, 0).unwrap();
        let s = ghost_slopes(&m, &WeightPoint::Integer(12), 5).unwrap();
        assert!(s.certified);
        assert_eq!(s.slopes, [1, 5, 5, 5, 10].map(int).to_vec());
        assert!(ghost_slopes(&m, &WeightPoint::Integer(12), 0).is_err());
    }

    #[test]
    fn boundary_is_scaled_wadic() {
        let m = build_gamma0_model(5, 1, 0).unwrap();
        let w = wadic_slopes(&m, 100).unwrap();
        assert!(w.certified);
        assert_eq!(w.slopes[0], int(1));
        for v in [frac(1, 3), frac(1, 2), frac(3, 4)] {
            let s = ghost_slopes(&m, &WeightPoint::Boundary(v.clone()), 100).unwrap();
            assert!(s.certified);
            let scaled: Vec<Rational> = w.slopes.iter().map(|x| x * &v).collect();
            assert_eq!(s.slopes, scaled);
        }
    }

    #[test]
    fn certified_slopes_stable_under_larger_window() {
        let m = build_gamma0_model(7, 1, 2).unwrap();
        for kappa in [
            WeightPoint::Integer(2 + 6 * 20),
            WeightPoint::NearInteger { k_plus: 14, alpha: frac(7, 3) },
            WeightPoint::Boundary(frac(1, 5)),
        ] {
            let s = ghost_slopes(&m, &kappa, 40).unwrap();
            assert!(s.certified, "{kappa}");
            let opts = SlopeOptions { initial_index: 2 * s.index_bound, ..SlopeOptions::default() };
            let again = ghost_slopes_with(&m, &kappa, 40, &opts).unwrap();
            assert_eq!(s.slopes, again.slopes, "{kappa}");
            assert!(s.slopes.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn uncertified_when_window_capped() {
        let m = build_gamma0_model(5, 1, 0).unwrap();
        let opts = SlopeOptions { initial_index: 4, max_index: 4 };
        let s = ghost_slopes_with(&m, &WeightPoint::Integer(40), 10, &opts).unwrap();
        assert!(!s.certified);
    }

    #[test]
    fn semistable_block_is_flat() {
        let m = build_gamma0_model(5, 1, 0).unwrap();
        for n in [3, 10, 25] {
            let k = m.params.k_n(n);
            let (d, dsum) = (m.d(n), m.dsum(n));
            let s = ghost_slopes(&m, &WeightPoint::Integer(k), dsum as usize).unwrap();
            let block = &s.slopes[d as usize..dsum as usize];
            assert!(block.iter().all(|x| *x == block[0]), "n = {n}");
        }
    }
}
