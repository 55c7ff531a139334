//! Derived indicator constructions that run upstream of the panel: disaster
//! damages as a share of GDP, the social capital composite, annualized food
//! coping prevalence, and the urban-food-policy population share.

use alloc::vec::Vec;
use core::fmt;

use crate::kernels::{geometric_mean, KernelError};

/// Daily coping-prevalence threshold the upstream screening applies before
/// values reach [`rcsi_annual_prevalence`].
pub const RCSI_THRESHOLD: f64 = 19.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedError {
    /// GDP must be strictly positive.
    NonpositiveGdp,
    /// National urban population must be strictly positive.
    NonpositiveUrbanPop,
    /// A component that must be nonnegative is negative.
    NegativeComponent,
    /// The daily series has no entries.
    EmptySeries,
    /// Day ordinals must be strictly increasing.
    UnorderedSeries,
    /// A daily prevalence value lies outside [0, 100].
    PrevalenceOutOfRange,
}

impl fmt::Display for DerivedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedError::NonpositiveGdp => write!(f, "GDP must be positive"),
            DerivedError::NonpositiveUrbanPop => {
                write!(f, "national urban population must be positive")
            }
            DerivedError::NegativeComponent => write!(f, "component must be nonnegative"),
            DerivedError::EmptySeries => write!(f, "daily series is empty"),
            DerivedError::UnorderedSeries => {
                write!(f, "day ordinals must be strictly increasing")
            }
            DerivedError::PrevalenceOutOfRange => {
                write!(f, "daily prevalence outside [0, 100]")
            }
        }
    }
}

impl core::error::Error for DerivedError {}

/// Disaster damages as a percentage of GDP, both in the same currency.
pub fn disaster_damage_ratio(damages: f64, gdp: f64) -> Result<f64, DerivedError> {
    if !(gdp > 0.0) {
        return Err(DerivedError::NonpositiveGdp);
    }
    if damages < 0.0 {
        return Err(DerivedError::NegativeComponent);
    }
    Ok(damages / gdp * 100.0)
}

/// Social capital composite: geometric mean of four survey components on a
/// [0, 100] scale, reported on [0, 1]. Zero if any component is zero.
pub fn social_capital_index(components: &[f64; 4]) -> Result<f64, DerivedError> {
    let gm = geometric_mean(components).map_err(|e| match e {
        KernelError::NegativeComponent => DerivedError::NegativeComponent,
        // A fixed-size array is never empty.
        _ => unreachable!("geometric_mean over [f64; 4]"),
    })?;
    Ok(gm / 100.0)
}

/// One year of daily prevalence values (share of population at or above the
/// coping threshold), keyed by day-of-year ordinal. Ordinals are strictly
/// increasing; values live in [0, 100]. Gaps are fine.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    entries: Vec<(u16, f64)>,
}

impl DailySeries {
    pub fn new(entries: Vec<(u16, f64)>) -> Result<Self, DerivedError> {
        for pair in entries.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(DerivedError::UnorderedSeries);
            }
        }
        if entries.iter().any(|&(_, v)| !(0.0..=100.0).contains(&v)) {
            return Err(DerivedError::PrevalenceOutOfRange);
        }
        Ok(DailySeries { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, v)| v)
    }
}

/// Annual prevalence: the maximum of the year's daily values.
pub fn rcsi_annual_prevalence(days: &DailySeries) -> Result<f64, DerivedError> {
    days.values()
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |m| m.max(v)))
        })
        .ok_or(DerivedError::EmptySeries)
}

/// Share of the national urban population covered by signatory cities, in
/// percent, clamped to 100.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UrbanShare {
    pub percent: f64,
    /// True when the raw city total exceeded the national urban population
    /// (stale city figures); the share was clamped.
    pub clamped: bool,
}

/// Sums signatory-city populations against the national urban population.
/// City populations must be nonnegative; a total above the national figure
/// clamps to 100 and flags the result rather than failing.
pub fn mufpp_urban_share(city_pops: &[f64], urban_pop: f64) -> Result<UrbanShare, DerivedError> {
    if !(urban_pop > 0.0) {
        return Err(DerivedError::NonpositiveUrbanPop);
    }
    if city_pops.iter().any(|&p| p < 0.0) {
        return Err(DerivedError::NegativeComponent);
    }
    let percent = city_pops.iter().sum::<f64>() / urban_pop * 100.0;
    if percent > 100.0 {
        Ok(UrbanShare {
            percent: 100.0,
            clamped: true,
        })
    } else {
        Ok(UrbanShare {
            percent,
            clamped: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn damage_ratio_in_percent() {
        assert_relative_eq!(disaster_damage_ratio(5_000.0, 2_000_000.0).unwrap(), 0.25);
        assert_eq!(disaster_damage_ratio(1.0, 0.0), Err(DerivedError::NonpositiveGdp));
        assert_eq!(disaster_damage_ratio(1.0, -5.0), Err(DerivedError::NonpositiveGdp));
        assert_eq!(
            disaster_damage_ratio(-1.0, 5.0),
            Err(DerivedError::NegativeComponent)
        );
    }

    #[test]
    fn social_capital_on_unit_scale() {
        let idx = social_capital_index(&[25.0, 50.0, 75.0, 100.0]).unwrap();
        assert_relative_eq!(idx, 0.55334, max_relative = 2e-5);
        assert_eq!(social_capital_index(&[0.0, 50.0, 75.0, 100.0]).unwrap(), 0.0);
        assert_eq!(
            social_capital_index(&[-1.0, 50.0, 75.0, 100.0]),
            Err(DerivedError::NegativeComponent)
        );
    }

    #[test]
    fn annual_prevalence_is_the_daily_maximum() {
        let days = DailySeries::new(vec![(1, 10.0), (2, 35.5), (3, 22.0)]).unwrap();
        assert_relative_eq!(rcsi_annual_prevalence(&days).unwrap(), 35.5);
        let empty = DailySeries::new(vec![]).unwrap();
        assert_eq!(rcsi_annual_prevalence(&empty), Err(DerivedError::EmptySeries));
    }

    #[test]
    fn daily_series_validates_entries() {
        assert_eq!(
            DailySeries::new(vec![(5, 1.0), (5, 2.0)]),
            Err(DerivedError::UnorderedSeries)
        );
        assert_eq!(
            DailySeries::new(vec![(5, 1.0), (3, 2.0)]),
            Err(DerivedError::UnorderedSeries)
        );
        assert_eq!(
            DailySeries::new(vec![(1, 101.0)]),
            Err(DerivedError::PrevalenceOutOfRange)
        );
        assert_eq!(
            DailySeries::new(vec![(1, -0.5)]),
            Err(DerivedError::PrevalenceOutOfRange)
        );
    }

    #[test]
    fn urban_share_and_clamping() {
        let share = mufpp_urban_share(&[1_200_000.0, 800_000.0], 10_000_000.0).unwrap();
        assert_relative_eq!(share.percent, 20.0);
        assert!(!share.clamped);

        let clamped = mufpp_urban_share(&[9e6, 3e6], 10e6).unwrap();
        assert_eq!(clamped.percent, 100.0);
        assert!(clamped.clamped);

        assert_eq!(
            mufpp_urban_share(&[1.0], 0.0),
            Err(DerivedError::NonpositiveUrbanPop)
        );
        assert_eq!(
            mufpp_urban_share(&[-1.0], 10.0),
            Err(DerivedError::NegativeComponent)
        );
        // No cities: a share of zero, not an error.
        assert_eq!(mufpp_urban_share(&[], 10.0).unwrap().percent, 0.0);
    }

    proptest! {
        /// The annual prevalence equals some daily value and dominates all
        /// of them.
        #[test]
        fn annual_prevalence_is_attained(
            values in proptest::collection::vec(0.0f64..=100.0, 1..366),
        ) {
            let entries: Vec<(u16, f64)> =
                values.iter().enumerate().map(|(i, &v)| (i as u16 + 1, v)).collect();
            let days = DailySeries::new(entries).unwrap();
            let annual = rcsi_annual_prevalence(&days).unwrap();
            prop_assert!(values.iter().all(|&v| v <= annual));
            prop_assert!(values.contains(&annual));
        }

        /// Social capital stays on [0, 1] for in-range components.
        #[test]
        fn social_capital_bounded(
            a in 0.0f64..=100.0, b in 0.0f64..=100.0,
            c in 0.0f64..=100.0, d in 0.0f64..=100.0,
        ) {
            let idx = social_capital_index(&[a, b, c, d]).unwrap();
            prop_assert!((0.0..=1.0).contains(&idx));
        }

        /// The urban share is monotone in the city list and always in
        /// [0, 100].
        #[test]
        fn urban_share_monotone_and_bounded(
            cities in proptest::collection::vec(0.0f64..5e6, 0..12),
            urban in 1e5f64..5e7,
        ) {
            let share = mufpp_urban_share(&cities, urban).unwrap();
            prop_assert!((0.0..=100.0).contains(&share.percent));
            let mut more = cities.clone();
            more.push(1e5);
            let bigger = mufpp_urban_share(&more, urban).unwrap();
            prop_assert!(bigger.percent >= share.percent);
        }
    }
}
