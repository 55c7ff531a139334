//! Domain model: indicator and country metadata, the observation panel, and
//! weight resolution.
//!
//! A [`Panel`] is a long-format store of `(country, indicator, year, value)`
//! observations. Auxiliary series used as analytic weights (population, GDP,
//! land area, ...) live in the same panel under reserved indicator ids with a
//! leading underscore, so they ride the exact same ingestion path as the
//! substantive series.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Observations before this year are never stored.
pub const MIN_YEAR: i32 = 1960;

/// Desirable direction of an indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

impl Direction {
    /// Sign used when aligning deviations with the desirable direction:
    /// +1 when higher values are better, -1 when lower values are better.
    pub fn sign(self) -> f64 {
        match self {
            Direction::HigherBetter => 1.0,
            Direction::LowerBetter => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::HigherBetter => "higher",
            Direction::LowerBetter => "lower",
        }
    }
}

impl FromStr for Direction {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s {
            "higher" => Ok(Direction::HigherBetter),
            "lower" => Ok(Direction::LowerBetter),
            other => Err(ModelError::UnknownDirection(other.into())),
        }
    }
}

/// Thematic area an indicator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theme {
    Diets,
    Environment,
    Livelihoods,
    Governance,
    Resilience,
}

impl Theme {
    pub fn label(self) -> &'static str {
        match self {
            Theme::Diets => "diets",
            Theme::Environment => "environment",
            Theme::Livelihoods => "livelihoods",
            Theme::Governance => "governance",
            Theme::Resilience => "resilience",
        }
    }
}

impl FromStr for Theme {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s {
            "diets" => Ok(Theme::Diets),
            "environment" => Ok(Theme::Environment),
            "livelihoods" => Ok(Theme::Livelihoods),
            "governance" => Ok(Theme::Governance),
            "resilience" => Ok(Theme::Resilience),
            other => Err(ModelError::UnknownTheme(other.into())),
        }
    }
}

/// Which auxiliary series weights an indicator's aggregates.
///
/// The two `AgriculturalLand*` keys read the same reserved series but pin the
/// observation year to a fixed vintage before applying the usual fallback
/// chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKey {
    Population,
    Gdp,
    UrbanPopulation,
    LandArea,
    Cropland,
    AgriculturalLand2015,
    AgriculturalLand2010,
    AreaHarvested,
    ProducingAnimals,
    AnimalsSlaughtered,
    /// Equal weights: every country counts 1.
    None,
}

impl WeightKey {
    /// Reserved panel id carrying this key's weight series, plus the fixed
    /// year for pinned-vintage keys. `None` (equal weights) has no series.
    pub fn reserved_series(self) -> Option<(&'static str, Option<i32>)> {
        match self {
            WeightKey::Population => Some(("_population", None)),
            WeightKey::Gdp => Some(("_gdp", None)),
            WeightKey::UrbanPopulation => Some(("_urban_population", None)),
            WeightKey::LandArea => Some(("_land_area", None)),
            WeightKey::Cropland => Some(("_cropland", None)),
            WeightKey::AgriculturalLand2015 => Some(("_agricultural_land", Some(2015))),
            WeightKey::AgriculturalLand2010 => Some(("_agricultural_land", Some(2010))),
            WeightKey::AreaHarvested => Some(("_area_harvested", None)),
            WeightKey::ProducingAnimals => Some(("_producing_animals", None)),
            WeightKey::AnimalsSlaughtered => Some(("_animals_slaughtered", None)),
            WeightKey::None => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WeightKey::Population => "population",
            WeightKey::Gdp => "gdp",
            WeightKey::UrbanPopulation => "urban_population",
            WeightKey::LandArea => "land_area",
            WeightKey::Cropland => "cropland",
            WeightKey::AgriculturalLand2015 => "agricultural_land_2015",
            WeightKey::AgriculturalLand2010 => "agricultural_land_2010",
            WeightKey::AreaHarvested => "area_harvested",
            WeightKey::ProducingAnimals => "producing_animals",
            WeightKey::AnimalsSlaughtered => "animals_slaughtered",
            WeightKey::None => "none",
        }
    }
}

impl FromStr for WeightKey {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s {
            "population" => Ok(WeightKey::Population),
            "gdp" => Ok(WeightKey::Gdp),
            "urban_population" => Ok(WeightKey::UrbanPopulation),
            "land_area" => Ok(WeightKey::LandArea),
            "cropland" => Ok(WeightKey::Cropland),
            "agricultural_land_2015" => Ok(WeightKey::AgriculturalLand2015),
            "agricultural_land_2010" => Ok(WeightKey::AgriculturalLand2010),
            "area_harvested" => Ok(WeightKey::AreaHarvested),
            "producing_animals" => Ok(WeightKey::ProducingAnimals),
            "animals_slaughtered" => Ok(WeightKey::AnimalsSlaughtered),
            "none" => Ok(WeightKey::None),
            other => Err(ModelError::UnknownWeightKey(other.into())),
        }
    }
}

/// World Bank income classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IncomeGroup {
    Low,
    LowerMiddle,
    UpperMiddle,
    High,
}

impl IncomeGroup {
    pub const ALL: [IncomeGroup; 4] = [
        IncomeGroup::Low,
        IncomeGroup::LowerMiddle,
        IncomeGroup::UpperMiddle,
        IncomeGroup::High,
    ];

    pub fn label(self) -> &'static str {
        match self {
            IncomeGroup::Low => "Low income",
            IncomeGroup::LowerMiddle => "Lower middle income",
            IncomeGroup::UpperMiddle => "Upper middle income",
            IncomeGroup::High => "High income",
        }
    }
}

impl FromStr for IncomeGroup {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s {
            "Low income" => Ok(IncomeGroup::Low),
            "Lower middle income" => Ok(IncomeGroup::LowerMiddle),
            "Upper middle income" => Ok(IncomeGroup::UpperMiddle),
            "High income" => Ok(IncomeGroup::High),
            other => Err(ModelError::UnknownIncomeGroup(other.into())),
        }
    }
}

/// UN SDG regional grouping (M49-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    LatinAmericaCaribbean,
    NorthernAmericaEurope,
    Oceania,
    NorthernAfricaWesternAsia,
    CentralAsia,
    EasternAsia,
    SouthEasternAsia,
    SouthernAsia,
    SubSaharanAfrica,
}

impl Region {
    pub const ALL: [Region; 9] = [
        Region::LatinAmericaCaribbean,
        Region::NorthernAmericaEurope,
        Region::Oceania,
        Region::NorthernAfricaWesternAsia,
        Region::CentralAsia,
        Region::EasternAsia,
        Region::SouthEasternAsia,
        Region::SouthernAsia,
        Region::SubSaharanAfrica,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Region::LatinAmericaCaribbean => "Latin America & Caribbean",
            Region::NorthernAmericaEurope => "Northern America & Europe",
            Region::Oceania => "Oceania",
            Region::NorthernAfricaWesternAsia => "Northern Africa & Western Asia",
            Region::CentralAsia => "Central Asia",
            Region::EasternAsia => "Eastern Asia",
            Region::SouthEasternAsia => "South-eastern Asia",
            Region::SouthernAsia => "Southern Asia",
            Region::SubSaharanAfrica => "Sub-Saharan Africa",
        }
    }
}

impl FromStr for Region {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        Region::ALL
            .iter()
            .copied()
            .find(|r| r.label() == s)
            .ok_or_else(|| ModelError::UnknownRegion(s.into()))
    }
}

/// Grouping dimension used by the descriptive tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    Region,
    Income,
}

impl Grouping {
    /// Cell labels in presentation order.
    pub fn cells(self) -> Vec<&'static str> {
        match self {
            Grouping::Region => Region::ALL.iter().map(|r| r.label()).collect(),
            Grouping::Income => IncomeGroup::ALL.iter().map(|g| g.label()).collect(),
        }
    }

    /// Cell a country falls into.
    pub fn cell_of(self, meta: &CountryMeta) -> &'static str {
        match self {
            Grouping::Region => meta.region.label(),
            Grouping::Income => meta.income_group.label(),
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Grouping::Region => "region",
            Grouping::Income => "income",
        }
    }
}

/// One codebook row.
#[derive(Debug, Clone)]
pub struct IndicatorMeta {
    pub id: String,
    pub name: String,
    pub unit: String,
    pub theme: Theme,
    pub domain: String,
    pub direction: Direction,
    pub weight_key: WeightKey,
    pub value_added: bool,
}

/// One country-table row.
#[derive(Debug, Clone)]
pub struct CountryMeta {
    pub iso3: String,
    pub name: String,
    pub region: Region,
    pub income_group: IncomeGroup,
    pub un_member: bool,
}

/// Codebook: indicator metadata in file order with id lookup.
#[derive(Debug, Clone, Default)]
pub struct IndicatorRegistry {
    metas: Vec<IndicatorMeta>,
    index: BTreeMap<String, usize>,
}

impl IndicatorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a codebook row. Ids must be unique and must not use the
    /// reserved leading-underscore namespace of auxiliary series.
    pub fn insert(&mut self, meta: IndicatorMeta) -> Result<(), ModelError> {
        if meta.id.starts_with('_') {
            return Err(ModelError::ReservedIndicatorId(meta.id));
        }
        if self.index.contains_key(&meta.id) {
            return Err(ModelError::DuplicateIndicatorId(meta.id));
        }
        self.index.insert(meta.id.clone(), self.metas.len());
        self.metas.push(meta);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&IndicatorMeta> {
        self.index.get(id).map(|&i| &self.metas[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Iterates in codebook (file) order.
    pub fn iter(&self) -> core::slice::Iter<'_, IndicatorMeta> {
        self.metas.iter()
    }

    pub fn len(&self) -> usize {
        self.metas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metas.is_empty()
    }
}

/// Country metadata in file order with iso3 lookup.
#[derive(Debug, Clone, Default)]
pub struct CountryTable {
    rows: Vec<CountryMeta>,
    index: BTreeMap<String, usize>,
}

impl CountryTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, meta: CountryMeta) -> Result<(), ModelError> {
        if self.index.contains_key(&meta.iso3) {
            return Err(ModelError::DuplicateCountry(meta.iso3));
        }
        self.index.insert(meta.iso3.clone(), self.rows.len());
        self.rows.push(meta);
        Ok(())
    }

    pub fn get(&self, iso3: &str) -> Option<&CountryMeta> {
        self.index.get(iso3).map(|&i| &self.rows[i])
    }

    pub fn contains(&self, iso3: &str) -> bool {
        self.index.contains_key(iso3)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, CountryMeta> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// One long-format observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub iso3: String,
    pub indicator: String,
    pub year: i32,
    pub value: f64,
}

/// Long-format observation store: indicator -> country -> year -> value.
///
/// `(country, indicator, year)` is unique; values are finite; years are
/// `>= MIN_YEAR`. All three invariants are enforced on insert.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Panel {
    series: BTreeMap<String, BTreeMap<String, BTreeMap<i32, f64>>>,
    count: usize,
}

impl Panel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, obs: Observation) -> Result<(), ModelError> {
        if !obs.value.is_finite() {
            return Err(ModelError::NonFiniteValue {
                iso3: obs.iso3,
                indicator: obs.indicator,
                year: obs.year,
            });
        }
        if obs.year < MIN_YEAR {
            return Err(ModelError::YearBeforeMinimum { year: obs.year });
        }
        let years = self
            .series
            .entry(obs.indicator.clone())
            .or_default()
            .entry(obs.iso3.clone())
            .or_default();
        if years.contains_key(&obs.year) {
            return Err(ModelError::DuplicateCell {
                iso3: obs.iso3,
                indicator: obs.indicator,
                year: obs.year,
            });
        }
        years.insert(obs.year, obs.value);
        self.count += 1;
        Ok(())
    }

    /// Year-indexed series for one (indicator, country), if any.
    pub fn series(&self, indicator: &str, iso3: &str) -> Option<&BTreeMap<i32, f64>> {
        self.series.get(indicator).and_then(|m| m.get(iso3))
    }

    /// All per-country series of one indicator, keyed by iso3.
    pub fn indicator(&self, indicator: &str) -> Option<&BTreeMap<String, BTreeMap<i32, f64>>> {
        self.series.get(indicator)
    }

    pub fn has_indicator(&self, indicator: &str) -> bool {
        self.series.get(indicator).is_some_and(|m| !m.is_empty())
    }

    /// Indicator ids present in the panel, in sorted order.
    pub fn indicator_ids(&self) -> impl Iterator<Item = &str> {
        self.series.keys().map(String::as_str)
    }

    /// Number of stored observations.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Merges two panels, re-checking cell uniqueness. Order of arguments
    /// does not affect the result (the union is a plain set union).
    pub fn union(mut self, other: Panel) -> Result<Panel, ModelError> {
        for (indicator, countries) in other.series {
            for (iso3, years) in countries {
                for (year, value) in years {
                    self.insert(Observation {
                        iso3: iso3.clone(),
                        indicator: indicator.clone(),
                        year,
                        value,
                    })?;
                }
            }
        }
        Ok(self)
    }
}

/// Resolves the analytic weight for one country at one observation year.
///
/// Fixed-vintage keys first pin the anchor year, then all keys follow the
/// same chain: value at the anchor year, else the latest value before it,
/// else the latest value overall. `Ok(None)` means the country has no value
/// in the weight series at all (callers pairwise-delete it);
/// `MissingWeightSeries` means the panel lacks the series entirely.
pub fn resolve_weight(
    key: WeightKey,
    panel: &Panel,
    iso3: &str,
    obs_year: i32,
) -> Result<Option<f64>, ModelError> {
    let Some((series_id, fixed_year)) = key.reserved_series() else {
        return Ok(Some(1.0)); // equal weights
    };
    if !panel.has_indicator(series_id) {
        return Err(ModelError::MissingWeightSeries(key));
    }
    let Some(series) = panel.series(series_id, iso3) else {
        return Ok(None);
    };
    let anchor = fixed_year.unwrap_or(obs_year);
    let value = match series.range(..=anchor).next_back() {
        Some((_, v)) => *v,
        None => *series.values().next_back().expect("series is nonempty"),
    };
    Ok(Some(value))
}

/// Resolves weights for every country in the table at a common observation
/// year. Countries with no value in the weight series are omitted.
pub fn resolve_weight_series(
    key: WeightKey,
    panel: &Panel,
    countries: &CountryTable,
    obs_year: i32,
) -> Result<BTreeMap<String, f64>, ModelError> {
    let mut out = BTreeMap::new();
    for meta in countries.iter() {
        if let Some(w) = resolve_weight(key, panel, &meta.iso3, obs_year)? {
            out.insert(meta.iso3.clone(), w);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    DuplicateCell {
        iso3: String,
        indicator: String,
        year: i32,
    },
    NonFiniteValue {
        iso3: String,
        indicator: String,
        year: i32,
    },
    YearBeforeMinimum {
        year: i32,
    },
    UnknownDirection(String),
    UnknownTheme(String),
    UnknownWeightKey(String),
    UnknownRegion(String),
    UnknownIncomeGroup(String),
    DuplicateIndicatorId(String),
    ReservedIndicatorId(String),
    DuplicateCountry(String),
    UnknownIndicator(String),
    UnknownCountry(String),
    MissingWeightSeries(WeightKey),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DuplicateCell {
                iso3,
                indicator,
                year,
            } => write!(f, "duplicate observation for {iso3}/{indicator}/{year}"),
            ModelError::NonFiniteValue {
                iso3,
                indicator,
                year,
            } => write!(f, "non-finite value for {iso3}/{indicator}/{year}"),
            ModelError::YearBeforeMinimum { year } => {
                write!(f, "year {year} is before the {MIN_YEAR} panel floor")
            }
            ModelError::UnknownDirection(s) => write!(f, "unknown direction {s:?}"),
            ModelError::UnknownTheme(s) => write!(f, "unknown theme {s:?}"),
            ModelError::UnknownWeightKey(s) => write!(f, "unknown weight key {s:?}"),
            ModelError::UnknownRegion(s) => write!(f, "unknown region {s:?}"),
            ModelError::UnknownIncomeGroup(s) => write!(f, "unknown income group {s:?}"),
            ModelError::DuplicateIndicatorId(s) => write!(f, "duplicate indicator id {s:?}"),
            ModelError::ReservedIndicatorId(s) => write!(
                f,
                "indicator id {s:?} uses the reserved leading-underscore namespace"
            ),
            ModelError::DuplicateCountry(s) => write!(f, "duplicate country {s:?}"),
            ModelError::UnknownIndicator(s) => write!(f, "unknown indicator {s:?}"),
            ModelError::UnknownCountry(s) => write!(f, "unknown country {s:?}"),
            ModelError::MissingWeightSeries(k) => {
                write!(f, "panel has no {:?} series for weight key {}", k, k.label())
            }
        }
    }
}

impl core::error::Error for ModelError {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn obs(iso3: &str, indicator: &str, year: i32, value: f64) -> Observation {
        Observation {
            iso3: iso3.into(),
            indicator: indicator.into(),
            year,
            value,
        }
    }

    fn weight_panel(entries: &[(i32, f64)]) -> Panel {
        let mut panel = Panel::new();
        for &(year, value) in entries {
            panel.insert(obs("KEN", "_agricultural_land", year, value)).unwrap();
            // A second series under a different id exercises the generic chain.
            panel.insert(obs("KEN", "_population", year, value)).unwrap();
        }
        panel
    }

    #[test]
    fn panel_rejects_duplicates_and_bad_values() {
        let mut panel = Panel::new();
        panel.insert(obs("KEN", "mdd_w", 2015, 40.0)).unwrap();
        assert_eq!(
            panel.insert(obs("KEN", "mdd_w", 2015, 40.0)),
            Err(ModelError::DuplicateCell {
                iso3: "KEN".into(),
                indicator: "mdd_w".into(),
                year: 2015,
            })
        );
        assert!(matches!(
            panel.insert(obs("KEN", "mdd_w", 1200, 1.0)),
            Err(ModelError::YearBeforeMinimum { year: 1200 })
        ));
        assert!(matches!(
            panel.insert(obs("KEN", "mdd_w", 2016, f64::NAN)),
            Err(ModelError::NonFiniteValue { .. })
        ));
        assert_eq!(panel.len(), 1);
    }

    #[test]
    fn union_rechecks_uniqueness() {
        let mut a = Panel::new();
        a.insert(obs("KEN", "x", 2001, 1.0)).unwrap();
        let mut b = Panel::new();
        b.insert(obs("KEN", "x", 2002, 2.0)).unwrap();
        let merged = a.clone().union(b).unwrap();
        assert_eq!(merged.len(), 2);

        let mut clash = Panel::new();
        clash.insert(obs("KEN", "x", 2001, 9.0)).unwrap();
        assert!(matches!(
            a.union(clash),
            Err(ModelError::DuplicateCell { .. })
        ));
    }

    #[test]
    fn fixed_vintage_key_ignores_observation_year() {
        let panel = weight_panel(&[(2010, 50.0), (2015, 60.0), (2019, 70.0)]);
        let w = resolve_weight(WeightKey::AgriculturalLand2015, &panel, "KEN", 2019).unwrap();
        assert_eq!(w, Some(60.0));
        let w = resolve_weight(WeightKey::AgriculturalLand2010, &panel, "KEN", 2019).unwrap();
        assert_eq!(w, Some(50.0));
    }

    #[test]
    fn weight_chain_prefers_exact_then_earlier_then_latest() {
        let panel = weight_panel(&[(2018, 10.0), (2020, 10.4)]);
        // Exact year missing: latest earlier year wins.
        assert_eq!(
            resolve_weight(WeightKey::Population, &panel, "KEN", 2019).unwrap(),
            Some(10.0)
        );
        // Exact year present.
        assert_eq!(
            resolve_weight(WeightKey::Population, &panel, "KEN", 2020).unwrap(),
            Some(10.4)
        );
        // Nothing at or before the anchor: latest overall.
        assert_eq!(
            resolve_weight(WeightKey::Population, &panel, "KEN", 2015).unwrap(),
            Some(10.4)
        );
    }

    #[test]
    fn missing_series_vs_missing_country() {
        let panel = weight_panel(&[(2018, 10.0)]);
        // Country absent from an existing series: pairwise-deletable.
        assert_eq!(
            resolve_weight(WeightKey::Population, &panel, "FRA", 2018).unwrap(),
            None
        );
        // Series absent from the panel: hard error.
        assert_eq!(
            resolve_weight(WeightKey::Gdp, &panel, "KEN", 2018),
            Err(ModelError::MissingWeightSeries(WeightKey::Gdp))
        );
        // Equal weights need no series.
        assert_eq!(
            resolve_weight(WeightKey::None, &panel, "FRA", 2018).unwrap(),
            Some(1.0)
        );
    }

    #[test]
    fn registry_rejects_duplicate_and_reserved_ids() {
        let mut reg = IndicatorRegistry::new();
        let meta = IndicatorMeta {
            id: "mdd_w".into(),
            name: "Minimum dietary diversity".into(),
            unit: "percent".into(),
            theme: Theme::Diets,
            domain: "diet quality".into(),
            direction: Direction::HigherBetter,
            weight_key: WeightKey::Population,
            value_added: false,
        };
        reg.insert(meta.clone()).unwrap();
        assert_eq!(
            reg.insert(meta.clone()),
            Err(ModelError::DuplicateIndicatorId("mdd_w".into()))
        );
        let mut reserved = meta;
        reserved.id = "_population".into();
        assert_eq!(
            reg.insert(reserved),
            Err(ModelError::ReservedIndicatorId("_population".into()))
        );
        assert!(reg.get("mdd_w").is_some());
        assert_eq!(reg.len(), 1);
    }

    #[test]
    fn labels_round_trip() {
        for region in Region::ALL {
            assert_eq!(region.label().parse::<Region>().unwrap(), region);
        }
        for group in IncomeGroup::ALL {
            assert_eq!(group.label().parse::<IncomeGroup>().unwrap(), group);
        }
        for key in [
            "population",
            "gdp",
            "urban_population",
            "land_area",
            "cropland",
            "agricultural_land_2015",
            "agricultural_land_2010",
            "area_harvested",
            "producing_animals",
            "animals_slaughtered",
            "none",
        ] {
            assert_eq!(key.parse::<WeightKey>().unwrap().label(), key);
        }
        assert_eq!(
            "sideways".parse::<Direction>(),
            Err(ModelError::UnknownDirection("sideways".to_string()))
        );
    }

    #[test]
    fn grouping_cells_are_in_presentation_order() {
        let regions = Grouping::Region.cells();
        assert_eq!(regions.len(), 9);
        assert_eq!(regions[0], "Latin America & Caribbean");
        assert_eq!(regions[8], "Sub-Saharan Africa");
        let incomes = Grouping::Income.cells();
        assert_eq!(
            incomes,
            ["Low income", "Lower middle income", "Upper middle income", "High income"]
        );
    }
}
