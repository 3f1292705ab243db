//! Percentile curves counted from citation lists.
//!
//! The world top `x%` is the first `round(x N_w / 100)` papers of the world
//! list sorted by citations, zero-cited papers included. When the boundary
//! falls inside a run of equally cited papers, the run is resolved either
//! by a secondary citation count or by giving the actor the share of the
//! open slots that matches its share of the tied papers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lognormal::{validate_grid, CurvePoint, Percent, PercentileCurve};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: Option<String>,
    /// Citations in the counting window. Real-valued so that continuous
    /// synthetic samples can be ranked without rounding.
    pub citations: f64,
    /// Database-total citations, used to order ties.
    pub secondary_citations: Option<u64>,
    pub actor: Option<String>,
}

impl PaperRecord {
    pub fn new(citations: f64) -> Self {
        Self {
            citations,
            ..Self::default()
        }
    }

    pub fn with_secondary(mut self, secondary: u64) -> Self {
        self.secondary_citations = Some(secondary);
        self
    }

    pub fn with_actor(mut self, actor: impl Into<String>) -> Self {
        self.actor = Some(actor.into());
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CitationList {
    records: Vec<PaperRecord>,
}

impl CitationList {
    pub fn new(records: Vec<PaperRecord>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            if !(r.citations >= 0.0 && r.citations.is_finite()) {
                return Err(Error::InvalidRecord(format!(
                    "record {}: citations must be finite and nonnegative, got {}",
                    i + 1,
                    r.citations
                )));
            }
        }
        Ok(Self { records })
    }

    pub fn from_citations(citations: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::new(citations.into_iter().map(PaperRecord::new).collect())
    }

    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<PaperRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count_actor(&self, label: &str) -> usize {
        self.records
            .iter()
            .filter(|r| r.actor.as_deref() == Some(label))
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Order ties by secondary citations, then by input order.
    SecondaryKey,
    /// Apportion the open slots of a tie in proportion to tied papers.
    #[default]
    Proportional,
}

/// A maximal run of equally cited papers, by 1-based rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TieBlock {
    pub citation_value: f64,
    pub first_rank: usize,
    pub last_rank: usize,
}

impl TieBlock {
    pub fn len(&self) -> usize {
        self.last_rank - self.first_rank + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Which papers belong to the actor.
#[derive(Debug, Clone, Copy)]
pub enum ActorSelector<'a> {
    /// World records carrying this actor label.
    Label(&'a str),
    /// A separate list holding the actor's papers, all of which are also in
    /// the world list. Only the proportional policy is available.
    List(&'a CitationList),
}

/// Sorts by citations, highest first. Sorting is stable; under
/// [`TiePolicy::SecondaryKey`] ties are ordered by secondary citations
/// (missing values last).
pub fn rank_descending(list: &CitationList, policy: TiePolicy) -> CitationList {
    let mut records = list.records.clone();
    match policy {
        TiePolicy::Proportional => {
            records.sort_by(|a, b| b.citations.total_cmp(&a.citations));
        }
        TiePolicy::SecondaryKey => {
            records.sort_by(|a, b| {
                b.citations
                    .total_cmp(&a.citations)
                    .then_with(|| b.secondary_citations.cmp(&a.secondary_citations))
            });
        }
    }
    CitationList { records }
}

/// Tie blocks with two or more papers in a ranked list.
pub fn tie_blocks(ranked: &CitationList) -> Vec<TieBlock> {
    let mut blocks = Vec::new();
    let recs = ranked.records();
    let mut start = 0;
    while start < recs.len() {
        let value = recs[start].citations;
        let mut end = start + 1;
        while end < recs.len() && recs[end].citations == value {
            end += 1;
        }
        if end - start > 1 {
            blocks.push(TieBlock {
                citation_value: value,
                first_rank: start + 1,
                last_rank: end,
            });
        }
        start = end;
    }
    blocks
}

/// Number of world papers in the top `x%`: `x N / 100` rounded half up.
pub fn percentile_boundary(n_world: usize, x: Percent) -> usize {
    let exact = x.value() * n_world as f64 / 100.0;
    ((exact + 0.5).floor() as usize).min(n_world)
}

/// The actor count inside one world percentile, kept as integers so that
/// it can be compared exactly. Its value is
/// `certain + tied_actor * open_slots / tied_world`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Apportionment {
    /// Actor papers unambiguously inside the percentile.
    pub certain: u64,
    /// Actor papers in the tie block that straddles the boundary.
    pub tied_actor: u64,
    /// Boundary slots left for the straddling tie block.
    pub open_slots: u64,
    /// World papers in the straddling tie block.
    pub tied_world: u64,
}

impl Apportionment {
    fn whole(count: u64) -> Self {
        Self {
            certain: count,
            tied_actor: 0,
            open_slots: 0,
            tied_world: 1,
        }
    }

    pub fn value(&self) -> f64 {
        self.certain as f64
            + self.tied_actor as f64 * self.open_slots as f64 / self.tied_world as f64
    }

    /// `(numerator, denominator)` of the count.
    pub fn as_fraction(&self) -> (u64, u64) {
        (
            self.certain * self.tied_world + self.tied_actor * self.open_slots,
            self.tied_world,
        )
    }
}

/// World and actor citations prepared once for counting at many
/// percentiles.
#[derive(Debug, Clone)]
pub struct Counter {
    world_desc: Vec<f64>,
    actor_desc: Vec<f64>,
    /// Actor membership prefix sums over the secondary-key ordering.
    secondary_prefix: Option<Vec<u64>>,
    policy: TiePolicy,
}

impl Counter {
    pub fn new(world: &CitationList, actor: ActorSelector<'_>, policy: TiePolicy) -> Result<Self> {
        if world.is_empty() {
            return Err(Error::EmptyList);
        }
        let mut world_desc: Vec<f64> = world.records.iter().map(|r| r.citations).collect();
        world_desc.sort_by(|a, b| b.total_cmp(a));

        let (mut actor_desc, secondary_prefix) = match (actor, policy) {
            (ActorSelector::List(_), TiePolicy::SecondaryKey) => {
                return Err(Error::UnsupportedCombination(
                    "secondary-key ties need actor labels on the world list",
                ))
            }
            (ActorSelector::List(list), TiePolicy::Proportional) => (
                list.records.iter().map(|r| r.citations).collect::<Vec<_>>(),
                None,
            ),
            (ActorSelector::Label(label), _) => {
                let is_actor = |r: &PaperRecord| r.actor.as_deref() == Some(label);
                let desc: Vec<f64> = world
                    .records
                    .iter()
                    .filter(|r| is_actor(r))
                    .map(|r| r.citations)
                    .collect();
                let prefix = (policy == TiePolicy::SecondaryKey).then(|| {
                    let ranked = rank_descending(world, TiePolicy::SecondaryKey);
                    let mut prefix = Vec::with_capacity(ranked.len() + 1);
                    prefix.push(0u64);
                    let mut acc = 0;
                    for r in ranked.records() {
                        acc += u64::from(is_actor(r));
                        prefix.push(acc);
                    }
                    prefix
                });
                (desc, prefix)
            }
        };
        actor_desc.sort_by(|a, b| b.total_cmp(a));
        if let Some(c) = first_uncontained(&world_desc, &actor_desc) {
            return Err(Error::InvalidRecord(format!(
                "actor list is not contained in the world list: no world paper left with {c} citations"
            )));
        }
        Ok(Self {
            world_desc,
            actor_desc,
            secondary_prefix,
            policy,
        })
    }

    pub fn world_len(&self) -> usize {
        self.world_desc.len()
    }

    pub fn actor_len(&self) -> usize {
        self.actor_desc.len()
    }

    pub fn apportion(&self, x: Percent) -> Result<Apportionment> {
        let boundary = percentile_boundary(self.world_desc.len(), x);
        if boundary == 0 {
            return Ok(Apportionment::whole(0));
        }
        if let Some(prefix) = &self.secondary_prefix {
            return Ok(Apportionment::whole(prefix[boundary]));
        }
        debug_assert_eq!(self.policy, TiePolicy::Proportional);
        let c_star = self.world_desc[boundary - 1];
        let (w_hi, w_tie) = split_at_value(&self.world_desc, c_star);
        let (l_hi, l_tie) = split_at_value(&self.actor_desc, c_star);
        if l_hi > w_hi || l_tie > w_tie {
            return Err(Error::InvalidRecord(format!(
                "actor list is not contained in the world list at {c_star} citations"
            )));
        }
        Ok(Apportionment {
            certain: l_hi as u64,
            tied_actor: l_tie as u64,
            open_slots: (boundary - w_hi) as u64,
            tied_world: w_tie as u64,
        })
    }

    pub fn count(&self, x: Percent) -> Result<f64> {
        self.apportion(x).map(|a| a.value())
    }
}

// First actor citation value with no remaining world paper to match it.
// Both slices are sorted descending.
fn first_uncontained(world_desc: &[f64], actor_desc: &[f64]) -> Option<f64> {
    let mut w = world_desc.iter().peekable();
    for &c in actor_desc {
        while w.next_if(|&&v| v > c).is_some() {}
        if w.next_if(|&&v| v == c).is_none() {
            return Some(c);
        }
    }
    None
}

// (papers with more than `value` citations, papers with exactly `value`)
fn split_at_value(desc: &[f64], value: f64) -> (usize, usize) {
    let above = desc.partition_point(|&c| c > value);
    let at_or_above = desc.partition_point(|&c| c >= value);
    (above, at_or_above - above)
}

/// Actor papers among the world top `x%`.
pub fn count_in_percentile(
    world: &CitationList,
    actor: ActorSelector<'_>,
    x: Percent,
    policy: TiePolicy,
) -> Result<f64> {
    Counter::new(world, actor, policy)?.count(x)
}

/// Actor counts over a percentile grid.
pub fn build_curve(
    world: &CitationList,
    actor: ActorSelector<'_>,
    grid: &[f64],
    policy: TiePolicy,
) -> Result<PercentileCurve> {
    let grid = validate_grid(grid)?;
    let counter = Counter::new(world, actor, policy)?;
    let points = grid
        .into_iter()
        .map(|x| {
            Ok(CurvePoint {
                percentile: x.value(),
                count: counter.count(x)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PercentileCurve::new(points)
}
