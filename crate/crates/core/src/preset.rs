use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Color;

/// The two coloring pipelines: 4 colors for triangle-free planar graphs and
/// 6 colors for planar graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "4col")]
    FourColor,
    #[serde(rename = "6col")]
    SixColor,
}

/// Parameters of the partition program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionParams {
    pub cycle_len_max: usize,
    pub deg_threshold: usize,
    pub collect_radius: usize,
    pub iterations: usize,
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl PartitionParams {
    pub fn four_coloring(n: usize) -> Self {
        PartitionParams {
            cycle_len_max: 4,
            deg_threshold: 4,
            collect_radius: 3,
            iterations: 1 + 70 * ceil_log2(n),
        }
    }

    pub fn six_coloring(n: usize) -> Self {
        PartitionParams {
            cycle_len_max: 10,
            deg_threshold: 6,
            collect_radius: 6,
            iterations: 1 + 700 * ceil_log2(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cycle_len_max < 3 {
            return Err(Error::Input("cycle_len_max must be >= 3".into()));
        }
        if self.collect_radius < self.cycle_len_max / 2 + 1 {
            return Err(Error::Input(format!(
                "collect_radius {} cannot see cycles of length {}",
                self.collect_radius, self.cycle_len_max
            )));
        }
        if self.iterations == 0 {
            return Err(Error::Input("iterations must be positive".into()));
        }
        Ok(())
    }

    /// Engine rounds spent per iteration: the flood plus two label exchanges.
    pub fn rounds_per_iteration(&self) -> usize {
        self.collect_radius + 2
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::FourColor => "4col",
            Preset::SixColor => "6col",
        }
    }

    pub fn partition_params(self, n: usize) -> PartitionParams {
        match self {
            Preset::FourColor => PartitionParams::four_coloring(n),
            Preset::SixColor => PartitionParams::six_coloring(n),
        }
    }

    pub fn palette(self) -> Color {
        match self {
            Preset::FourColor => 4,
            Preset::SixColor => 6,
        }
    }

    /// Colors available for synchronizing low-degree vertices of one level.
    pub fn phase_two_palette(self) -> u64 {
        self.palette() as u64 + 1
    }

    /// Upper bound on the super-graph palette: `4^5` or `6^11`.
    pub fn super_palette(self) -> u64 {
        match self {
            Preset::FourColor => 4u64.pow(5),
            Preset::SixColor => 6u64.pow(11),
        }
    }

    /// Radius within which a vertex looks for keys that contain it.
    pub fn pair_radius(self) -> usize {
        match self {
            Preset::FourColor => 2,
            Preset::SixColor => 5,
        }
    }

    /// Radius of the neighborhood collected before coloring a cycle.
    pub fn view_radius(self) -> usize {
        match self {
            Preset::FourColor => 3,
            Preset::SixColor => 11,
        }
    }

    /// Distance bound between representatives of adjacent super-graph nodes.
    pub fn key_span(self) -> usize {
        let l = self.partition_params(2).cycle_len_max;
        2 * (l / 2) + 1
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4col" => Ok(Preset::FourColor),
            "6col" => Ok(Preset::SixColor),
            _ => Err(Error::Input(format!("unknown preset {s:?}; use 4col or 6col"))),
        }
    }
}
