use serde::Serialize;

use super::config::{ExperimentConfig, ModelKind};
use crate::error::{Error, Result};
use crate::group::SubgroupCount;
use crate::learn::{EncodingScheme, Loss, Optimizer};

/// Dataset builder a recipe drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuilderKind {
    CayleyVsLatin,
    UnseenGroup,
    Simplicity,
    SubgroupClasses,
    GroupIso,
    RingMatch,
    RingPartitions,
    RingCollection,
    EntryShift,
}

impl BuilderKind {
    pub const ALL: [BuilderKind; 9] = [
        BuilderKind::CayleyVsLatin,
        BuilderKind::UnseenGroup,
        BuilderKind::Simplicity,
        BuilderKind::SubgroupClasses,
        BuilderKind::GroupIso,
        BuilderKind::RingMatch,
        BuilderKind::RingPartitions,
        BuilderKind::RingCollection,
        BuilderKind::EntryShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuilderKind::CayleyVsLatin => "cayley-vs-latin",
            BuilderKind::UnseenGroup => "unseen-group",
            BuilderKind::Simplicity => "simplicity",
            BuilderKind::SubgroupClasses => "subgroup-classes",
            BuilderKind::GroupIso => "group-iso",
            BuilderKind::RingMatch => "ring-match",
            BuilderKind::RingPartitions => "ring-partitions",
            BuilderKind::RingCollection => "ring-collection",
            BuilderKind::EntryShift => "entry-shift",
        }
    }

    /// Recipe whose dataset defaults stand in for this builder's defaults.
    pub fn base_recipe(self) -> &'static str {
        match self {
            BuilderKind::CayleyVsLatin => "cayley-n8",
            BuilderKind::UnseenGroup => "unseen-n8",
            BuilderKind::Simplicity => "simplicity-desk",
            BuilderKind::SubgroupClasses => "subgroups-desk",
            BuilderKind::GroupIso => "group-iso-12",
            BuilderKind::RingMatch => "ring-single-12",
            BuilderKind::RingPartitions => "ring-partitions",
            BuilderKind::RingCollection => "ring-collection-10",
            BuilderKind::EntryShift => "cayley-shift-12",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }
}

/// How validation data is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// One dataset, random training share per `(gamma, repeat)` cell.
    Split,
    /// The builder emits its own training and validation sides; each repeat
    /// rebuilds both with the repeat's seed.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recipe {
    pub name: &'static str,
    pub version: u32,
    pub description: &'static str,
    pub builder: BuilderKind,
    pub protocol: Protocol,
    pub defaults: ExperimentConfig,
}

fn base(name: &str) -> ExperimentConfig {
    ExperimentConfig {
        recipe: name.to_string(),
        seed: Some(1),
        repeats: Some(5),
        svg: Some(true),
        ..Default::default()
    }
}

fn mlp(
    scheme: EncodingScheme,
    hidden: usize,
    epochs: usize,
    lr: f64,
    optimizer: Optimizer,
) -> ExperimentConfig {
    ExperimentConfig {
        model: Some(ModelKind::Mlp),
        scheme: Some(scheme),
        hidden: Some(vec![hidden]),
        epochs: Some(epochs),
        batch_size: Some(32),
        learning_rate: Some(lr),
        momentum: Some(0.9),
        loss: Some(Loss::Mse),
        optimizer: Some(optimizer),
        ..Default::default()
    }
}

fn linear(scheme: EncodingScheme, epochs: usize, lambda: f64) -> ExperimentConfig {
    ExperimentConfig {
        model: Some(ModelKind::Linear),
        scheme: Some(scheme),
        epochs: Some(epochs),
        lambda: Some(lambda),
        ..Default::default()
    }
}

fn recipe(
    name: &'static str,
    description: &'static str,
    builder: BuilderKind,
    protocol: Protocol,
    data: ExperimentConfig,
    model: ExperimentConfig,
) -> Recipe {
    let mut defaults = data.over(&base(name)).and_then(|c| model.over(&c)).expect("recipe defaults merge");
    defaults.recipe = name.to_string();
    Recipe { name, version: 1, description, builder, protocol, defaults }
}

fn unseen(name: &'static str, description: &'static str, seen: Vec<usize>) -> Recipe {
    recipe(
        name,
        description,
        BuilderKind::UnseenGroup,
        Protocol::Fixed,
        ExperimentConfig {
            n: Some(8),
            seen: Some(seen),
            k_perms: Some(30),
            num_latin: Some(15000),
            train_size: Some(2000),
            ..Default::default()
        },
        mlp(EncodingScheme::OneHot, 32, 30, 0.5, Optimizer::Momentum),
    )
}

/// Every named recipe, in a stable order.
pub fn recipes() -> Vec<Recipe> {
    use BuilderKind as B;
    use EncodingScheme::{OneHot, ScaledInteger};
    use Optimizer::{Adam, Momentum};
    vec![
        recipe(
            "cayley-n8",
            "Cayley tables of the five order-8 groups against random Latin squares, learning curve over training size",
            B::CayleyVsLatin,
            Protocol::Split,
            ExperimentConfig {
                n: Some(8),
                k_perms: Some(40),
                num_latin: Some(15000),
                train_sizes: Some((1..=12).map(|i| 500 * i).collect()),
                headline_train_size: Some(5000),
                ..Default::default()
            },
            mlp(OneHot, 32, 30, 0.5, Momentum),
        ),
        recipe(
            "cayley-n12",
            "Cayley tables of the five order-12 groups against random Latin squares, a quarter used for training",
            B::CayleyVsLatin,
            Protocol::Split,
            ExperimentConfig {
                n: Some(12),
                k_perms: Some(50),
                num_latin: Some(20000),
                gammas: Some(vec![0.25]),
                headline_gamma: Some(0.25),
                ..Default::default()
            },
            mlp(OneHot, 32, 30, 0.5, Momentum),
        ),
        unseen("unseen-n8", "train on order-8 groups 1, 2, 4 and score the two unseen groups", vec![1, 2, 4]),
        unseen("unseen-n8-s12", "train on order-8 groups 1, 2 and score the three unseen groups", vec![1, 2]),
        unseen("unseen-n8-s345", "train on order-8 groups 3, 4, 5 and score the two unseen groups", vec![3, 4, 5]),
        recipe(
            "simplicity-desk",
            "simple vs non-simple groups over catalog(32) plus A5 and A6, oversampling simple groups",
            B::Simplicity,
            Protocol::Split,
            ExperimentConfig {
                k_simple: Some(20),
                k_nonsimple: Some(5),
                gammas: Some(vec![0.05, 0.10, 0.15, 0.20, 0.25]),
                headline_gamma: Some(0.25),
                ..Default::default()
            },
            mlp(ScaledInteger, 8, 40, 0.3, Momentum),
        ),
        recipe(
            "subgroups-desk",
            "three-way subgroup-count classes over catalog(32)",
            B::SubgroupClasses,
            Protocol::Split,
            ExperimentConfig {
                max_order: Some(32),
                k_perms: Some(5),
                t1: Some(30),
                t2: Some(100),
                count: Some(SubgroupCount::Total),
                gammas: Some(vec![0.1, 0.2, 0.3, 0.4, 0.5]),
                headline_gamma: Some(0.5),
                ..Default::default()
            },
            mlp(ScaledInteger, 32, 40, 0.3, Momentum),
        ),
        recipe(
            "group-iso-12",
            "isomorphic vs non-isomorphic pairs: Dic12, C12, A4 for training, D12 and C6xC2 for validation",
            B::GroupIso,
            Protocol::Fixed,
            ExperimentConfig {
                n: Some(12),
                s1: Some(vec!["Dic12".into(), "C12".into(), "A4".into()]),
                s2: Some(vec!["D12".into(), "C6xC2".into()]),
                pairs_per_class: Some(10000),
                ..Default::default()
            },
            linear(ScaledInteger, 10, 1e-4),
        ),
        recipe(
            "ring-partitions",
            "matched vs mismatched table pairs over the eleven rings prod Z/2^(n_i) with sum n_i = 6",
            B::RingPartitions,
            Protocol::Split,
            ExperimentConfig {
                partition_total: Some(6),
                k_correct: Some(400),
                k_incorrect: Some(909),
                train_sizes: Some(vec![5000]),
                headline_train_size: Some(5000),
                ..Default::default()
            },
            mlp(ScaledInteger, 32, 30, 0.1, Momentum),
        ),
        recipe(
            "ring-single-12",
            "matched vs mismatched table pairs of Z2 x Z2 x Z3",
            B::RingMatch,
            Protocol::Split,
            ExperimentConfig {
                moduli: Some(vec![2, 2, 3]),
                k_correct: Some(2500),
                k_incorrect: Some(10000),
                train_sizes: Some(vec![4000]),
                headline_train_size: Some(4000),
                ..Default::default()
            },
            mlp(ScaledInteger, 32, 300, 0.1, Momentum),
        ),
        recipe(
            "ring-collection-10",
            "train on rings of sizes 2..8, validate on the unseen sizes 9 and 10",
            B::RingCollection,
            Protocol::Fixed,
            ExperimentConfig {
                ring_size: Some(10),
                train_rings: Some(7),
                k_correct: Some(833),
                k_incorrect: Some(3334),
                ..Default::default()
            },
            mlp(ScaledInteger, 64, 100, 0.001, Adam),
        ),
        recipe(
            "cayley-shift-12",
            "order-12 Cayley tables with entries shifted per permutation against one fixed non-group square",
            B::EntryShift,
            Protocol::Split,
            ExperimentConfig {
                n: Some(12),
                k_perms: Some(50),
                num_negative: Some(12500),
                train_sizes: Some(vec![10000]),
                headline_train_size: Some(10000),
                ..Default::default()
            },
            mlp(ScaledInteger, 32, 30, 0.1, Momentum),
        ),
    ]
}

pub fn find_recipe(name: &str) -> Result<Recipe> {
    recipes().into_iter().find(|r| r.name == name).ok_or_else(|| Error::UnknownRecipe(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_builders_have_base_recipes() {
        let all = recipes();
        let mut names: Vec<_> = all.iter().map(|r| r.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        for b in BuilderKind::ALL {
            let r = find_recipe(b.base_recipe()).unwrap();
            assert_eq!(r.builder, b);
            assert_eq!(BuilderKind::from_name(b.name()), Some(b));
        }
        assert!(matches!(find_recipe("nope"), Err(Error::UnknownRecipe(_))));
    }

    #[test]
    fn defaults_name_their_recipe() {
        for r in recipes() {
            assert_eq!(r.defaults.recipe, r.name);
            assert!(r.defaults.seed.is_some() && r.defaults.trainer().is_ok());
        }
    }
}
