use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

pub type ColorId = usize;

/// Ordered global color set; its length fixes the observation width.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColorSet(pub Vec<String>);

impl ColorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        ColorSet(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<ColorId> {
        self.0.iter().position(|c| c == name)
    }

    pub fn name(&self, id: ColorId) -> Option<&str> {
        self.0.get(id).map(String::as_str)
    }
}

/// A foraging task: which color must be retrieved and which colors are on
/// the floor.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskSpec {
    pub id: String,
    pub target: ColorId,
    pub active: Vec<ColorId>,
    pub colors: ColorSet,
}

impl TaskSpec {
    /// Task named after its target color, with the given distractors.
    pub fn from_names(colors: &ColorSet, target: &str, distractors: &[&str]) -> Result<Self> {
        let lookup = |n: &str| {
            colors
                .index(n)
                .ok_or_else(|| Error::Config(alloc::format!("color {n} is not in the global color set")))
        };
        let target_id = lookup(target)?;
        let mut active = alloc::vec![target_id];
        for d in distractors {
            active.push(lookup(d)?);
        }
        let task = TaskSpec {
            id: target.into(),
            target: target_id,
            active,
            colors: colors.clone(),
        };
        task.validate()?;
        Ok(task)
    }

    pub fn n_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn distractors(&self) -> impl Iterator<Item = ColorId> + '_ {
        self.active.iter().copied().filter(move |&c| c != self.target)
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.colors.len();
        if self.target >= c || self.active.iter().any(|&a| a >= c) {
            return Err(Error::config("task color outside the global color set"));
        }
        if !self.active.contains(&self.target) {
            return Err(Error::config("target color must be active"));
        }
        if self.distractors().next().is_none() {
            return Err(Error::config("a task needs at least one non-target color"));
        }
        Ok(())
    }
}
